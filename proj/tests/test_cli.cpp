#include <doctest.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dlab/cli.hpp"
#include "dlab/spec_io.hpp"

using namespace dlab;

namespace {

std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string write_temp(const std::string &name, const std::string &text) {
  const std::string path = std::string("/tmp/dlab_test_") + name;
  std::ofstream out(path, std::ios::trunc);
  out << text;
  return path;
}

const char *kDrudeJson =
    R"({"eps0":1,"mu0":1,"electric":[{"omega":0,"coupling":1,"damping":0}],)"
    R"("magnetic":[{"omega":0,"coupling":2,"damping":0}]})";

} // namespace

TEST_SUITE("cli") {

TEST_CASE("spec parsing") {
  SUBCASE("well formed") {
    const MaterialSpec spec = parse_spec(
        R"({"eps0":1,"mu0":1,"electric":[{"omega":2,"coupling":1,"damping":0}],"magnetic":[]})");
    REQUIRE(spec.electric().size() == 1);
    CHECK(spec.electric()[0].resonance == 2.0);
    CHECK(spec.electric()[0].coupling == 1.0);
    CHECK(spec.magnetic().empty());
  }
  SUBCASE("missing coupling names the field path") {
    CHECK_THROWS_WITH_AS(parse_spec(R"({"electric":[{"omega":2,"damping":0}]})"),
                         doctest::Contains("electric[0].coupling"), SchemaError);
  }
  SUBCASE("duplicate oscillators violate the spec invariant") {
    CHECK_THROWS_AS(
        parse_spec(
            R"({"electric":[{"omega":2,"coupling":1,"damping":0},{"omega":2,"coupling":2,"damping":0}]})"),
        ValidationError);
  }
  SUBCASE("si units fill in the vacuum constants") {
    const MaterialSpec spec = parse_spec(R"({"units":"si"})");
    CHECK(spec.eps0() == doctest::Approx(8.8419e-12).epsilon(1e-3));
    CHECK(spec.mu0() == doctest::Approx(1.2566e-6).epsilon(1e-3));
  }
  SUBCASE("malformed json") {
    CHECK_THROWS_AS(parse_spec("{"), SchemaError);
    CHECK_THROWS_AS(parse_spec(R"({"eps0":"x"})"), SchemaError);
  }
  SUBCASE("round trip through the json form") {
    const MaterialSpec spec = parse_spec(kDrudeJson);
    const MaterialSpec again = parse_spec(spec_to_json(spec).dump());
    CHECK(again.magnetic()[0].coupling == spec.magnetic()[0].coupling);
  }
}

TEST_CASE("bands on the Drude pair reports a negative index medium") {
  const std::string spec = write_temp("drude.json", kDrudeJson);
  const std::string out = "/tmp/dlab_test_bands.json";
  cli::RunConfig cfg;
  cfg.command = "bands";
  cfg.spec_path = spec;
  cfg.out_path = out;
  REQUIRE(cli::run(cfg) == 0);
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["negative_index"].get<bool>() == true);
  CHECK(j["gaps"][0]["lo"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(j["gaps"][0]["hi"].get<double>() == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("check on vacuum passes every flag") {
  const std::string spec = write_temp("vacuum.json", R"({"eps0":1,"mu0":1})");
  const std::string out = "/tmp/dlab_test_check.json";
  cli::RunConfig cfg;
  cfg.command = "check";
  cfg.spec_path = spec;
  cfg.out_path = out;
  cfg.grid_points = 30;
  REQUIRE(cli::run(cfg) == 0);
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["assumption1_ok"].get<bool>());
  CHECK(j["assumption2_ok"].get<bool>());
  CHECK(j["assumption3_ok"].get<bool>());
  CHECK(j["herglotz"]["min_im_omega_eps"].get<double>() > 0.0);
  CHECK(j["passivity_sample_ok"].get<bool>());
}

TEST_CASE("decay smoke run stays fast and writes both artifacts") {
  const std::string spec = write_temp(
      "diss.json",
      R"({"electric":[{"omega":2,"coupling":1,"damping":0.5}],"magnetic":[{"omega":3,"coupling":1.5,"damping":0.25}]})");
  cli::RunConfig cfg;
  cfg.command = "decay";
  cfg.spec_path = spec;
  cfg.out_path = "/tmp/dlab_test_decay.csv";
  cfg.points = 200; // 20 nodes per decade
  cfg.tpoints = 10;
  cfg.tmin = 1.0;
  cfg.tmax = 1e4;
  const auto t0 = std::chrono::steady_clock::now();
  REQUIRE(cli::run(cfg) == 0);
  const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(dt < 5.0);
  CHECK(slurp("/tmp/dlab_test_decay.csv").rfind("t,energy,energy_total,lf,mf,hf\n", 0) == 0);
  const auto j = nlohmann::json::parse(slurp("/tmp/dlab_test_decay.json"));
  CHECK(j.contains("fitted_exponent"));
  CHECK(j.contains("predicted_exponent"));
  CHECK(j.contains("r2"));
}

TEST_CASE("byte identical outputs across repeated runs") {
  const std::string spec = write_temp("drude2.json", kDrudeJson);
  cli::RunConfig cfg;
  cfg.command = "dispersion-trace";
  cfg.spec_path = spec;
  cfg.kmin = 1e-2;
  cfg.kmax = 1e2;
  cfg.points = 50;
  cfg.out_path = "/tmp/dlab_test_trace_a.csv";
  REQUIRE(cli::run(cfg) == 0);
  cfg.out_path = "/tmp/dlab_test_trace_b.csv";
  REQUIRE(cli::run(cfg) == 0);
  const std::string a = slurp("/tmp/dlab_test_trace_a.csv");
  CHECK(a == slurp("/tmp/dlab_test_trace_b.csv"));
  CHECK(a.rfind("k,n,re_omega,im_omega\n", 0) == 0);
}

TEST_CASE("error paths map to exit codes") {
  SUBCASE("assumption-gated refusal returns 2") {
    const std::string spec = write_temp(
        "dissbands.json", R"({"electric":[{"omega":2,"coupling":1,"damping":0.5}]})");
    cli::RunConfig cfg;
    cfg.command = "bands";
    cfg.spec_path = spec;
    cfg.out_path = "/tmp/dlab_test_refuse.json";
    CHECK(cli::run(cfg) == 2);
  }
  SUBCASE("schema errors return 1") {
    const std::string spec = write_temp("broken.json", "{");
    cli::RunConfig cfg;
    cfg.command = "check";
    cfg.spec_path = spec;
    cfg.out_path = "-";
    CHECK(cli::run(cfg) == 1);
  }
  SUBCASE("missing file returns 1") {
    cli::RunConfig cfg;
    cfg.command = "check";
    cfg.spec_path = "/tmp/definitely_not_here.json";
    CHECK(cli::run(cfg) == 1);
  }
  SUBCASE("unknown command returns 1") {
    cli::RunConfig cfg;
    cfg.command = "frobnicate";
    CHECK(cli::run(cfg) == 1);
  }
}

TEST_CASE("installed binary end to end") {
  const std::string spec = write_temp("drude3.json", kDrudeJson);
  const std::string cmd = std::string(DLAB_TOOL_PATH) + " bands --spec " + spec +
                          " --out /tmp/dlab_test_tool_bands.json";
  REQUIRE(std::system(cmd.c_str()) == 0);
  const auto j = nlohmann::json::parse(slurp("/tmp/dlab_test_tool_bands.json"));
  CHECK(j["negative_index"].get<bool>());

  // assumption-gated refusal surfaces as status 2 through the shell
  const std::string diss = write_temp(
      "diss2.json", R"({"electric":[{"omega":2,"coupling":1,"damping":0.5}]})");
  const int rc = std::system(
      (std::string(DLAB_TOOL_PATH) + " bands --spec " + diss + " --out /dev/null 2>/dev/null").c_str());
  CHECK(WEXITSTATUS(rc) == 2);
}

} // TEST_SUITE
