#include <CLI11.hpp>

#include "dlab/cli.hpp"

int main(int argc, char **argv) {
  CLI::App app{"dispersion-lab: passive dispersive media analysis"};
  app.require_subcommand(1);

  dlab::cli::RunConfig cfg;

  auto add_common = [&](CLI::App *sub) {
    sub->add_option("--spec", cfg.spec_path, "material spec JSON file")->required();
    sub->add_option("--out", cfg.out_path, "output file ('-' for stdout)");
    sub->add_option("--threads", cfg.threads,
                    "worker threads (DISPERSION_LAB_THREADS overrides)");
  };

  auto *check = app.add_subcommand("check", "structure report plus passivity sampling");
  add_common(check);
  check->add_option("--grid-points", cfg.grid_points, "sampling grid points per axis");

  auto *herglotz = app.add_subcommand("herglotz", "upper half-plane sampling report");
  add_common(herglotz);
  herglotz->add_option("--grid-points", cfg.grid_points, "sampling grid points per axis");

  auto *measure = app.add_subcommand("measure", "measure atoms and density samples (CSV)");
  add_common(measure);
  measure->add_option("--channel", cfg.channel, "electric | magnetic")
      ->check(CLI::IsMember({"electric", "magnetic"}));
  measure->add_option("--ximax", cfg.ximax, "sampling half-range (0: from the spec)");
  measure->add_option("--points", cfg.points, "sample count");

  auto *dispersion = app.add_subcommand("dispersion", "dispersion relation tools");
  auto *trace = dispersion->add_subcommand("trace", "trace branches over a wavenumber grid (CSV)");
  add_common(trace);
  trace->add_option("--kmin", cfg.kmin, "lowest positive wavenumber");
  trace->add_option("--kmax", cfg.kmax, "highest wavenumber");
  trace->add_option("--points", cfg.points, "log-spaced point count");

  auto *bands = app.add_subcommand("bands", "band structure of a lossless medium (JSON)");
  add_common(bands);

  auto *asym = app.add_subcommand("asymptotics", "decay-rate coefficients and branch fits (JSON)");
  add_common(asym);
  asym->add_option("--points", cfg.points, "trace grid size");

  auto *modal = app.add_subcommand("modal", "modal matrix tools");
  auto *spectrum = modal->add_subcommand("spectrum", "eigenvalues at one wavenumber (JSON)");
  add_common(spectrum);
  spectrum->add_option("--k", cfg.k, "wavenumber")->required();
  auto *evolve = modal->add_subcommand("evolve", "energy ledger of a reference integration (CSV)");
  add_common(evolve);
  evolve->add_option("--k", cfg.k, "wavenumber")->required();
  evolve->add_option("--t", cfg.t, "final time")->required();
  evolve->add_option("--dt", cfg.dt, "time step");

  auto *decay = app.add_subcommand("decay", "energy decay trace and fitted exponent (CSV+JSON)");
  add_common(decay);
  decay->add_option("--s", cfg.s, "Sobolev index of the initial data");
  decay->add_option("--p", cfg.p, "low-frequency moment order");
  decay->add_option("--tmin", cfg.tmin, "first sample time");
  decay->add_option("--tmax", cfg.tmax, "last sample time");
  decay->add_option("--points", cfg.points, "radial quadrature nodes");
  decay->add_option("--tpoints", cfg.tpoints, "time samples");

  CLI11_PARSE(app, argc, argv);

  if (check->parsed()) cfg.command = "check";
  if (herglotz->parsed()) cfg.command = "herglotz";
  if (measure->parsed()) cfg.command = "measure";
  if (dispersion->parsed() && trace->parsed()) cfg.command = "dispersion-trace";
  if (bands->parsed()) cfg.command = "bands";
  if (asym->parsed()) cfg.command = "asymptotics";
  if (modal->parsed() && spectrum->parsed()) cfg.command = "modal-spectrum";
  if (modal->parsed() && evolve->parsed()) cfg.command = "modal-evolve";
  if (decay->parsed()) cfg.command = "decay";
  if (cfg.command.empty()) {
    std::cerr << "error: cli.unknown_command: missing subcommand\n";
    return 1;
  }
  return dlab::cli::run(cfg);
}
