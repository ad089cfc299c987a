#include <doctest.h>

#include <random>

#include "dlab/measure.hpp"
#include "dlab/quadrature.hpp"
#include "test_helpers.hpp"

using namespace dlab;
using dlab::testing::random_dissipative;

namespace {

/// Fourth order integration of chi'' + a chi' + w0^2 chi = 0 from
/// (chi, chi') = (0, coupling^2); the independent kernel oracle.
double kernel_ode_oracle(const Oscillator &o, double t_final, double dt = 1e-5) {
  double chi = 0.0, v = o.coupling * o.coupling;
  const auto acc = [&](double c, double w) { return -o.damping * w - o.resonance * o.resonance * c; };
  double t = 0.0;
  while (t < t_final) {
    const double h = std::min(dt, t_final - t);
    const double k1c = v, k1v = acc(chi, v);
    const double k2c = v + 0.5 * h * k1v, k2v = acc(chi + 0.5 * h * k1c, v + 0.5 * h * k1v);
    const double k3c = v + 0.5 * h * k2v, k3v = acc(chi + 0.5 * h * k2c, v + 0.5 * h * k2v);
    const double k4c = v + h * k3v, k4v = acc(chi + h * k3c, v + h * k3v);
    chi += h / 6.0 * (k1c + 2.0 * k2c + 2.0 * k3c + k4c);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    t += h;
  }
  return chi;
}

const std::vector<double> kEtas{4e-3, 2e-3, 1e-3};

} // namespace

TEST_SUITE("measure") {

TEST_CASE("measure of a lossless term is a symmetric atom pair") {
  MaterialSpec spec(1.0, 1.0, {{1.0, 2.0, 0.0}}, {});
  const MeasureRepresentation m = measure_of(spec, Channel::electric);
  CHECK(m.herglotz_slope == 1.0);
  REQUIRE(m.atoms.size() == 1);
  CHECK(m.atoms[0].location == 2.0);
  CHECK(m.atoms[0].weight == doctest::Approx(0.5));
  CHECK(m.densities.empty());
}

TEST_CASE("measure of a damped term is the rational density") {
  MaterialSpec spec(1.0, 1.0, {{1.0, 2.0, 1.0}}, {});
  const MeasureRepresentation m = measure_of(spec, Channel::electric);
  CHECK(m.atoms.empty());
  REQUIRE(m.densities.size() == 1);
  const double pi = 3.14159265358979323846;
  for (double xi : {0.4, 1.9, 2.1, 7.0}) {
    const double expect = xi * xi / (pi * (std::pow(xi * xi - 4.0, 2.0) + xi * xi));
    CHECK(m.density_value(xi) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(m.density_value(-xi) == m.density_value(xi)); // evenness, exactly
  }
}

TEST_CASE("vacuum measure is empty with slope eps0") {
  const MeasureRepresentation m = measure_of(MaterialSpec(3.0, 1.0, {}, {}), Channel::electric);
  CHECK(m.herglotz_slope == 3.0);
  CHECK(m.atoms.empty());
  CHECK(m.densities.empty());
  CHECK(reconstruct(m, {0.7, 1.3}) == Complex(3.0, 0.0));
}

TEST_CASE("reconstruction from atoms is an exact sum") {
  MaterialSpec spec(1.0, 1.0, {{1.0, 2.0, 0.0}}, {});
  const MeasureRepresentation m = measure_of(spec, Channel::electric);
  CHECK(reconstruct(m, {0.0, 1.0}).real() == doctest::Approx(1.2).epsilon(1e-15));
  CHECK(reconstruct(m, {0.0, 1.0}).imag() == doctest::Approx(0.0));
}

TEST_CASE("reconstruction matches the material law across the upper half plane") {
  MaterialSpec one(1.0, 1.0, {{1.0, 2.0, 1.0}}, {});
  const MeasureRepresentation m1 = measure_of(one, Channel::electric);
  const Complex w(1.0, 1.0);
  CHECK(std::abs(reconstruct(m1, w) - eval_epsilon(one, w)) <= 1e-6);

  std::mt19937 rng(71);
  for (int trial = 0; trial < 4; ++trial) {
    const MaterialSpec spec = random_dissipative(rng, 2);
    const MeasureRepresentation me = measure_of(spec, Channel::electric);
    const MeasureRepresentation mm = measure_of(spec, Channel::magnetic);
    for (const Complex w : dlab::testing::random_upper_half_points(rng, 12, 3.0)) {
      const Complex ee = eval_epsilon(spec, w);
      CHECK(std::abs(reconstruct(me, w) - ee) <= 1e-6 * (1.0 + std::abs(ee)));
      const Complex mu = eval_mu(spec, w);
      CHECK(std::abs(reconstruct(mm, w) - mu) <= 1e-6 * (1.0 + std::abs(mu)));
    }
  }
}

TEST_CASE("stieltjes window around one atom") {
  MaterialSpec spec(1.0, 1.0, {{1.0, 2.0, 0.0}}, {});
  auto f = [&](Complex w) { return w * eval_epsilon(spec, w); };
  // the closed-plus-open interval formula counts the interior atom twice
  const StieltjesResult win = stieltjes_window(f, 1.5, 2.5, kEtas);
  CHECK(win.limit == doctest::Approx(1.0).epsilon(1e-3));
  // interval free of support
  CHECK(std::abs(stieltjes_window(f, 2.6, 3.4, kEtas).limit) <= 1e-6);
}

TEST_CASE("stieltjes window of a density matches the direct integral") {
  MaterialSpec spec(1.0, 1.0, {{1.0, 2.0, 1.0}}, {});
  const MeasureRepresentation m = measure_of(spec, Channel::electric);
  auto f = [&](Complex w) { return w * eval_epsilon(spec, w); };
  auto dens = [&](double xi) { return m.density_value(xi); };
  const double direct = integrate(dens, 0.0, 20.0, 1e-10).value;
  const StieltjesResult win = stieltjes_window(f, 0.0, 20.0, kEtas);
  CHECK(win.limit == doctest::Approx(2.0 * direct).epsilon(0.01));
}

TEST_CASE("stieltjes window validates its inputs") {
  auto f = [](Complex w) { return w; };
  CHECK_THROWS_AS(stieltjes_window(f, 2.0, 1.0, kEtas), ValidationError);
  const std::vector<double> rising{1e-3, 2e-3};
  CHECK_THROWS_AS(stieltjes_window(f, 0.0, 1.0, rising), ValidationError);
  const std::vector<double> too_small{1e-3, 1e-9};
  CHECK_THROWS_AS(stieltjes_window(f, 0.0, 1.0, too_small), ValidationError);
}

TEST_CASE("atom weight extraction") {
  MaterialSpec spec(1.0, 1.0, {{1.0, 2.0, 0.0}}, {});
  auto f = [&](Complex w) { return w * eval_epsilon(spec, w); };
  CHECK(atom_weight(f, 2.0, kEtas).limit == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::abs(atom_weight(f, 3.0, kEtas).limit) <= 1e-6);

  MaterialSpec damped(1.0, 1.0, {{1.0, 2.0, 1.0}}, {});
  auto fd = [&](Complex w) { return w * eval_epsilon(damped, w); };
  // absolutely continuous measures carry no atoms anywhere
  for (double a : {0.5, 2.0, 3.7}) CHECK(std::abs(atom_weight(fd, a, kEtas).limit) <= 1e-6);
}

TEST_CASE("weak convergence of densities onto the atom pair") {
  // against the gaussian test function exp(-xi^2); target (phi(2)+phi(-2))/2
  const double target = std::exp(-4.0);
  double prev_defect = 1e300;
  for (double alpha : {1.0, 0.1, 0.01}) {
    DensityTerm d{1.0, 2.0, alpha};
    auto f = [&](double xi) { return d(xi) * std::exp(-xi * xi); };
    const double integral = 2.0 * integrate(f, 0.0, 60.0, 1e-11, 0.0, 4000).value;
    const double defect = std::abs(integral - target);
    CHECK(defect < prev_defect);
    prev_defect = defect;
  }
  CHECK(prev_defect <= 2e-3);
}

TEST_CASE("each density carries the full atom mass") {
  for (double alpha : {0.3, 1.0, 5.0}) {
    DensityTerm d{1.0, 2.0, alpha};
    const double cutoff = 1e4;
    const double mass = 2.0 * integrate(d, 0.0, cutoff, 1e-11, 0.0, 4000).value;
    const double tail = 2.0 * alpha / (3.14159265358979323846 * cutoff);
    CHECK(mass + tail == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("susceptibility kernel closed forms") {
  CHECK(susceptibility_kernel({1.0, 2.0, 0.0}, 0.25 * 3.14159265358979323846) ==
        doctest::Approx(0.5).epsilon(1e-14));
  for (const Oscillator o : {Oscillator{1.0, 2.0, 0.0}, Oscillator{0.7, 1.0, 2.0},
                             Oscillator{1.3, 0.5, 3.0}})
    CHECK(susceptibility_kernel(o, 0.0) == 0.0);
  // critical damping
  CHECK(susceptibility_kernel({1.0, 1.0, 2.0}, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
}

TEST_CASE("kernel agrees with its defining initial value problem") {
  for (const Oscillator o : {Oscillator{1.0, 2.0, 0.3}, Oscillator{0.8, 1.0, 2.0},
                             Oscillator{1.2, 0.7, 3.5}}) {
    for (double t : {0.4, 1.3, 3.1})
      CHECK(susceptibility_kernel(o, t) ==
            doctest::Approx(kernel_ode_oracle(o, t)).epsilon(1e-8));
  }
}

TEST_CASE("kernel transform matches the closed-form response") {
  const Oscillator o{1.0, 2.0, 1.0};
  CHECK(kernel_transform_check(o, {0.0, 3.0}) <= 1e-6);
  // doubling the coupling rescales both sides; the defect is unchanged
  const Oscillator o2{2.0, 2.0, 1.0};
  CHECK(kernel_transform_check(o2, {0.0, 3.0}) ==
        doctest::Approx(kernel_transform_check(o, {0.0, 3.0})).epsilon(1e-6));
  // lossless term at high elevation: fast exponential truncation
  CHECK(kernel_transform_check({1.0, 2.0, 0.0}, {0.0, 10.0}, 1e-10) <= 1e-8);
  // refuses below the convergence margin
  CHECK_THROWS_AS(kernel_transform_check(o, {3.0, 0.0}), TruncationError);
}

} // TEST_SUITE
