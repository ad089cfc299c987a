#include <doctest.h>

#include "dlab/decay.hpp"
#include "dlab/quadrature.hpp"
#include "test_helpers.hpp"

using namespace dlab;
using dlab::testing::lorentz_one_term;
using dlab::testing::strongly_dissipative_two;
using dlab::testing::weakly_dissipative;

namespace {

std::vector<double> log_times(double lo, double hi, std::size_t n) {
  std::vector<double> ts;
  for (std::size_t i = 0; i < n; ++i)
    ts.push_back(lo * std::pow(hi / lo, double(i) / double(n - 1)));
  return ts;
}

HarnessOptions fast_options() {
  HarnessOptions opt;
  opt.points = 1200;
  opt.threads = 4;
  return opt;
}

} // namespace

TEST_SUITE("decay") {

TEST_CASE("initial energy matches the direct profile integral") {
  const MaterialSpec spec = strongly_dissipative_two();
  InitialDataProfile prof;
  prof.s = 2.0;
  prof.p = 1.0;
  const PlancherelHarness h(spec, prof, fast_options());
  const double e0 = h.electromagnetic_energy(0.0);
  auto integrand = [&](double k) {
    const double g = prof(k);
    return 0.5 * (spec.eps0() + spec.mu0()) * g * g * k * k;
  };
  const double direct =
      4.0 * 3.14159265358979323846 * integrate(integrand, h.k_lo(), h.k_hi(), 1e-10, 0.0, 4000).value;
  CHECK(e0 == doctest::Approx(direct).epsilon(1e-6));
}

TEST_CASE("lossless media conserve the total weighted energy") {
  const MaterialSpec spec = lorentz_one_term();
  InitialDataProfile prof;
  prof.s = 2.0;
  const PlancherelHarness h(spec, prof, fast_options());
  double tot0 = 0.0;
  const double em0 = h.electromagnetic_energy(0.0, nullptr, nullptr, nullptr, &tot0);
  for (double t : {1.0, 10.0, 300.0}) {
    double tot = 0.0;
    const double em = h.electromagnetic_energy(t, nullptr, nullptr, nullptr, &tot);
    CHECK(tot == doctest::Approx(tot0).epsilon(1e-6));
    CHECK(em <= tot0 * (1.0 + 1e-9));
  }
  CHECK(em0 <= tot0);
}

TEST_CASE("dissipative energies decrease monotonically") {
  const MaterialSpec spec = strongly_dissipative_two();
  InitialDataProfile prof;
  prof.s = 2.0;
  const PlancherelHarness h(spec, prof, fast_options());
  const EnergyTrace tr = h.trace(log_times(1.0, 1e4, 15));
  for (std::size_t i = 1; i < tr.times.size(); ++i) {
    CHECK(tr.energy[i] <= tr.energy[i - 1] * (1.0 + 1e-3));
    CHECK(tr.energy_total[i] <= tr.energy_total[i - 1] * (1.0 + 1e-3));
  }
  // short-time continuity towards the t = 0 value
  CHECK(h.electromagnetic_energy(1e-6) ==
        doctest::Approx(h.electromagnetic_energy(0.0)).epsilon(1e-4));
}

TEST_CASE("middle frequency window decays exponentially") {
  const MaterialSpec spec = strongly_dissipative_two();
  InitialDataProfile prof;
  prof.s = 2.0;
  prof.band_limit = {{0.5, 5.0}};
  const PlancherelHarness h(spec, prof, fast_options());
  // slowest spectral decay rate over the supported wavenumbers
  double nu = 1e300;
  for (double k : {0.5, 1.0, 2.0, 3.5, 5.0}) {
    const SpectralDecomposition dec = spectral_decomposition(build_modal(spec, k, +1));
    for (Eigen::Index i = 0; i < dec.eigenvalues.size(); ++i)
      nu = std::min(nu, -dec.eigenvalues(i).imag());
  }
  std::vector<double> ts = log_times(10.0 / nu, 25.0 / nu, 10);
  const EnergyTrace tr = h.trace(ts);
  const LineFit fit = fit_semilog(tr.times, tr.energy);
  CHECK(-fit.slope == doctest::Approx(2.0 * nu).epsilon(0.05));
}

TEST_CASE("region split is consistent") {
  const MaterialSpec spec = strongly_dissipative_two();
  InitialDataProfile prof;
  prof.s = 2.0;
  const PlancherelHarness h(spec, prof, fast_options());
  for (double t : {0.0, 5.0, 500.0}) {
    double lf = 0, mf = 0, hf = 0;
    const double total = h.electromagnetic_energy(t, &lf, &mf, &hf);
    CHECK(total == doctest::Approx(lf + mf + hf).epsilon(1e-12));
    CHECK(lf >= 0.0);
    CHECK(mf >= 0.0);
    CHECK(hf >= 0.0);
  }
  // late time: the middle band is exponentially gone, the total follows
  // the polynomial regions
  double lf = 0, mf = 0, hf = 0;
  h.electromagnetic_energy(2e4, &lf, &mf, &hf);
  CHECK(mf <= 1e-6 * (lf + hf));
}

TEST_CASE("amplitude scaling is quadratic") {
  const MaterialSpec spec = strongly_dissipative_two();
  InitialDataProfile prof;
  prof.s = 3.0;
  InitialDataProfile doubled = prof;
  doubled.amplitude = 2.0;
  const PlancherelHarness h1(spec, prof, fast_options());
  const PlancherelHarness h2(spec, doubled, fast_options());
  for (double t : {0.0, 3.0, 700.0})
    CHECK(h2.electromagnetic_energy(t) ==
          doctest::Approx(4.0 * h1.electromagnetic_energy(t)).epsilon(1e-12));
}

TEST_CASE("exponent fitting on synthetic traces") {
  EnergyTrace tr;
  tr.times = log_times(1.0, 1e3, 25);
  for (double t : tr.times) tr.energy.push_back(std::pow(t, -3.0));
  CHECK(fit_decay_exponent(tr, 1.0, 1e3).slope == doctest::Approx(-3.0).epsilon(1e-12));

  EnergyTrace mixed;
  mixed.times = log_times(1e2, 1e4, 30);
  for (double t : mixed.times) mixed.energy.push_back(5.0 * std::pow(t, -2.0) + std::pow(t, -4.0));
  CHECK(fit_decay_exponent(mixed, 1e3, 1e4).slope == doctest::Approx(-2.0).epsilon(0.01));

  EnergyTrace junk;
  junk.times = {1.0, 2.0, 4.0, 8.0, 16.0};
  junk.energy = {1.0, 10.0, 0.1, 5.0, 0.01};
  CHECK_THROWS_AS(fit_decay_exponent(junk, 1.0, 16.0), RegressionUnstable);
}

TEST_CASE("predicted exponents") {
  InitialDataProfile p40;
  p40.s = 4.0;
  p40.p = 0.0;
  InitialDataProfile p13;
  p13.s = 1.0;
  p13.p = 3.0;
  InitialDataProfile p23;
  p23.s = 2.0;
  p23.p = 3.0;
  const MaterialSpec strong = strongly_dissipative_two();
  const MaterialSpec weak = weakly_dissipative();
  CHECK(predicted_exponent(strong, p40) == doctest::Approx(1.5));
  CHECK(predicted_exponent(strong, p13) == doctest::Approx(1.0));
  CHECK(predicted_exponent(weak, p23) == doctest::Approx(1.0));
  CHECK(predicted_exponent(weak, p40) == doctest::Approx(1.5));
  CHECK_THROWS_AS(predicted_exponent(lorentz_one_term(), p40), AssumptionViolated);
}

TEST_CASE("fitted decay exponents across the design") {
  // Four mechanism cells. In the weakly dissipative HF-limited cell the
  // resonant modes receive their energy through a transverse overlap
  // that shrinks like 1/k, so electromagnetic data decays at
  // (s + 2 + margin)/2 rather than the s/2 upper-bound rate; the other
  // three cells saturate their predicted exponents.
  const MaterialSpec strong = strongly_dissipative_two();
  const MaterialSpec weak = weakly_dissipative();
  struct Cell {
    const MaterialSpec *spec;
    double s, p, expect, tol;
  };
  const Cell cells[] = {
      {&strong, 4.0, 0.0, 1.5, 0.15},
      {&strong, 1.0, 3.0, 1.0, 0.10},
      {&weak, 4.0, 0.0, 1.5, 0.15},
      {&weak, 2.0, 3.0, (2.0 + 2.0 + 0.05) / 2.0, 0.20},
  };
  for (const Cell &cell : cells) {
    InitialDataProfile prof;
    prof.s = cell.s;
    prof.p = cell.p;
    const PlancherelHarness h(*cell.spec, prof, fast_options());
    const EnergyTrace tr = h.trace(log_times(1e4, 1e7, 22));
    const LineFit fit = fit_decay_exponent(tr, 1e6, 1e7);
    CHECK(-fit.slope == doctest::Approx(cell.expect).epsilon(cell.tol / cell.expect));
  }
}

TEST_CASE("harness input validation") {
  InitialDataProfile prof;
  CHECK_THROWS_AS(total_energy(strongly_dissipative_two(), prof, -1.0), ValidationError);
}

} // TEST_SUITE
