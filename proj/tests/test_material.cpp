#include <doctest.h>

#include <random>

#include "dlab/material.hpp"
#include "test_helpers.hpp"

using namespace dlab;
using dlab::testing::lorentz_one_term;
using dlab::testing::random_dissipative;
using dlab::testing::random_lossless;
using dlab::testing::vacuum;

TEST_SUITE("material") {

TEST_CASE("spec validation rejects bad oscillators") {
  CHECK_THROWS_AS(MaterialSpec(0.0, 1.0, {}, {}), ValidationError);
  CHECK_THROWS_AS(MaterialSpec(1.0, 1.0, {{0.0, 1.0, 0.0}}, {}), ValidationError);
  CHECK_THROWS_AS(MaterialSpec(1.0, 1.0, {{1.0, -1.0, 0.0}}, {}), ValidationError);
  CHECK_THROWS_AS(MaterialSpec(1.0, 1.0, {{1.0, 1.0, -0.5}}, {}), ValidationError);
  // two electric oscillators sharing the (damping, resonance) pair
  CHECK_THROWS_AS(MaterialSpec(1.0, 1.0, {{1.0, 2.0, 0.0}, {0.5, 2.0, 0.0}}, {}), ValidationError);
  // same pair on different channels is fine
  CHECK_NOTHROW(MaterialSpec(1.0, 1.0, {{1.0, 2.0, 0.0}}, {{1.0, 2.0, 0.0}}));
}

TEST_CASE("permittivity closed forms") {
  CHECK(eval_epsilon(lorentz_one_term(), {1.0, 0.0}).real() ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(eval_epsilon(lorentz_one_term(), {1.0, 0.0}).imag() == doctest::Approx(0.0));

  MaterialSpec damped(1.0, 1.0, {{1.0, 2.0, 1.0}}, {});
  const Complex e = eval_epsilon(damped, {1.0, 0.0});
  CHECK(e.real() == doctest::Approx(1.3).epsilon(1e-14));
  CHECK(e.imag() == doctest::Approx(0.1).epsilon(1e-14));

  CHECK(eval_epsilon(vacuum(), {0.37, 1.2}) == Complex(1.0, 0.0));
}

TEST_CASE("permeability closed forms") {
  CHECK(eval_mu(vacuum(), {5.0, 0.1}) == Complex(1.0, 0.0));

  MaterialSpec drude_m(1.0, 1.0, {}, {{2.0, 0.0, 0.0}});
  CHECK(std::abs(eval_mu(drude_m, {2.0, 0.0})) == doctest::Approx(0.0));

  // damped oscillator evaluated on the imaginary axis stays real; the
  // oracle is an independent long double evaluation of the sum
  MaterialSpec m(1.0, 2.5, {}, {{1.0, 1.0, 0.5}});
  const Complex v = eval_mu(m, {0.0, 1.0});
  const long double oracle = 2.5L * (1.0L + 1.0L / (1.0L + 0.5L + 1.0L));
  CHECK(v.real() == doctest::Approx(double(oracle)).epsilon(1e-15));
  CHECK(v.imag() == doctest::Approx(0.0));
  CHECK(v.real() == doctest::Approx(2.5 * 1.4).epsilon(1e-15));
}

TEST_CASE("evaluation at a pole reports PoleHit") {
  CHECK_THROWS_AS(eval_epsilon(lorentz_one_term(), {2.0, 0.0}), PoleHit);
}

TEST_CASE("reality symmetry eps(-conj w) = conj(eps(w))") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const MaterialSpec spec = random_dissipative(rng);
    for (const Complex w : dlab::testing::random_upper_half_points(rng, 100)) {
      const Complex a = eval_epsilon(spec, -std::conj(w));
      const Complex b = std::conj(eval_epsilon(spec, w));
      CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(b)));
      const Complex am = eval_mu(spec, -std::conj(w));
      const Complex bm = std::conj(eval_mu(spec, w));
      CHECK(std::abs(am - bm) <= 1e-12 * (1.0 + std::abs(bm)));
    }
  }
}

TEST_CASE("high frequency limit |eps(iy)/eps0 - 1| <= C / y^2") {
  std::mt19937 rng(11);
  const MaterialSpec spec = random_dissipative(rng, 3);
  double c_bound = 0.0;
  for (const auto &o : spec.electric()) c_bound += o.coupling * o.coupling;
  const double y0 = 10.0 * spec.frequency_scale();
  for (double y : {y0, 3.0 * y0, 10.0 * y0, 100.0 * y0}) {
    const double defect = std::abs(eval_epsilon(spec, {0.0, y}) / spec.eps0() - 1.0);
    CHECK(defect <= c_bound / (y * y));
  }
}

TEST_CASE("herglotz sampling") {
  SUBCASE("vacuum is exactly linear") {
    const auto grid = log_polar_grid(0.1, 10.0, 20, 20);
    const HerglotzSample hs = herglotz_sample(vacuum(), grid);
    double min_im = 1e300;
    for (const Complex w : grid) min_im = std::min(min_im, w.imag());
    CHECK(hs.min_im_omega_eps == doctest::Approx(min_im).epsilon(1e-15));
    CHECK(hs.max_symmetry_defect == doctest::Approx(0.0));
  }
  SUBCASE("one-term value at i") {
    MaterialSpec spec(1.0, 1.0, {{1.0, 1.0, 0.0}}, {});
    const Complex w(0.0, 1.0);
    CHECK((w * eval_epsilon(spec, w)).imag() == doctest::Approx(1.5).epsilon(1e-15));
  }
  SUBCASE("positivity over a dense grid for random specs") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 6; ++trial) {
      const MaterialSpec spec = trial % 2 ? random_dissipative(rng) : random_lossless(rng);
      const double scale = spec.frequency_scale();
      const auto grid = log_polar_grid(1e-3 * scale, 1e3 * scale, 100, 100);
      const HerglotzSample hs = herglotz_sample(spec, grid);
      CHECK(hs.min_im_omega_eps > 0.0);
      CHECK(hs.min_im_omega_mu > 0.0);
      CHECK(hs.max_symmetry_defect <= 1e-11 * (1.0 + scale * scale));
    }
  }
  SUBCASE("grid points must sit strictly above the real axis") {
    std::vector<Complex> bad{{1.0, 0.0}};
    CHECK_THROWS_AS(herglotz_sample(vacuum(), bad), ValidationError);
  }
}

TEST_CASE("positivity of d(omega eps)/d omega between real poles") {
  // lossless two-resonance medium; the numerical derivative must be
  // positive on every pole-free stretch of the real axis
  MaterialSpec spec(1.0, 1.0, {{0.8, 1.0, 0.0}, {1.1, 2.5, 0.0}}, {});
  const std::vector<std::pair<double, double>> stretches{{0.05, 0.95}, {1.05, 2.45}, {2.55, 6.0}};
  for (const auto &[lo, hi] : stretches) {
    for (int i = 0; i < 100; ++i) {
      const double w = lo + (hi - lo) * (i + 0.5) / 100.0;
      const double h = 1e-6;
      const auto f = [&](double x) { return (x * eval_epsilon(spec, {x, 0.0})).real(); };
      CHECK((f(w + h) - f(w - h)) / (2.0 * h) > 0.0);
    }
  }
}

} // TEST_SUITE
