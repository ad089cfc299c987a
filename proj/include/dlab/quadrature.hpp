#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "dlab/errors.hpp"

namespace dlab {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t intervals = 0;
};

namespace detail {

// Gauss-Kronrod 15-point nodes/weights on [-1, 1] with the embedded
// 7-point Gauss rule (positive half; symmetric).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <class F>
void gk15(const F &f, double a, double b, double &kronrod, double &gauss) {
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (a + b);
  kronrod = 0.0;
  gauss = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    const double x = h * kKronrodNodes[i];
    const double fv = (i == 7) ? f(c) : f(c - x) + f(c + x);
    kronrod += kKronrodWeights[i] * fv;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fv;
  }
  kronrod *= h;
  gauss *= h;
}

} // namespace detail

/// Adaptive Gauss-Kronrod integration over [a, b]. Bisects the interval
/// with the worst embedded-rule error estimate until the global estimate
/// meets rel_tol (or abs_tol), within a subdivision budget.
template <class F>
QuadratureResult integrate(const F &f, double a, double b, double rel_tol = 1e-8,
                           double abs_tol = 0.0, std::size_t max_intervals = 2000) {
  struct Seg {
    double a, b, value, error;
  };
  std::vector<Seg> segs;
  auto eval_seg = [&](double lo, double hi) {
    double k, g;
    detail::gk15(f, lo, hi, k, g);
    return Seg{lo, hi, k, std::abs(k - g)};
  };
  segs.push_back(eval_seg(a, b));
  while (true) {
    double total = 0.0, err = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      total += segs[i].value;
      err += segs[i].error;
      if (segs[i].error > segs[worst].error) worst = i;
    }
    const double goal = std::max(abs_tol, rel_tol * std::abs(total));
    if (err <= goal || segs[worst].error == 0.0)
      return {total, err, segs.size()};
    if (segs.size() >= max_intervals)
      throw QuadratureFailure("adaptive quadrature exceeded its subdivision budget");
    const Seg s = segs[worst];
    const double mid = 0.5 * (s.a + s.b);
    segs[worst] = eval_seg(s.a, mid);
    segs.push_back(eval_seg(mid, s.b));
  }
}

/// Same, but with user-supplied interior break points (density peaks,
/// integrand kinks). Points outside (a, b) are ignored.
template <class F>
QuadratureResult integrate_with_splits(const F &f, double a, double b,
                                       std::vector<double> splits, double rel_tol = 1e-8,
                                       double abs_tol = 0.0, std::size_t max_intervals = 2000) {
  std::sort(splits.begin(), splits.end());
  QuadratureResult total;
  double prev = a;
  for (double x : splits) {
    if (x <= prev || x >= b) continue;
    auto r = integrate(f, prev, x, rel_tol, abs_tol, max_intervals);
    total.value += r.value;
    total.error += r.error;
    total.intervals += r.intervals;
    prev = x;
  }
  {
    auto r = integrate(f, prev, b, rel_tol, abs_tol, max_intervals);
    total.value += r.value;
    total.error += r.error;
    total.intervals += r.intervals;
  }
  return total;
}

} // namespace dlab
