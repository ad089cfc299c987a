#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "dlab/errors.hpp"

namespace dlab {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
};

/// Ordinary least squares y = slope*x + intercept.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  LineFit out;
  const double den = double(n) * sxx - sx * sx;
  out.slope = (double(n) * sxy - sx * sy) / den;
  out.intercept = (sy - out.slope * sx) / double(n);
  double ss_res = 0.0;
  const double mean_y = sy / double(n);
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (out.slope * x[i] + out.intercept);
    ss_res += r * r;
    ss_tot += (y[i] - mean_y) * (y[i] - mean_y);
  }
  out.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return out;
}

/// Slope of log(y) against log(x); both inputs must be positive.
inline LineFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  return fit_line(lx, ly);
}

/// Slope of log(y) against x (exponential-rate fit).
inline LineFit fit_semilog(std::span<const double> x, std::span<const double> y) {
  std::vector<double> ly(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) ly[i] = std::log(y[i]);
  return fit_line(x, ly);
}

/// Polynomial extrapolation of the last three (h, value) samples to
/// h -> 0 (Neville). Used for the vanishing-eta limits of the Stieltjes
/// inversion formulas.
struct Extrapolation {
  double limit = 0.0;
  double residual = 0.0;      ///< |last correction| of the Neville tableau
  double last_increment = 0.0; ///< |change between the last two raw samples|
};

inline Extrapolation richardson_extrapolate(std::span<const double> h,
                                            std::span<const double> v) {
  const std::size_t n = std::min<std::size_t>(3, h.size());
  const std::size_t off = h.size() - n;
  std::vector<double> t(v.begin() + long(off), v.end());
  std::vector<double> hh(h.begin() + long(off), h.end());
  Extrapolation out;
  out.last_increment = n >= 2 ? std::abs(t[n - 1] - t[n - 2]) : 0.0;
  double prev_level = t[n - 1];
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = n - 1; i >= level; --i)
      t[i] = t[i] + (t[i] - t[i - 1]) * hh[i] / (hh[i - level] - hh[i]);
    if (level + 1 < n) prev_level = t[n - 1];
  }
  out.limit = t[n - 1];
  out.residual = std::abs(out.limit - prev_level);
  return out;
}

} // namespace dlab
