#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "dlab/fitting.hpp"
#include "dlab/material.hpp"
#include "dlab/quadrature.hpp"

namespace dlab {

enum class Channel { electric, magnetic };

/// One symmetric point mass pair (+-location, each carrying `weight`).
struct PointMass {
  double location = 0.0;
  double weight = 0.0;
};

/// Continuous part contributed by one damped oscillator,
///   density(xi) = coupling^2 * (1/pi) * damping * xi^2
///                 / ((xi^2 - resonance^2)^2 + damping^2 xi^2),
/// an even function of xi that integrates to coupling^2 and collapses
/// onto the two point masses as damping -> 0.
struct DensityTerm {
  double coupling = 0.0;
  double resonance = 0.0;
  double damping = 0.0;

  double operator()(double xi) const {
    const double pi = 3.14159265358979323846;
    const double x2 = xi * xi;
    const double d = (x2 - resonance * resonance);
    return coupling * coupling * damping * x2 / (pi * (d * d + damping * damping * x2));
  }
};

/// Nevanlinna data of one response channel in the normalized form
///   eps(omega) = slope * (1 + int dnu(xi) / (xi^2 - omega^2)),
/// with dnu the even measure made of the atoms and densities below.
struct MeasureRepresentation {
  double herglotz_slope = 1.0; ///< eps0 or mu0
  std::vector<PointMass> atoms;
  std::vector<DensityTerm> densities;

  double density_value(double xi) const {
    double v = 0.0;
    for (const auto &d : densities) v += d(xi);
    return v;
  }
};

/// Closed-form measure of a material channel: undamped oscillators give
/// atom pairs of weight coupling^2/2, damped ones give rational densities.
inline MeasureRepresentation measure_of(const MaterialSpec &spec, Channel channel) {
  MeasureRepresentation m;
  m.herglotz_slope = channel == Channel::electric ? spec.eps0() : spec.mu0();
  const auto &list = channel == Channel::electric ? spec.electric() : spec.magnetic();
  for (const auto &o : list) {
    if (o.damping == 0.0)
      m.atoms.push_back({o.resonance, 0.5 * o.coupling * o.coupling});
    else
      m.densities.push_back({o.coupling, o.resonance, o.damping});
  }
  return m;
}

namespace detail {

/// int_R density(xi) / (xi^2 - omega^2) dxi for one density term.
/// Even integrand, split at the resonance peak, analytic tail.
inline Complex density_cauchy_integral(const DensityTerm &d, Complex omega, double rel_tol) {
  const Complex w2 = omega * omega;
  auto f_re = [&](double xi) {
    return (d(xi) / (xi * xi - w2)).real();
  };
  auto f_im = [&](double xi) {
    return (d(xi) / (xi * xi - w2)).imag();
  };
  const double reach = std::max({1.0, d.resonance, d.damping, std::abs(omega)});
  const double cutoff = 40.0 * reach;
  std::vector<double> splits{d.resonance, 2.0 * d.resonance, 8.0 * reach};
  const double re = 2.0 * integrate_with_splits(f_re, 0.0, cutoff, splits, rel_tol).value;
  const double im = 2.0 * integrate_with_splits(f_im, 0.0, cutoff, splits, rel_tol).value;
  // tail: density ~ coupling^2 damping / (pi xi^2), so the integrand is
  // O(xi^-4); keep the leading term and absorb the rest in the bound
  const double pi = 3.14159265358979323846;
  const double tail = 2.0 * d.coupling * d.coupling * d.damping / (3.0 * pi * cutoff * cutoff * cutoff);
  return Complex(re + tail, im);
}

} // namespace detail

/// Evaluate slope * (1 + int dnu / (xi^2 - omega^2)). Point masses are
/// summed exactly; densities go through adaptive quadrature.
inline Complex reconstruct(const MeasureRepresentation &m, Complex omega,
                           double rel_tol = 1e-8) {
  Complex acc(1.0, 0.0);
  const Complex w2 = omega * omega;
  for (const auto &a : m.atoms) {
    const Complex den = a.location * a.location - w2;
    if (std::abs(den) == 0.0) throw PoleHit("reconstruct evaluated on a point mass");
    acc += 2.0 * a.weight / den; // atoms at +-location contribute equally
  }
  for (const auto &d : m.densities) acc += detail::density_cauchy_integral(d, omega, rel_tol);
  return m.herglotz_slope * acc;
}

/// Result of an eta -> 0 extrapolated Stieltjes limit.
struct StieltjesResult {
  double limit = 0.0;
  std::vector<double> raw; ///< one value per eta, largest first
};

/// nu([a,b]) + nu((a,b)) = lim_{eta->0} (2/pi) int_a^b Im f(x + i eta) dx.
/// Returns the Richardson-extrapolated limit of the right-hand side.
inline StieltjesResult stieltjes_window(const std::function<Complex(Complex)> &f, double a,
                                        double b, std::span<const double> etas,
                                        double rel_tol = 1e-9) {
  if (!(a < b)) throw ValidationError("stieltjes_window requires a < b");
  for (std::size_t i = 0; i + 1 < etas.size(); ++i)
    if (!(etas[i] > etas[i + 1])) throw ValidationError("eta sequence must be strictly decreasing");
  if (!etas.empty() && etas.back() < 1e-6)
    throw ValidationError("eta sequence must stay >= 1e-6");

  const double pi = 3.14159265358979323846;
  StieltjesResult out;
  for (double eta : etas) {
    auto g = [&](double x) { return f(Complex(x, eta)).imag(); };
    out.raw.push_back(2.0 / pi * integrate(g, a, b, rel_tol).value);
  }
  const Extrapolation ex = richardson_extrapolate(etas, out.raw);
  if (ex.residual > 10.0 * std::max(ex.last_increment, 1e-300))
    throw NonConvergent("stieltjes window extrapolation did not settle");
  out.limit = ex.limit;
  return out;
}

/// nu({a}) = lim_{eta->0} eta * Im f(a + i eta), extrapolated the same way.
inline StieltjesResult atom_weight(const std::function<Complex(Complex)> &f, double a,
                                   std::span<const double> etas) {
  StieltjesResult out;
  for (double eta : etas) out.raw.push_back(eta * f(Complex(a, eta)).imag());
  const Extrapolation ex = richardson_extrapolate(etas, out.raw);
  const double scale = std::abs(out.raw.front()) + std::abs(ex.limit);
  if (ex.residual > 10.0 * std::max(ex.last_increment, 1e-14 * scale))
    throw NonConvergent("atom weight extrapolation did not settle");
  out.limit = ex.limit;
  return out;
}

/// Causal susceptibility kernel of one oscillator: the solution of
/// chi'' + alpha chi' + omega0^2 chi = 0, chi(0) = 0, chi'(0) = coupling^2.
inline double susceptibility_kernel(const Oscillator &o, double t) {
  if (t < 0.0) throw ValidationError("kernel requires t >= 0");
  const double w2 = o.resonance * o.resonance;
  const double a2 = 0.25 * o.damping * o.damping;
  const double amp = o.coupling * o.coupling;
  const double envelope = std::exp(-0.5 * o.damping * t);
  const double disc = w2 - a2;
  const double tol = 1e-12 * std::max({w2, a2, 1.0});
  if (disc > tol) {
    const double wd = std::sqrt(disc);
    return amp * envelope * std::sin(wd * t) / wd;
  }
  if (disc < -tol) {
    const double g = std::sqrt(-disc);
    return amp * envelope * std::sinh(g * t) / g;
  }
  return amp * envelope * t;
}

/// Compare the numerically transformed kernel with the closed-form
/// response coupling^2 / (resonance^2 - i alpha omega - omega^2).
/// Returns the relative defect.
inline double kernel_transform_check(const Oscillator &o, Complex omega, double tol = 1e-9) {
  // kernel envelope decays like exp(-decay_kernel * t); zero for a
  // damped Drude term whose kernel saturates at a constant
  const double decay_kernel =
      0.5 * o.damping - std::sqrt(std::max(0.0, 0.25 * o.damping * o.damping -
                                                    o.resonance * o.resonance));
  const double rate = omega.imag() + decay_kernel;
  if (!(omega.imag() > 0.0) || !(rate > 0.0))
    throw TruncationError("Im omega too small for the truncated transform to converge");

  const Complex closed = o.coupling * o.coupling / detail::oscillator_denominator(o, omega);
  // pick T so that the envelope bound amp*(T + 1/rate)*exp(-rate*T) drops
  // below tol * |closed|
  const double amp = o.coupling * o.coupling;
  double horizon = 1.0 / rate;
  for (int i = 0; i < 200; ++i) {
    const double bound = amp * (horizon + 1.0 / rate) * std::exp(-rate * horizon) / rate;
    if (bound <= tol * std::abs(closed)) break;
    horizon *= 1.5;
    if (i == 199) throw TruncationError("could not bound the transform tail");
  }

  auto re = [&](double t) {
    return (std::exp(Complex(0.0, 1.0) * omega * t) * susceptibility_kernel(o, t)).real();
  };
  auto im = [&](double t) {
    return (std::exp(Complex(0.0, 1.0) * omega * t) * susceptibility_kernel(o, t)).imag();
  };
  const double max_freq = std::max({1.0, std::abs(omega), o.resonance});
  std::vector<double> splits;
  for (double s = 1.0 / max_freq; s < horizon; s *= 4.0) splits.push_back(s);
  const Complex numeric(integrate_with_splits(re, 0.0, horizon, splits, tol).value,
                        integrate_with_splits(im, 0.0, horizon, splits, tol).value);
  return std::abs(numeric - closed) / std::abs(closed);
}

} // namespace dlab
