#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "dlab/constants.hpp"
#include "dlab/errors.hpp"

namespace dlab {

using Complex = std::complex<double>;

/// One resonant term of a generalized Lorentz law,
///   coupling^2 / (resonance^2 - i*damping*omega - omega^2),
/// contributing to the relative permittivity or permeability.
/// A term with resonance == 0 is a Drude term.
struct Oscillator {
  double coupling = 0.0;  ///< Omega (rad/s), must be > 0
  double resonance = 0.0; ///< omega_0 (rad/s), >= 0
  double damping = 0.0;   ///< alpha (1/s), >= 0; 0 means lossless
};

/// A homogeneous isotropic material: background constants plus finite
/// lists of electric and magnetic oscillators. Immutable after
/// construction; the single source of truth for eps(omega) and mu(omega).
class MaterialSpec {
public:
  MaterialSpec() : eps0_(1.0), mu0_(1.0) {}

  MaterialSpec(double eps0, double mu0, std::vector<Oscillator> electric,
               std::vector<Oscillator> magnetic)
      : eps0_(eps0), mu0_(mu0), electric_(std::move(electric)), magnetic_(std::move(magnetic)) {
    if (!(eps0_ > 0.0)) throw ValidationError("eps0 must be positive");
    if (!(mu0_ > 0.0)) throw ValidationError("mu0 must be positive");
    validate_list(electric_, "electric");
    validate_list(magnetic_, "magnetic");
  }

  double eps0() const { return eps0_; }
  double mu0() const { return mu0_; }
  const std::vector<Oscillator> &electric() const { return electric_; }
  const std::vector<Oscillator> &magnetic() const { return magnetic_; }

  std::size_t oscillator_count() const { return electric_.size() + magnetic_.size(); }

  /// Modal/dispersion state dimension 2N + 2.
  std::size_t state_dimension() const { return 2 * oscillator_count() + 2; }

  bool dissipative() const {
    auto damped = [](const Oscillator &o) { return o.damping > 0.0; };
    return std::any_of(electric_.begin(), electric_.end(), damped) ||
           std::any_of(magnetic_.begin(), magnetic_.end(), damped);
  }

  double light_speed() const { return dlab::light_speed(eps0_, mu0_); }

  /// Largest parameter magnitude, used to scale tolerances and grids.
  double frequency_scale() const {
    double s = 0.0;
    for (const auto *list : {&electric_, &magnetic_})
      for (const auto &o : *list) s = std::max({s, o.resonance, o.coupling, o.damping});
    return s > 0.0 ? s : 1.0;
  }

  /// Largest resonance (or coupling for Drude terms); 1 for vacuum.
  double max_resonance() const {
    double s = 0.0;
    for (const auto *list : {&electric_, &magnetic_})
      for (const auto &o : *list) s = std::max(s, o.resonance > 0.0 ? o.resonance : o.coupling);
    return s > 0.0 ? s : 1.0;
  }

  /// Smallest positive resonance (or coupling for Drude terms); 1 for vacuum.
  double min_resonance() const {
    double s = 0.0;
    for (const auto *list : {&electric_, &magnetic_})
      for (const auto &o : *list) {
        double w = o.resonance > 0.0 ? o.resonance : o.coupling;
        if (w > 0.0) s = (s == 0.0) ? w : std::min(s, w);
      }
    return s > 0.0 ? s : 1.0;
  }

private:
  static void validate_list(const std::vector<Oscillator> &list, const char *name) {
    for (std::size_t j = 0; j < list.size(); ++j) {
      const auto &o = list[j];
      const std::string at = std::string(name) + "[" + std::to_string(j) + "]";
      if (!(o.coupling > 0.0)) throw ValidationError(at + ": coupling must be positive");
      if (o.resonance < 0.0) throw ValidationError(at + ": resonance must be nonnegative");
      if (o.damping < 0.0) throw ValidationError(at + ": damping must be nonnegative");
      for (std::size_t i = 0; i < j; ++i) {
        if (list[i].resonance == o.resonance && list[i].damping == o.damping)
          throw ValidationError(std::string(name) + "[" + std::to_string(i) + "] and " + at +
                                " share the same (damping, resonance) pair");
      }
    }
  }

  double eps0_;
  double mu0_;
  std::vector<Oscillator> electric_;
  std::vector<Oscillator> magnetic_;
};

namespace detail {

/// q(omega) = omega^2 + i*alpha*omega - omega_0^2; eps picks up
/// coupling^2 / (-q).
inline Complex oscillator_denominator(const Oscillator &o, Complex omega) {
  return o.resonance * o.resonance - Complex(0.0, 1.0) * o.damping * omega - omega * omega;
}

inline Complex relative_response(const std::vector<Oscillator> &list, Complex omega,
                                 const char *channel) {
  Complex acc(1.0, 0.0);
  for (const auto &o : list) {
    const Complex q = oscillator_denominator(o, omega);
    if (std::abs(q) == 0.0)
      throw PoleHit(std::string(channel) + " oscillator denominator vanished at omega = (" +
                    std::to_string(omega.real()) + ", " + std::to_string(omega.imag()) + ")");
    acc += o.coupling * o.coupling / q;
  }
  return acc;
}

} // namespace detail

/// Complex permittivity at a (possibly complex) frequency.
inline Complex eval_epsilon(const MaterialSpec &spec, Complex omega) {
  return spec.eps0() * detail::relative_response(spec.electric(), omega, "electric");
}

/// Complex permeability at a (possibly complex) frequency.
inline Complex eval_mu(const MaterialSpec &spec, Complex omega) {
  return spec.mu0() * detail::relative_response(spec.magnetic(), omega, "magnetic");
}

/// Result of sampling the passivity characterization over a grid in the
/// open upper half-plane: omega*eps and omega*mu must map it into the
/// closed upper half-plane, strictly for non-constant laws.
struct HerglotzSample {
  double min_im_omega_eps = 0.0;
  double min_im_omega_mu = 0.0;
  double max_symmetry_defect = 0.0; ///< max |f(-conj(w)) + conj(f(w))| over both channels
  std::size_t grid_size = 0;
};

inline HerglotzSample herglotz_sample(const MaterialSpec &spec, std::span<const Complex> grid) {
  HerglotzSample out;
  out.grid_size = grid.size();
  bool first = true;
  for (const Complex w : grid) {
    if (!(w.imag() > 0.0))
      throw ValidationError("herglotz_sample grid point off the open upper half-plane");
    const Complex fe = w * eval_epsilon(spec, w);
    const Complex fm = w * eval_mu(spec, w);
    const Complex wm = -std::conj(w);
    const double de = std::abs(wm * eval_epsilon(spec, wm) + std::conj(fe));
    const double dm = std::abs(wm * eval_mu(spec, wm) + std::conj(fm));
    if (first) {
      out.min_im_omega_eps = fe.imag();
      out.min_im_omega_mu = fm.imag();
      first = false;
    } else {
      out.min_im_omega_eps = std::min(out.min_im_omega_eps, fe.imag());
      out.min_im_omega_mu = std::min(out.min_im_omega_mu, fm.imag());
    }
    out.max_symmetry_defect = std::max({out.max_symmetry_defect, de, dm});
  }
  return out;
}

/// Log-polar grid in the open upper half-plane, r in [rmin, rmax]
/// geometrically, theta strictly inside (0, pi).
inline std::vector<Complex> log_polar_grid(double rmin, double rmax, std::size_t nr,
                                           std::size_t ntheta) {
  std::vector<Complex> grid;
  grid.reserve(nr * ntheta);
  const double pi = 3.14159265358979323846;
  for (std::size_t i = 0; i < nr; ++i) {
    const double r = nr == 1 ? rmin : rmin * std::pow(rmax / rmin, double(i) / double(nr - 1));
    for (std::size_t j = 0; j < ntheta; ++j) {
      const double theta = pi * (double(j) + 0.5) / double(ntheta);
      grid.emplace_back(r * std::cos(theta), r * std::sin(theta));
    }
  }
  return grid;
}

} // namespace dlab
