#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <optional>
#include <vector>

#include "dlab/material.hpp"
#include "dlab/polynomial.hpp"

namespace dlab {

/// Relative tolerance for merging numerically coincident roots.
inline constexpr double kRootClusterTol = 1e-8;

/// A rational function of frequency stored as real-coefficient
/// polynomials in z = -i*omega. Houses eps(omega), mu(omega) and the
/// dispersion symbol D(omega) = omega^2 eps(omega) mu(omega).
struct RationalSymbol {
  Poly<double> num;
  Poly<double> den;

  Complex eval(Complex omega) const {
    const Complex z = Complex(0.0, -1.0) * omega;
    const Complex d = den(z);
    if (std::abs(d) == 0.0) throw PoleHit("rational symbol evaluated at a pole");
    return num(z) / d;
  }

  /// d/domega, via d/dz with dz/domega = -i.
  Complex eval_derivative(Complex omega) const {
    const Complex z = Complex(0.0, -1.0) * omega;
    const Complex d = den(z);
    if (std::abs(d) == 0.0) throw PoleHit("rational symbol derivative at a pole");
    const Complex n = num(z);
    const Complex dn = num.derivative()(z);
    const Complex dd = den.derivative()(z);
    return Complex(0.0, -1.0) * (dn * d - n * dd) / (d * d);
  }
};

namespace detail {

/// z^2 + alpha z + omega_0^2, the oscillator polynomial in z = -i*omega.
template <class T>
Poly<T> oscillator_poly(const Oscillator &o) {
  return Poly<T>({T(o.resonance) * T(o.resonance), T(o.damping), T(1)});
}

/// Numerator and denominator of the relative response 1 + sum W^2/q_j.
template <class T>
void response_fraction(const std::vector<Oscillator> &list, Poly<T> &num, Poly<T> &den) {
  den = Poly<T>::constant(T(1));
  for (const auto &o : list) den = den * oscillator_poly<T>(o);
  num = den;
  for (std::size_t j = 0; j < list.size(); ++j) {
    Poly<T> partial = Poly<T>::constant(T(list[j].coupling) * T(list[j].coupling));
    for (std::size_t i = 0; i < list.size(); ++i)
      if (i != j) partial = partial * oscillator_poly<T>(list[i]);
    num = num + partial;
  }
}

} // namespace detail

/// eps(omega) as an irreducible-by-construction rational symbol.
inline RationalSymbol epsilon_symbol(const MaterialSpec &spec) {
  Poly<double> num, den;
  detail::response_fraction<double>(spec.electric(), num, den);
  return {num * spec.eps0(), den};
}

inline RationalSymbol mu_symbol(const MaterialSpec &spec) {
  Poly<double> num, den;
  detail::response_fraction<double>(spec.magnetic(), num, den);
  return {num * spec.mu0(), den};
}

/// Cancel the common z^m monomial factor. The trailing zero counts are
/// exact because Drude terms produce exact zero coefficients.
inline RationalSymbol reduce_monomial(RationalSymbol s) {
  const std::size_t m = std::min(s.num.trailing_zeros(), s.den.trailing_zeros());
  if (m > 0) {
    s.num = s.num.unshifted(m);
    s.den = s.den.unshifted(m);
  }
  return s;
}

/// The dispersion symbol D(omega) = omega^2 eps(omega) mu(omega) in
/// reduced form. omega^2 = -z^2 supplies the explicit leading factor.
inline RationalSymbol dispersion_symbol(const MaterialSpec &spec) {
  Poly<long double> ne, de, nm, dm;
  detail::response_fraction<long double>(spec.electric(), ne, de);
  detail::response_fraction<long double>(spec.magnetic(), nm, dm);
  Poly<long double> num = (ne * nm).shifted(2) * (-(long double)spec.eps0() * (long double)spec.mu0());
  Poly<long double> den = de * dm;
  RationalSymbol sym{num.cast<double>(), den.cast<double>()};
  return reduce_monomial(sym);
}

/// Long double copy of the reduced dispersion polynomials, for the
/// extended-precision root polish used by the branch tracer.
inline void dispersion_symbol_ld(const MaterialSpec &spec, Poly<long double> &num,
                                 Poly<long double> &den) {
  Poly<long double> ne, de, nm, dm;
  detail::response_fraction<long double>(spec.electric(), ne, de);
  detail::response_fraction<long double>(spec.magnetic(), nm, dm);
  num = (ne * nm).shifted(2) * (-(long double)spec.eps0() * (long double)spec.mu0());
  den = de * dm;
  const std::size_t m = std::min(num.trailing_zeros(), den.trailing_zeros());
  if (m > 0) {
    num = num.unshifted(m);
    den = den.unshifted(m);
  }
}

/// A root in the omega plane with its multiplicity after clustering.
struct Root {
  Complex value;
  int multiplicity = 1;
};

struct PolesZeros {
  std::vector<Root> zeros;
  std::vector<Root> poles;
};

namespace detail {

inline double cluster_tolerance(Complex v, double coeff_scale) {
  return kRootClusterTol * std::max({1.0, std::abs(v), coeff_scale});
}

/// Merge numerically coincident roots; complain when the clustering is
/// ambiguous (two clusters closer than ten times the merge tolerance).
inline std::vector<Root> cluster_roots(std::vector<Complex> roots, double coeff_scale) {
  std::vector<Root> clusters;
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    Complex sum = roots[i];
    int count = 1;
    used[i] = true;
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (used[j]) continue;
      const double tol = cluster_tolerance(roots[i], coeff_scale);
      if (std::abs(roots[j] - sum / double(count)) < tol) {
        sum += roots[j];
        ++count;
        used[j] = true;
      }
    }
    clusters.push_back({sum / double(count), count});
  }
  for (std::size_t a = 0; a < clusters.size(); ++a)
    for (std::size_t b = a + 1; b < clusters.size(); ++b) {
      const double tol = cluster_tolerance(clusters[a].value, coeff_scale);
      const double dist = std::abs(clusters[a].value - clusters[b].value);
      if (dist >= tol && dist < 10.0 * tol)
        throw IllConditioned("root clusters separated by less than 10x the merge tolerance");
    }
  std::sort(clusters.begin(), clusters.end(), [](const Root &a, const Root &b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  return clusters;
}

/// Enforce invariance of a root multiset under omega -> -conj(omega).
/// In z coordinates this is plain conjugation, so partners are matched
/// and averaged; unpaired roots are snapped onto the symmetry axis.
inline void symmetrize_conjugate_pairs(std::vector<Complex> &omega_roots) {
  const std::size_t n = omega_roots.size();
  std::vector<bool> done(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (done[i]) continue;
    const Complex mirror = -std::conj(omega_roots[i]);
    std::size_t best = i;
    double best_d = std::abs(omega_roots[i] - mirror); // distance to own mirror
    for (std::size_t j = i + 1; j < n; ++j) {
      if (done[j]) continue;
      const double d = std::abs(omega_roots[j] - mirror);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best == i) {
      // self-paired: purely imaginary omega
      omega_roots[i] = Complex(0.0, omega_roots[i].imag());
      done[i] = true;
    } else {
      const Complex a = omega_roots[i];
      const Complex b = omega_roots[best];
      const Complex sym = 0.5 * (a - std::conj(b));
      omega_roots[i] = sym;
      omega_roots[best] = -std::conj(sym);
      done[i] = done[best] = true;
    }
  }
}

inline std::vector<Complex> omega_roots_of(const Poly<double> &p) {
  std::vector<Complex> z = polynomial_roots(p);
  std::vector<Complex> w(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) w[i] = Complex(0.0, 1.0) * z[i];
  symmetrize_conjugate_pairs(w);
  return w;
}

} // namespace detail

/// Roots of numerator and denominator in the omega plane, clustered
/// into multiplicities. Expects a reduced symbol.
inline PolesZeros poles_and_zeros(const RationalSymbol &sym) {
  PolesZeros out;
  const double zero_scale = 1.0; // roots are O(parameter scale); handled per-root
  out.zeros = detail::cluster_roots(detail::omega_roots_of(sym.num), zero_scale);
  if (sym.den.degree() > 0)
    out.poles = detail::cluster_roots(detail::omega_roots_of(sym.den), zero_scale);
  return out;
}

/// Fully reduce a symbol: monomial factor plus any numerically common
/// roots between numerator and denominator (these only appear when the
/// structural assumptions are violated).
inline RationalSymbol reduce(RationalSymbol s) {
  s = reduce_monomial(s);
  if (s.num.degree() == 0 || s.den.degree() == 0) return s;
  auto nroots = polynomial_roots(s.num);
  auto droots = polynomial_roots(s.den);
  for (const auto &zr : nroots) {
    const double tol = detail::cluster_tolerance(zr, 1.0);
    auto hit = std::find_if(droots.begin(), droots.end(),
                            [&](Complex d) { return std::abs(d - zr) < tol; });
    if (hit == droots.end()) continue;
    if (std::abs(zr.imag()) < tol) {
      s.num = s.num.deflate_linear(zr.real());
      s.den = s.den.deflate_linear(hit->real());
    } else if (zr.imag() > 0.0) {
      // take the conjugate pair out of both in one real quadratic
      const double a = std::norm(zr);
      const double b = -2.0 * zr.real();
      s.num = s.num.deflate_quadratic(a, b);
      s.den = s.den.deflate_quadratic(a, b);
    } else {
      continue; // conjugate partner handled with the upper-half root
    }
    droots.erase(hit);
  }
  return s;
}

} // namespace dlab
