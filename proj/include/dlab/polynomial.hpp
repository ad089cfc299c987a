#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "dlab/errors.hpp"

namespace dlab {

/// Dense polynomial with real coefficients in ascending degree order.
/// Used for the variable z = -i*omega, in which all material symbols
/// have real coefficients.
template <class T = double>
class Poly {
public:
  Poly() : c_{T(0)} {}
  explicit Poly(std::vector<T> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) c_.push_back(T(0));
    trim();
  }
  static Poly constant(T v) { return Poly(std::vector<T>{v}); }

  const std::vector<T> &coeffs() const { return c_; }
  int degree() const { return int(c_.size()) - 1; }
  T leading() const { return c_.back(); }
  bool is_zero() const { return c_.size() == 1 && c_[0] == T(0); }

  template <class S>
  S operator()(const S &x) const {
    // Horner
    S acc = S(c_.back());
    for (std::size_t i = c_.size() - 1; i-- > 0;) acc = acc * x + S(c_[i]);
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<T> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = T(i) * c_[i];
    return Poly(std::move(d));
  }

  /// Multiply by z^m.
  Poly shifted(std::size_t m) const {
    std::vector<T> d(c_.size() + m, T(0));
    for (std::size_t i = 0; i < c_.size(); ++i) d[i + m] = c_[i];
    return Poly(std::move(d));
  }

  /// Number of exactly-zero trailing coefficients (z = 0 root multiplicity).
  std::size_t trailing_zeros() const {
    std::size_t t = 0;
    while (t + 1 < c_.size() && c_[t] == T(0)) ++t;
    return c_[t] == T(0) && t + 1 == c_.size() ? t + 1 : t;
  }

  /// Divide by z^m (requires that many trailing zeros).
  Poly unshifted(std::size_t m) const {
    std::vector<T> d(c_.begin() + m, c_.end());
    return Poly(std::move(d));
  }

  Poly operator*(const Poly &rhs) const {
    // Convolution with compensated accumulation; coefficient sums of
    // oscillator products can otherwise lose digits when scales mix.
    std::vector<T> out(c_.size() + rhs.c_.size() - 1, T(0));
    std::vector<T> comp(out.size(), T(0));
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == T(0)) continue;
      for (std::size_t j = 0; j < rhs.c_.size(); ++j) {
        const T term = c_[i] * rhs.c_[j];
        const T y = term - comp[i + j];
        const T t = out[i + j] + y;
        comp[i + j] = (t - out[i + j]) - y;
        out[i + j] = t;
      }
    }
    return Poly(std::move(out));
  }

  Poly operator+(const Poly &rhs) const {
    std::vector<T> out(std::max(c_.size(), rhs.c_.size()), T(0));
    for (std::size_t i = 0; i < c_.size(); ++i) out[i] += c_[i];
    for (std::size_t i = 0; i < rhs.c_.size(); ++i) out[i] += rhs.c_[i];
    return Poly(std::move(out));
  }

  Poly operator-(const Poly &rhs) const { return *this + (rhs * T(-1)); }

  Poly operator*(T s) const {
    std::vector<T> out = c_;
    for (auto &v : out) v *= s;
    return Poly(std::move(out));
  }

  /// Deflate a real quadratic factor z^2 + b z + a (synthetic division,
  /// remainder discarded).
  Poly deflate_quadratic(T a, T b) const {
    const int n = degree();
    std::vector<T> rem(c_.begin(), c_.end());
    std::vector<T> quot(std::size_t(n - 1), T(0));
    for (int i = n; i >= 2; --i) {
      const T f = rem[std::size_t(i)];
      quot[std::size_t(i - 2)] = f;
      rem[std::size_t(i)] = T(0);
      rem[std::size_t(i - 1)] -= f * b;
      rem[std::size_t(i - 2)] -= f * a;
    }
    return Poly(std::move(quot));
  }

  /// Deflate a real linear factor z - r.
  Poly deflate_linear(T r) const {
    const int n = degree();
    if (n < 1) return Poly();
    std::vector<T> quot(std::size_t(n), T(0));
    T carry = c_[std::size_t(n)];
    for (int i = n - 1; i >= 0; --i) {
      quot[std::size_t(i)] = carry;
      carry = c_[std::size_t(i)] + r * carry;
    }
    return Poly(std::move(quot));
  }

  template <class S>
  Poly<S> cast() const {
    std::vector<S> out(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) out[i] = S(c_[i]);
    return Poly<S>(std::move(out));
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto &v : c_) m = std::max(m, double(std::abs(double(v))));
    return m;
  }

private:
  void trim() {
    while (c_.size() > 1 && c_.back() == T(0)) c_.pop_back();
  }

  std::vector<T> c_; // ascending
};

namespace detail {

/// Parlett-Reinsch balancing (powers of two), essential for companion
/// matrices whose roots span many orders of magnitude. Eigen's solver
/// does not balance on its own.
inline void balance_in_place(Eigen::MatrixXd &a) {
  const int n = int(a.rows());
  bool converged = false;
  while (!converged) {
    converged = true;
    for (int i = 0; i < n; ++i) {
      double r = 0.0, col = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        col += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (col == 0.0 || r == 0.0) continue;
      double f = 1.0;
      const double s = col + r;
      while (col < r / 2.0) {
        col *= 2.0;
        r /= 2.0;
        f *= 2.0;
      }
      while (col >= r * 2.0) {
        col /= 2.0;
        r *= 2.0;
        f /= 2.0;
      }
      if ((col + r) < 0.95 * s && f != 1.0) {
        converged = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

} // namespace detail

/// All complex roots of a real polynomial: exact zero roots are peeled
/// off the trailing coefficients, the rest come from the balanced
/// companion matrix of the rescaled monic polynomial.
inline std::vector<std::complex<double>> polynomial_roots(const Poly<double> &p) {
  const std::size_t t = std::min<std::size_t>(p.trailing_zeros(), std::size_t(p.degree()));
  std::vector<std::complex<double>> roots(t, std::complex<double>(0.0, 0.0));
  const Poly<double> q = t > 0 ? p.unshifted(t) : p;
  const int n = q.degree();
  if (n <= 0) return roots;
  const auto &c = q.coeffs();

  double scale = 0.0;
  for (int i = 0; i < n; ++i) {
    if (c[std::size_t(i)] == 0.0) continue;
    scale = std::max(scale, std::pow(std::abs(c[std::size_t(i)] / c[std::size_t(n)]), 1.0 / double(n - i)));
  }
  if (scale == 0.0) scale = 1.0;

  // companion of the monic polynomial in u = z / scale
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n - 1; ++i) companion(i + 1, i) = 1.0;
  for (int i = 0; i < n; ++i)
    companion(i, n - 1) = -c[std::size_t(i)] / (c[std::size_t(n)] * std::pow(scale, double(n - i)));
  detail::balance_in_place(companion);

  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, /*computeEigenvectors=*/false);
  for (int i = 0; i < n; ++i) roots.push_back(es.eigenvalues()(i) * scale);
  return roots;
}

/// One guarded Newton/Halley polish pass in the requested precision.
/// Near-multiple roots (tiny p') fall back to a Halley step.
template <class T>
std::complex<T> polish_root(const Poly<T> &p, std::complex<T> z, int max_iters = 4) {
  const Poly<T> dp = p.derivative();
  const Poly<T> ddp = dp.derivative();
  const T coeff_scale = T(p.max_abs_coeff());
  for (int it = 0; it < max_iters; ++it) {
    const std::complex<T> f = p(z);
    const std::complex<T> f1 = dp(z);
    const T zmag = std::max(T(1), std::abs(z));
    T deriv_floor = coeff_scale * std::numeric_limits<T>::epsilon() * T(1e3);
    for (int d = 1; d < p.degree(); ++d) deriv_floor *= zmag; // ~ |p'| scale
    std::complex<T> step;
    if (std::abs(f1) > deriv_floor) {
      step = f / f1;
    } else {
      const std::complex<T> f2 = ddp(z);
      const std::complex<T> denom = f1 * f1 * T(2) - f * f2;
      if (std::abs(denom) == T(0)) break;
      step = T(2) * f * f1 / denom;
    }
    z -= step;
    if (std::abs(step) <= std::numeric_limits<T>::epsilon() * T(4) * std::abs(z)) break;
  }
  return z;
}

/// Residual |p(z)| measured against the coefficient scale at |z|.
template <class T>
double relative_residual(const Poly<T> &p, std::complex<T> z) {
  const T zmag = std::max(T(1), std::abs(z));
  T norm = T(0);
  T pw = T(1);
  for (const auto &c : p.coeffs()) {
    norm += std::abs(c) * pw;
    pw *= zmag;
  }
  if (norm == T(0)) return 0.0;
  return double(std::abs(p(z)) / norm);
}

} // namespace dlab
