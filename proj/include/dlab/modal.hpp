#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "dlab/assignment.hpp"
#include "dlab/dispersion.hpp"
#include "dlab/material.hpp"

namespace dlab {

/// One scalar polarization block of the plane-wave system at fixed
/// wavenumber, written as U' = -i A U for
/// U = (E, H, P_1..P_Ne, P'_1..P'_Ne, M_1..M_Nm, M'_1..M'_Nm).
/// The energy is half the weighted norm ||U||_w^2 with the weights below.
struct ModalSystem {
  double k_abs = 0.0;
  int polarization_sign = 1;
  Eigen::MatrixXcd matrix;      ///< A
  Eigen::VectorXd weights;      ///< energy weights per component
  Eigen::VectorXd damping_diag; ///< alpha on the P'/M' components, 0 elsewhere
  MaterialSpec spec;

  Eigen::Index dim() const { return matrix.rows(); }
  Eigen::Index idx_e() const { return 0; }
  Eigen::Index idx_h() const { return 1; }
};

inline ModalSystem build_modal(const MaterialSpec &spec, double k_abs, int polarization_sign) {
  if (k_abs < 0.0) throw ValidationError("wavenumber must be nonnegative");
  if (polarization_sign != 1 && polarization_sign != -1)
    throw ValidationError("polarization sign must be +1 or -1");

  const Eigen::Index ne = Eigen::Index(spec.electric().size());
  const Eigen::Index nm = Eigen::Index(spec.magnetic().size());
  const Eigen::Index d = 2 + 2 * (ne + nm);
  const auto ip = [&](Eigen::Index j) { return 2 + j; };
  const auto ipd = [&](Eigen::Index j) { return 2 + ne + j; };
  const auto im = [&](Eigen::Index l) { return 2 + 2 * ne + l; };
  const auto imd = [&](Eigen::Index l) { return 2 + 2 * ne + nm + l; };

  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(d, d);
  const Complex isk(0.0, double(polarization_sign) * k_abs);
  b(0, 1) = isk / spec.eps0();
  b(1, 0) = isk / spec.mu0();
  for (Eigen::Index j = 0; j < ne; ++j) {
    const Oscillator &o = spec.electric()[std::size_t(j)];
    b(0, ipd(j)) = -o.coupling * o.coupling;
    b(ip(j), ipd(j)) = 1.0;
    b(ipd(j), 0) = 1.0;
    b(ipd(j), ip(j)) = -o.resonance * o.resonance;
    b(ipd(j), ipd(j)) = -o.damping;
  }
  for (Eigen::Index l = 0; l < nm; ++l) {
    const Oscillator &o = spec.magnetic()[std::size_t(l)];
    b(1, imd(l)) = -o.coupling * o.coupling;
    b(im(l), imd(l)) = 1.0;
    b(imd(l), 1) = 1.0;
    b(imd(l), im(l)) = -o.resonance * o.resonance;
    b(imd(l), imd(l)) = -o.damping;
  }

  ModalSystem sys;
  sys.k_abs = k_abs;
  sys.polarization_sign = polarization_sign;
  sys.matrix = Complex(0.0, 1.0) * b; // U' = B U = -i A U
  sys.weights = Eigen::VectorXd::Zero(d);
  sys.damping_diag = Eigen::VectorXd::Zero(d);
  sys.weights(0) = spec.eps0();
  sys.weights(1) = spec.mu0();
  for (Eigen::Index j = 0; j < ne; ++j) {
    const Oscillator &o = spec.electric()[std::size_t(j)];
    sys.weights(ip(j)) = spec.eps0() * o.coupling * o.coupling * o.resonance * o.resonance;
    sys.weights(ipd(j)) = spec.eps0() * o.coupling * o.coupling;
    sys.damping_diag(ipd(j)) = o.damping;
  }
  for (Eigen::Index l = 0; l < nm; ++l) {
    const Oscillator &o = spec.magnetic()[std::size_t(l)];
    sys.weights(im(l)) = spec.mu0() * o.coupling * o.coupling * o.resonance * o.resonance;
    sys.weights(imd(l)) = spec.mu0() * o.coupling * o.coupling;
    sys.damping_diag(imd(l)) = o.damping;
  }
  sys.spec = spec;
  return sys;
}

using ModalState = Eigen::VectorXcd;

/// Half the weighted norm; equals electromagnetic plus oscillator energy.
inline double modal_energy(const ModalSystem &sys, const ModalState &u) {
  double e = 0.0;
  for (Eigen::Index i = 0; i < sys.dim(); ++i) e += sys.weights(i) * std::norm(u(i));
  return 0.5 * e;
}

/// Instantaneous dissipation rate, sum of alpha * weight * |P'|^2 terms.
inline double modal_dissipation(const ModalSystem &sys, const ModalState &u) {
  double d = 0.0;
  for (Eigen::Index i = 0; i < sys.dim(); ++i)
    d += sys.damping_diag(i) * sys.weights(i) * std::norm(u(i));
  return d;
}

/// Electromagnetic part only (E and H components).
inline double modal_em_energy(const ModalSystem &sys, const ModalState &u) {
  return 0.5 * (sys.weights(0) * std::norm(u(0)) + sys.weights(1) * std::norm(u(1)));
}

/// Defect of self-adjointness of A in the weighted inner product,
/// restricted to the positive-weight components (a Drude polarization
/// carries no potential energy and decouples). For a damped system the
/// defect against A - i*diag(alpha) is measured instead when
/// `subtract_damping` is set.
inline double weighted_hermiticity_defect(const ModalSystem &sys, bool subtract_damping = false) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < sys.dim(); ++i)
    if (sys.weights(i) > 0.0) keep.push_back(i);
  const Eigen::Index n = Eigen::Index(keep.size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index cidx = 0; cidx < n; ++cidx) {
      const double wr = std::sqrt(sys.weights(keep[std::size_t(r)]));
      const double wc = std::sqrt(sys.weights(keep[std::size_t(cidx)]));
      m(r, cidx) = wr * sys.matrix(keep[std::size_t(r)], keep[std::size_t(cidx)]) / wc;
    }
  if (subtract_damping)
    for (Eigen::Index r = 0; r < n; ++r)
      m(r, r) += Complex(0.0, 1.0) * sys.damping_diag(keep[std::size_t(r)]);
  return (m - m.adjoint()).norm() / std::max(1.0, m.norm());
}

/// Eigen data of the modal matrix: eigenvalues, left/right eigenvectors
/// and spectral projectors. Eigenvalues closer than the cluster tolerance
/// are merged into groups whose shared projector is computed by resolvent
/// quadrature on a separating circle.
struct SpectralDecomposition {
  Eigen::VectorXcd eigenvalues; ///< sorted by (Re, Im)
  Eigen::MatrixXcd right;       ///< columns follow `eigenvalues`
  Eigen::MatrixXcd left;
  std::vector<int> group_of;                    ///< eigenvalue index -> group id
  std::vector<Eigen::MatrixXcd> group_projector;
  std::vector<Complex> group_center;
  std::vector<double> projector_norms;          ///< spectral norm per group
  bool diagonalizable = true;
  Eigen::MatrixXcd matrix; ///< the decomposed A, kept for group evolution

  const Eigen::MatrixXcd &projector(std::size_t eigenvalue_index) const {
    return group_projector[std::size_t(group_of[eigenvalue_index])];
  }
};

inline SpectralDecomposition spectral_decomposition(const ModalSystem &sys) {
  const Eigen::Index d = sys.dim();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(sys.matrix, true);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> esa(sys.matrix.adjoint(), true);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) order[std::size_t(i)] = i;
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const Complex la = es.eigenvalues()(a), lb = es.eigenvalues()(b);
    if (la.real() != lb.real()) return la.real() < lb.real();
    return la.imag() < lb.imag();
  });

  SpectralDecomposition dec;
  dec.matrix = sys.matrix;
  dec.eigenvalues.resize(d);
  dec.right.resize(d, d);
  dec.left.resize(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    dec.eigenvalues(i) = es.eigenvalues()(order[std::size_t(i)]);
    dec.right.col(i) = es.eigenvectors().col(order[std::size_t(i)]);
  }
  // left eigenvectors from the adjoint problem, matched by eigenvalue
  std::vector<bool> taken(std::size_t(d), false);
  for (Eigen::Index i = 0; i < d; ++i) {
    const Complex target = std::conj(dec.eigenvalues(i));
    Eigen::Index best = -1;
    double best_d = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (taken[std::size_t(j)]) continue;
      const double dist = std::abs(esa.eigenvalues()(j) - target);
      if (best < 0 || dist < best_d) {
        best = j;
        best_d = dist;
      }
    }
    taken[std::size_t(best)] = true;
    dec.left.col(i) = esa.eigenvectors().col(best);
  }

  const double scale = std::max(1.0, dec.eigenvalues.cwiseAbs().maxCoeff());
  const double gap_tol = 1e-6 * scale;
  dec.group_of.assign(std::size_t(d), 0);
  int gid = 0;
  for (Eigen::Index i = 1; i < d; ++i) {
    if (std::abs(dec.eigenvalues(i) - dec.eigenvalues(i - 1)) > gap_tol) ++gid;
    dec.group_of[std::size_t(i)] = gid;
  }
  const int ngroups = gid + 1;

  for (int g = 0; g < ngroups; ++g) {
    std::vector<Eigen::Index> members;
    for (Eigen::Index i = 0; i < d; ++i)
      if (dec.group_of[std::size_t(i)] == g) members.push_back(i);

    Complex center(0.0, 0.0);
    for (Eigen::Index i : members) center += dec.eigenvalues(i);
    center /= double(members.size());
    dec.group_center.push_back(center);

    Eigen::MatrixXcd proj;
    if (members.size() == 1) {
      const Eigen::Index i = members.front();
      const Eigen::VectorXcd v = dec.right.col(i);
      const Eigen::VectorXcd w = dec.left.col(i);
      const Complex overlap = (w.adjoint() * v)(0, 0);
      if (std::abs(overlap) < 1e-13 * v.norm() * w.norm())
        throw ClusterSeparationFailure("left/right eigenvector overlap vanished");
      proj = v * w.adjoint() / overlap;
    } else {
      dec.diagonalizable = false;
      double spread = 0.0;
      for (Eigen::Index i : members) spread = std::max(spread, std::abs(dec.eigenvalues(i) - center));
      double d_out = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < d; ++i)
        if (dec.group_of[std::size_t(i)] != g)
          d_out = std::min(d_out, std::abs(dec.eigenvalues(i) - center));
      if (std::isfinite(d_out) && d_out < 10.0 * std::max(spread, gap_tol))
        throw ClusterSeparationFailure("no separating circle with a 10x margin exists");
      const double radius = std::isfinite(d_out) ? d_out / 3.0 : std::max(1.0, 100.0 * spread);
      // trapezoidal resolvent quadrature, spectrally accurate on a circle
      const int nodes = 64;
      proj = Eigen::MatrixXcd::Zero(d, d);
      const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
      for (int mnode = 0; mnode < nodes; ++mnode) {
        const double theta = 2.0 * 3.14159265358979323846 * double(mnode) / double(nodes);
        const Complex zeta = center + radius * Complex(std::cos(theta), std::sin(theta));
        const Eigen::MatrixXcd resolvent = (zeta * id - dec.matrix).partialPivLu().solve(id);
        proj += (radius * Complex(std::cos(theta), std::sin(theta)) / double(nodes)) * resolvent;
      }
    }
    dec.group_projector.push_back(proj);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(proj);
    dec.projector_norms.push_back(svd.singularValues()(0));
  }
  return dec;
}

/// Exact modal evolution U(t) = sum_n exp(-i omega_n t) Pi_n U0. Merged
/// eigenvalue groups use exp(-i A t) restricted to the group range, via a
/// rapidly converging nilpotent-correction series around the group center.
inline ModalState evolve(const SpectralDecomposition &dec, const ModalState &u0, double t) {
  if (t < 0.0) throw ValidationError("evolution time must be nonnegative");
  ModalState out = ModalState::Zero(u0.size());
  for (std::size_t g = 0; g < dec.group_projector.size(); ++g) {
    const Complex center = dec.group_center[g];
    const Complex phase = std::exp(Complex(0.0, -1.0) * center * t);
    ModalState w = dec.group_projector[g] * u0;
    bool multi = false;
    int count = 0;
    for (int m : dec.group_of)
      if (m == int(g)) ++count;
    multi = count > 1;
    if (!multi) {
      out += phase * w;
      continue;
    }
    ModalState acc = w;
    ModalState term = w;
    for (int m = 1; m <= 128; ++m) {
      term = (Complex(0.0, -1.0) * t / double(m)) * (dec.matrix * term - center * term);
      acc += term;
      if (term.norm() <= 1e-16 * acc.norm()) break;
    }
    out += phase * acc;
  }
  return out;
}

/// Energy/dissipation history of a reference integration.
struct EnergyLedger {
  std::vector<double> t;
  std::vector<double> energy;
  std::vector<double> dissipation;
  double max_balance_defect = 0.0; ///< max |de/dt + dissipation| (centered differences)
};

struct Rk4Result {
  ModalState state;
  EnergyLedger ledger;
};

/// Classic fourth order integration of U' = -i A U, with an energy and
/// dissipation ledger checked against the balance de/dt = -dissipation.
inline Rk4Result rk4_reference(const ModalSystem &sys, const ModalState &u0, double t_final,
                               double dt) {
  const double norm_a = sys.matrix.cwiseAbs().rowwise().sum().maxCoeff();
  if (dt > 0.1 / norm_a) throw StepTooLarge("rk4 step exceeds 0.1 / ||A||");
  const auto rhs = [&](const ModalState &u) { return Complex(0.0, -1.0) * (sys.matrix * u); };

  Rk4Result out;
  out.state = u0;
  const std::size_t steps = std::size_t(std::ceil(t_final / dt));
  out.ledger.t.reserve(steps + 1);
  out.ledger.energy.reserve(steps + 1);
  out.ledger.dissipation.reserve(steps + 1);
  double t = 0.0;
  out.ledger.t.push_back(0.0);
  out.ledger.energy.push_back(modal_energy(sys, out.state));
  out.ledger.dissipation.push_back(modal_dissipation(sys, out.state));
  for (std::size_t i = 0; i < steps; ++i) {
    const double h = std::min(dt, t_final - t);
    const ModalState k1 = rhs(out.state);
    const ModalState k2 = rhs(out.state + 0.5 * h * k1);
    const ModalState k3 = rhs(out.state + 0.5 * h * k2);
    const ModalState k4 = rhs(out.state + h * k3);
    out.state += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
    out.ledger.t.push_back(t);
    out.ledger.energy.push_back(modal_energy(sys, out.state));
    out.ledger.dissipation.push_back(modal_dissipation(sys, out.state));
  }
  for (std::size_t i = 1; i + 1 < out.ledger.t.size(); ++i) {
    const double de = (out.ledger.energy[i + 1] - out.ledger.energy[i - 1]) /
                      (out.ledger.t[i + 1] - out.ledger.t[i - 1]);
    out.ledger.max_balance_defect =
        std::max(out.ledger.max_balance_defect, std::abs(de + out.ledger.dissipation[i]));
  }
  return out;
}

/// Max normalized distance between the modal spectrum and the dispersion
/// roots at the same wavenumber, under optimal matching.
inline double spectrum_consistency(const MaterialSpec &spec, double k_abs) {
  if (!(k_abs > 0.0)) throw ValidationError("spectrum consistency requires k > 0");
  const std::vector<Complex> roots = roots_at_k(spec, k_abs);
  const ModalSystem sys = build_modal(spec, k_abs, +1);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(sys.matrix, false);
  std::vector<std::vector<double>> cost(roots.size(),
                                        std::vector<double>(std::size_t(sys.dim())));
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (Eigen::Index j = 0; j < sys.dim(); ++j)
      cost[i][std::size_t(j)] = std::abs(roots[i] - es.eigenvalues()(j));
  const auto match = min_cost_assignment(cost);
  double worst = 0.0;
  for (std::size_t i = 0; i < roots.size(); ++i)
    worst = std::max(worst, cost[i][std::size_t(match[i])] / (1.0 + std::abs(roots[i])));
  return worst;
}

} // namespace dlab
