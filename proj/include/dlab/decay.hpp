#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "dlab/fitting.hpp"
#include "dlab/modal.hpp"
#include "dlab/parallel.hpp"
#include "dlab/quadrature.hpp"
#include "dlab/structure.hpp"

namespace dlab {

/// Radial Fourier profile of the divergence-free initial data:
///   g(k) = amplitude * k^p * (1 + k)^(-(p + s + 3/2 + tail_margin)),
/// placed on a fixed transverse polarization of (E, H). The marginal
/// tail makes the high-frequency decay rate saturate the Sobolev index.
struct InitialDataProfile {
  double p = 0.0;
  double s = 2.0;
  double tail_margin = 0.05;
  double amplitude = 1.0;
  std::optional<std::pair<double, double>> band_limit; ///< optional compact support window

  double operator()(double k) const {
    if (band_limit && (k < band_limit->first || k > band_limit->second)) return 0.0;
    return amplitude * std::pow(k, p) * std::pow(1.0 + k, -(p + s + 1.5 + tail_margin));
  }
};

struct HarnessOptions {
  std::size_t points = 2000;    ///< radial quadrature nodes (split across regions)
  double k_min_factor = 1e-4;   ///< times the smallest resonance
  double k_max_factor = 1e4;    ///< times the largest resonance
  unsigned threads = 1;
};

struct EnergyTrace {
  std::vector<double> times;
  std::vector<double> energy;       ///< electromagnetic part (E, H)
  std::vector<double> energy_total; ///< including oscillator energy
  std::vector<double> lf, mf, hf;   ///< electromagnetic split by region
};

/// Plancherel quadrature over the radial wavenumber grid with one cached
/// modal decomposition per node, shared across all evaluation times.
class PlancherelHarness {
public:
  PlancherelHarness(const MaterialSpec &spec, const InitialDataProfile &profile,
                    HarnessOptions opt = {})
      : spec_(spec), profile_(profile), opt_(opt) {
    const double c = spec.light_speed();
    k_lo_ = opt.k_min_factor * spec.min_resonance() / c;
    k_hi_ = opt.k_max_factor * spec.max_resonance() / c;
    cut_lo_ = 0.1 * spec.min_resonance() / c;
    cut_hi_ = 10.0 * spec.max_resonance() / c;
    if (profile.band_limit) {
      k_lo_ = std::max(k_lo_, profile.band_limit->first);
      k_hi_ = std::min(k_hi_, profile.band_limit->second);
    }
    build_nodes();
  }

  /// Electromagnetic energy at time t; fills the optional region parts.
  double electromagnetic_energy(double t, double *lf = nullptr, double *mf = nullptr,
                                double *hf = nullptr, double *total = nullptr) const {
    std::vector<double> em(nodes_.size()), tot(nodes_.size());
    parallel_for(
        nodes_.size(),
        [&](std::size_t i) {
          const Node &nd = nodes_[i];
          ModalState u = ModalState::Zero(dim_);
          for (std::size_t gidx = 0; gidx < nd.modes.size(); ++gidx) {
            const Mode &m = nd.modes[gidx];
            if (!m.multi) {
              u += std::exp(Complex(0.0, -1.0) * m.center * t) * m.component;
            } else {
              ModalState acc = m.component, term = m.component;
              for (int q = 1; q <= 128; ++q) {
                term = (Complex(0.0, -1.0) * t / double(q)) *
                       (nd.matrix * term - m.center * term);
                acc += term;
                if (term.norm() <= 1e-16 * acc.norm()) break;
              }
              u += std::exp(Complex(0.0, -1.0) * m.center * t) * acc;
            }
          }
          em[i] = 0.5 * (spec_.eps0() * std::norm(u(0)) + spec_.mu0() * std::norm(u(1)));
          double e_tot = 0.0;
          for (Eigen::Index c = 0; c < dim_; ++c) e_tot += weights_(c) * std::norm(u(c));
          tot[i] = 0.5 * e_tot;
        },
        opt_.threads);

    double parts[3] = {0.0, 0.0, 0.0};
    double whole_total = 0.0;
    for (int r = 0; r < 3; ++r) {
      double acc = 0.0, acc_tot = 0.0;
      for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].region != r) continue;
        acc += nodes_[i].quad_weight * em[i];
        acc_tot += nodes_[i].quad_weight * tot[i];
      }
      parts[r] = 4.0 * 3.14159265358979323846 * acc;
      whole_total += 4.0 * 3.14159265358979323846 * acc_tot;
    }
    if (lf) *lf = parts[0];
    if (mf) *mf = parts[1];
    if (hf) *hf = parts[2];
    if (total) *total = whole_total;
    return parts[0] + parts[1] + parts[2];
  }

  EnergyTrace trace(const std::vector<double> &t_grid) const {
    EnergyTrace tr;
    tr.times = t_grid;
    tr.energy.resize(t_grid.size());
    tr.energy_total.resize(t_grid.size());
    tr.lf.resize(t_grid.size());
    tr.mf.resize(t_grid.size());
    tr.hf.resize(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i)
      tr.energy[i] = electromagnetic_energy(t_grid[i], &tr.lf[i], &tr.mf[i], &tr.hf[i],
                                            &tr.energy_total[i]);
    return tr;
  }

  double k_lo() const { return k_lo_; }
  double k_hi() const { return k_hi_; }

private:
  struct Mode {
    Complex center;
    ModalState component; ///< projector applied to the initial state
    bool multi = false;
  };
  struct Node {
    double k = 0.0;
    double quad_weight = 0.0; ///< includes k^2, profile squared absorbed in component
    int region = 1;
    std::vector<Mode> modes;
    Eigen::MatrixXcd matrix; ///< kept only for merged-eigenvalue nodes
  };

  void build_nodes() {
    dim_ = Eigen::Index(spec_.state_dimension());
    const ModalSystem probe = build_modal(spec_, k_lo_, +1);
    weights_ = probe.weights;

    // three log-uniform Simpson grids, one per region, node counts
    // proportional to the decade span
    struct Region {
      double lo, hi;
      int id;
    };
    std::vector<Region> regions;
    const double lo_mid = std::clamp(cut_lo_, k_lo_, k_hi_);
    const double hi_mid = std::clamp(cut_hi_, k_lo_, k_hi_);
    if (lo_mid > k_lo_) regions.push_back({k_lo_, lo_mid, 0});
    if (hi_mid > lo_mid) regions.push_back({lo_mid, hi_mid, 1});
    if (k_hi_ > hi_mid) regions.push_back({hi_mid, k_hi_, 2});
    double total_span = 0.0;
    for (const auto &r : regions) total_span += std::log(r.hi / r.lo);

    for (const auto &r : regions) {
      std::size_t n = std::max<std::size_t>(
          33, std::size_t(double(opt_.points) * std::log(r.hi / r.lo) / total_span));
      if (n % 2 == 0) ++n; // Simpson wants an odd node count
      const double du = std::log(r.hi / r.lo) / double(n - 1);
      for (std::size_t i = 0; i < n; ++i) {
        const double u = std::log(r.lo) + du * double(i);
        const double k = std::exp(u);
        double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        w *= du / 3.0;
        Node nd;
        nd.k = k;
        nd.region = r.id;
        nd.quad_weight = w * k * k * k; // k^2 dk = k^3 du
        nodes_.push_back(std::move(nd));
      }
    }

    parallel_for(
        nodes_.size(),
        [&](std::size_t i) {
          Node &nd = nodes_[i];
          const ModalSystem sys = build_modal(spec_, nd.k, +1);
          const SpectralDecomposition dec = spectral_decomposition(sys);
          ModalState u0 = ModalState::Zero(dim_);
          const double g = profile_(nd.k);
          u0(0) = g;
          u0(1) = g;
          std::vector<int> counts(dec.group_projector.size(), 0);
          for (int gix : dec.group_of) ++counts[std::size_t(gix)];
          bool any_multi = false;
          for (std::size_t gidx = 0; gidx < dec.group_projector.size(); ++gidx) {
            Mode m;
            m.center = dec.group_center[gidx];
            m.component = dec.group_projector[gidx] * u0;
            m.multi = counts[gidx] > 1;
            any_multi = any_multi || m.multi;
            nd.modes.push_back(std::move(m));
          }
          if (any_multi) nd.matrix = dec.matrix;
        },
        opt_.threads);
  }

  MaterialSpec spec_;
  InitialDataProfile profile_;
  HarnessOptions opt_;
  double k_lo_ = 0.0, k_hi_ = 0.0, cut_lo_ = 0.0, cut_hi_ = 0.0;
  Eigen::Index dim_ = 0;
  Eigen::VectorXd weights_;
  std::vector<Node> nodes_;
};

/// Total electromagnetic energy at one time.
inline double total_energy(const MaterialSpec &spec, const InitialDataProfile &profile, double t,
                           HarnessOptions opt = {}) {
  if (t < 0.0) throw ValidationError("time must be nonnegative");
  return PlancherelHarness(spec, profile, opt).electromagnetic_energy(t);
}

/// Sampled energy trace over a time grid (build the harness once).
inline EnergyTrace energy_trace(const MaterialSpec &spec, const InitialDataProfile &profile,
                                const std::vector<double> &t_grid, HarnessOptions opt = {}) {
  return PlancherelHarness(spec, profile, opt).trace(t_grid);
}

/// Least-squares slope of log(energy) against log(t) on [t_min, t_max].
inline LineFit fit_decay_exponent(const EnergyTrace &trace, double t_min, double t_max) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    const double t = trace.times[i];
    if (t < t_min || t > t_max || t <= 0.0) continue;
    if (trace.energy[i] <= 0.0) continue;
    xs.push_back(t);
    ys.push_back(trace.energy[i]);
  }
  if (xs.size() < 3) throw RegressionUnstable("not enough samples in the fit window");
  const LineFit fit = fit_loglog(xs, ys);
  if (fit.r_squared < 0.99) throw RegressionUnstable("decay fit lost its power law");
  return fit;
}

/// Predicted polynomial decay exponent (positive): min of the Sobolev
/// mechanism (halved for weakly dissipative media) and the low-frequency
/// moment mechanism p + 3/2.
inline double predicted_exponent(const MaterialSpec &spec, const InitialDataProfile &profile) {
  const StructureReport rep = classify_dissipativity(spec);
  if (!rep.dissipative)
    throw AssumptionViolated("decay exponents are defined for dissipative media");
  const double s_eff = rep.weakly_dissipative ? 0.5 * profile.s : profile.s;
  return std::min(s_eff, profile.p + 1.5);
}

} // namespace dlab
