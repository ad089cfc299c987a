#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "dlab/symbol.hpp"

namespace dlab {

/// Structural analysis of a material: pole/zero sets of eps and mu,
/// resonance bookkeeping and the assumption flags that gate the
/// dispersion-side operations.
struct StructureReport {
  std::vector<Root> poles_e, zeros_e, poles_m, zeros_m;

  std::vector<double> r_e, r_m;     ///< signed undamped resonances of each channel
  std::vector<double> r_e_s, r_e_d; ///< simple / double real poles of the dispersion symbol
  std::vector<double> r_m_s, r_m_d;

  bool assumption1_ok = true; ///< poles(eps) disjoint from zeros(mu) and vice versa
  bool assumption2_ok = true; ///< 0 is not a pole of eps or mu (no undamped Drude term)
  bool assumption3_ok = true; ///< oscillator polynomials within a channel share no root

  bool e_n_d = true; ///< electrically non dissipative (all electric dampings vanish)
  bool m_n_d = true;
  bool dissipative = false;
  bool weakly_dissipative = false;
  bool strongly_dissipative = false;
};

namespace detail {

inline std::vector<double> signed_resonances(const std::vector<Oscillator> &list) {
  std::set<double> vals;
  for (const auto &o : list)
    if (o.damping == 0.0) {
      vals.insert(o.resonance);
      vals.insert(-o.resonance);
    }
  return {vals.begin(), vals.end()};
}

inline bool near(double a, double b, double scale) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, scale, std::abs(a), std::abs(b)});
}

inline bool contains_near(const std::vector<double> &xs, double v, double scale) {
  return std::any_of(xs.begin(), xs.end(), [&](double x) { return near(x, v, scale); });
}

inline bool roots_intersect(const std::vector<Root> &a, const std::vector<Root> &b,
                            double scale) {
  for (const auto &ra : a)
    for (const auto &rb : b)
      if (std::abs(ra.value - rb.value) <= kRootClusterTol * std::max({1.0, scale}) * 10.0)
        return true;
  return false;
}

} // namespace detail

/// Full structural report. Violations are reported through the flags,
/// never thrown; operations that require an assumption refuse downstream.
inline StructureReport validate_assumptions(const MaterialSpec &spec) {
  StructureReport rep;
  const double scale = spec.frequency_scale();

  const RationalSymbol eps = epsilon_symbol(spec);
  const RationalSymbol mu = mu_symbol(spec);
  const PolesZeros pz_e = poles_and_zeros(eps);
  const PolesZeros pz_m = poles_and_zeros(mu);
  rep.poles_e = pz_e.poles;
  rep.zeros_e = pz_e.zeros;
  rep.poles_m = pz_m.poles;
  rep.zeros_m = pz_m.zeros;

  rep.assumption1_ok = !detail::roots_intersect(rep.poles_e, rep.zeros_m, scale) &&
                       !detail::roots_intersect(rep.poles_m, rep.zeros_e, scale);

  auto has_drude = [](const std::vector<Oscillator> &list) {
    return std::any_of(list.begin(), list.end(),
                       [](const Oscillator &o) { return o.resonance == 0.0 && o.damping == 0.0; });
  };
  rep.assumption2_ok = !has_drude(spec.electric()) && !has_drude(spec.magnetic());

  // Within a channel, two oscillator polynomials share a root exactly
  // when they share the (damping, resonance) pair, which the spec type
  // already rejects, or in the overdamped regime by coincidence.
  auto channel_ok = [&](const std::vector<Oscillator> &list) {
    for (std::size_t j = 0; j < list.size(); ++j)
      for (std::size_t i = 0; i < j; ++i) {
        const auto qi = detail::oscillator_poly<double>(list[i]);
        const auto qj = detail::oscillator_poly<double>(list[j]);
        for (const Complex &r : polynomial_roots(qi))
          if (std::abs(qj(r)) <= 1e-10 * std::max(1.0, scale * scale)) return false;
      }
    return true;
  };
  rep.assumption3_ok = channel_ok(spec.electric()) && channel_ok(spec.magnetic());

  rep.e_n_d = std::all_of(spec.electric().begin(), spec.electric().end(),
                          [](const Oscillator &o) { return o.damping == 0.0; });
  rep.m_n_d = std::all_of(spec.magnetic().begin(), spec.magnetic().end(),
                          [](const Oscillator &o) { return o.damping == 0.0; });
  rep.dissipative = spec.dissipative();

  rep.r_e = detail::signed_resonances(spec.electric());
  rep.r_m = detail::signed_resonances(spec.magnetic());

  // A resonance is a double real pole of the dispersion symbol exactly
  // when both channels carry an undamped oscillator at that frequency.
  for (double v : rep.r_e) {
    if (detail::contains_near(rep.r_m, v, scale))
      rep.r_e_d.push_back(v);
    else
      rep.r_e_s.push_back(v);
  }
  for (double v : rep.r_m) {
    if (detail::contains_near(rep.r_e, v, scale))
      rep.r_m_d.push_back(v);
    else
      rep.r_m_s.push_back(v);
  }

  if (rep.dissipative) {
    const bool magnetically_weak = rep.e_n_d && !rep.r_e_s.empty();
    const bool electrically_weak = rep.m_n_d && !rep.r_m_s.empty();
    rep.weakly_dissipative = magnetically_weak || electrically_weak;
    rep.strongly_dissipative = !rep.weakly_dissipative;
  }
  return rep;
}

/// Alias kept for call sites that only care about the dissipativity
/// classification; the computation is shared with validate_assumptions.
inline StructureReport classify_dissipativity(const MaterialSpec &spec) {
  return validate_assumptions(spec);
}

} // namespace dlab
