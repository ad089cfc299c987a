#pragma once

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dlab/decay.hpp"
#include "dlab/dispersion.hpp"
#include "dlab/measure.hpp"
#include "dlab/modal.hpp"
#include "dlab/spec_io.hpp"
#include "dlab/structure.hpp"

namespace dlab::cli {

/// Everything a subcommand needs, validated before dispatch.
struct RunConfig {
  std::string command;   ///< check | herglotz | measure | dispersion-trace |
                         ///< bands | asymptotics | modal-spectrum |
                         ///< modal-evolve | decay
  std::string spec_path;
  std::string out_path;  ///< "-" writes to stdout
  std::string format = "json"; ///< csv | json where a choice exists

  double kmin = 1e-3, kmax = 1e4;
  std::size_t points = 400;
  double k = 1.0;
  double t = 10.0, dt = 1e-3;
  double s = 2.0, p = 0.0;
  double tmin = 1.0, tmax = 1e4;
  std::size_t tpoints = 40;
  std::string channel = "electric";
  double ximax = 0.0; ///< 0: derive from the spec
  std::size_t grid_points = 100; ///< per axis for herglotz sampling
  unsigned threads = 1;
};

namespace detail {

inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline MaterialSpec load_spec(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open spec file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

inline void write_text(const std::string &path, const std::string &text) {
  if (path == "-" || path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot open output file: " + path);
  out << text;
}

inline nlohmann::json structure_to_json(const StructureReport &rep) {
  nlohmann::json j;
  j["assumption1_ok"] = rep.assumption1_ok;
  j["assumption2_ok"] = rep.assumption2_ok;
  j["assumption3_ok"] = rep.assumption3_ok;
  j["e_n_d"] = rep.e_n_d;
  j["m_n_d"] = rep.m_n_d;
  j["dissipative"] = rep.dissipative;
  j["weakly_dissipative"] = rep.weakly_dissipative;
  j["strongly_dissipative"] = rep.strongly_dissipative;
  auto roots = [](const std::vector<Root> &rs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &r : rs)
      arr.push_back({{"re", r.value.real()}, {"im", r.value.imag()}, {"multiplicity", r.multiplicity}});
    return arr;
  };
  j["poles_eps"] = roots(rep.poles_e);
  j["zeros_eps"] = roots(rep.zeros_e);
  j["poles_mu"] = roots(rep.poles_m);
  j["zeros_mu"] = roots(rep.zeros_m);
  j["resonances_electric"] = rep.r_e;
  j["resonances_magnetic"] = rep.r_m;
  j["resonances_electric_simple"] = rep.r_e_s;
  j["resonances_electric_double"] = rep.r_e_d;
  j["resonances_magnetic_simple"] = rep.r_m_s;
  j["resonances_magnetic_double"] = rep.r_m_d;
  return j;
}

inline int run_check(const RunConfig &cfg) {
  const MaterialSpec spec = load_spec(cfg.spec_path);
  const StructureReport rep = validate_assumptions(spec);
  const double scale = spec.frequency_scale();
  const auto grid = log_polar_grid(1e-3 * scale, 1e3 * scale, cfg.grid_points, cfg.grid_points);
  const HerglotzSample hs = herglotz_sample(spec, grid);
  nlohmann::json j = structure_to_json(rep);
  j["herglotz"] = {{"min_im_omega_eps", hs.min_im_omega_eps},
                   {"min_im_omega_mu", hs.min_im_omega_mu},
                   {"max_symmetry_defect", hs.max_symmetry_defect},
                   {"grid_size", hs.grid_size}};
  j["passivity_sample_ok"] = hs.min_im_omega_eps > 0.0 && hs.min_im_omega_mu > 0.0;
  write_text(cfg.out_path, j.dump(2) + "\n");
  return 0;
}

inline int run_herglotz(const RunConfig &cfg) {
  const MaterialSpec spec = load_spec(cfg.spec_path);
  const double scale = spec.frequency_scale();
  const auto grid = log_polar_grid(1e-3 * scale, 1e3 * scale, cfg.grid_points, cfg.grid_points);
  const HerglotzSample hs = herglotz_sample(spec, grid);
  nlohmann::json j = {{"min_im_omega_eps", hs.min_im_omega_eps},
                      {"min_im_omega_mu", hs.min_im_omega_mu},
                      {"max_symmetry_defect", hs.max_symmetry_defect},
                      {"grid_size", hs.grid_size}};
  write_text(cfg.out_path, j.dump(2) + "\n");
  return 0;
}

inline int run_measure(const RunConfig &cfg) {
  const MaterialSpec spec = load_spec(cfg.spec_path);
  const Channel ch = cfg.channel == "magnetic" ? Channel::magnetic : Channel::electric;
  const MeasureRepresentation m = measure_of(spec, ch);
  const double hi = cfg.ximax > 0.0 ? cfg.ximax : 10.0 * spec.max_resonance();
  std::string csv = "xi,density\n";
  const std::size_t n = std::max<std::size_t>(cfg.points, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = -hi + 2.0 * hi * double(i) / double(n - 1);
    csv += fmt17(xi) + "," + fmt17(m.density_value(xi)) + "\n";
  }
  write_text(cfg.out_path, csv);
  nlohmann::json j;
  j["herglotz_slope"] = m.herglotz_slope;
  j["atoms"] = nlohmann::json::array();
  for (const auto &a : m.atoms) j["atoms"].push_back({{"location", a.location}, {"weight", a.weight}});
  j["density_terms"] = m.densities.size();
  std::cout << j.dump() << "\n";
  return 0;
}

inline int run_dispersion_trace(const RunConfig &cfg) {
  const MaterialSpec spec = load_spec(cfg.spec_path);
  if (!(cfg.kmin < cfg.kmax) || cfg.points < 2)
    throw ValidationError("require kmin < kmax and points >= 2");
  std::vector<double> grid{0.0};
  for (std::size_t i = 0; i < cfg.points; ++i)
    grid.push_back(cfg.kmin * std::pow(cfg.kmax / cfg.kmin, double(i) / double(cfg.points - 1)));
  const BranchSet bs = trace_branches(spec, grid);
  std::string csv = "k,n,re_omega,im_omega\n";
  for (std::size_t i = 0; i < bs.k.size(); ++i)
    for (std::size_t b = 0; b < bs.branch_count(); ++b)
      csv += fmt17(bs.k[i]) + "," + std::to_string(b + 1) + "," +
             fmt17(bs.omega[b][i].real()) + "," + fmt17(bs.omega[b][i].imag()) + "\n";
  write_text(cfg.out_path, csv);
  return 0;
}

inline int run_bands(const RunConfig &cfg) {
  const MaterialSpec spec = load_spec(cfg.spec_path);
  const BandStructure bands = band_structure(spec);
  nlohmann::json j;
  j["bands"] = nlohmann::json::array();
  for (const auto &b : bands.bands) {
    nlohmann::json bj = {{"lo", b.lo}, {"increasing", b.increasing}, {"unbounded", b.unbounded}};
    if (!b.unbounded) bj["hi"] = b.hi;
    j["bands"].push_back(bj);
  }
  j["gaps"] = nlohmann::json::array();
  for (const auto &g : bands.gaps) j["gaps"].push_back({{"lo", g.first}, {"hi", g.second}});
  j["forward_set"] = bands.forward_set;
  j["backward_set"] = bands.backward_set;
  j["negative_index"] = bands.negative_index;
  write_text(cfg.out_path, j.dump(2) + "\n");
  return 0;
}

inline int run_asymptotics(const RunConfig &cfg) {
  const MaterialSpec spec = load_spec(cfg.spec_path);
  const AsymptoticCoefficients coeffs = asymptotic_coefficients(spec);
  const BranchSet bs = trace_branches(spec, default_k_grid(spec, cfg.points));
  const auto checks = verify_asymptotics(bs, coeffs);
  nlohmann::json j;
  j["a_infinity"] = coeffs.a_infinity;
  j["light_speed"] = coeffs.light_speed;
  j["entries"] = nlohmann::json::array();
  for (const auto &e : coeffs.entries) {
    nlohmann::json ej;
    ej["kind"] = e.kind == AsymptoticKind::hf_order2   ? "hf_order2"
                 : e.kind == AsymptoticKind::hf_order4 ? "hf_order4"
                                                       : "lf_order2";
    ej["anchor"] = e.anchor;
    if (e.coefficient) ej["coefficient"] = *e.coefficient;
    if (e.vacuum_limit_coefficient) ej["vacuum_limit_coefficient"] = *e.vacuum_limit_coefficient;
    j["entries"].push_back(ej);
  }
  j["branch_checks"] = nlohmann::json::array();
  for (const auto &c : checks) {
    nlohmann::json cj;
    cj["branch"] = c.branch + 1;
    cj["kind"] = c.kind == AsymptoticKind::hf_order2   ? "hf_order2"
                 : c.kind == AsymptoticKind::hf_order4 ? "hf_order4"
                                                       : "lf_order2";
    cj["expected_exponent"] = c.expected_exponent;
    cj["fitted_exponent"] = c.fitted_exponent;
    cj["fitted_coefficient"] = c.fitted_coefficient;
    if (c.expected_coefficient) cj["expected_coefficient"] = *c.expected_coefficient;
    if (c.coefficient_defect) cj["coefficient_defect"] = *c.coefficient_defect;
    cj["r_squared"] = c.r_squared;
    j["branch_checks"].push_back(cj);
  }
  write_text(cfg.out_path, j.dump(2) + "\n");
  return 0;
}

inline int run_modal_spectrum(const RunConfig &cfg) {
  const MaterialSpec spec = load_spec(cfg.spec_path);
  const ModalSystem sys = build_modal(spec, cfg.k, +1);
  const SpectralDecomposition dec = spectral_decomposition(sys);
  nlohmann::json j;
  j["k"] = cfg.k;
  j["eigenvalues"] = nlohmann::json::array();
  for (Eigen::Index i = 0; i < dec.eigenvalues.size(); ++i)
    j["eigenvalues"].push_back({{"re", dec.eigenvalues(i).real()}, {"im", dec.eigenvalues(i).imag()}});
  j["diagonalizable"] = dec.diagonalizable;
  j["max_projector_norm"] =
      *std::max_element(dec.projector_norms.begin(), dec.projector_norms.end());
  j["spectrum_consistency"] = spectrum_consistency(spec, cfg.k);
  write_text(cfg.out_path, j.dump(2) + "\n");
  return 0;
}

inline int run_modal_evolve(const RunConfig &cfg) {
  const MaterialSpec spec = load_spec(cfg.spec_path);
  const ModalSystem sys = build_modal(spec, cfg.k, +1);
  ModalState u0 = ModalState::Zero(sys.dim());
  u0(0) = 1.0;
  u0(1) = 1.0;
  const Rk4Result res = rk4_reference(sys, u0, cfg.t, cfg.dt);
  std::string csv = "t,energy,dissipation,balance_defect\n";
  for (std::size_t i = 0; i < res.ledger.t.size(); ++i) {
    double defect = 0.0;
    if (i > 0 && i + 1 < res.ledger.t.size()) {
      const double de = (res.ledger.energy[i + 1] - res.ledger.energy[i - 1]) /
                        (res.ledger.t[i + 1] - res.ledger.t[i - 1]);
      defect = std::abs(de + res.ledger.dissipation[i]);
    }
    csv += fmt17(res.ledger.t[i]) + "," + fmt17(res.ledger.energy[i]) + "," +
           fmt17(res.ledger.dissipation[i]) + "," + fmt17(defect) + "\n";
  }
  write_text(cfg.out_path, csv);
  return 0;
}

inline int run_decay(const RunConfig &cfg) {
  const MaterialSpec spec = load_spec(cfg.spec_path);
  if (!(cfg.tmin < cfg.tmax) || cfg.tpoints < 2)
    throw ValidationError("require tmin < tmax and tpoints >= 2");
  InitialDataProfile profile;
  profile.s = cfg.s;
  profile.p = cfg.p;
  HarnessOptions opt;
  opt.points = cfg.points;
  opt.threads = cfg.threads;
  std::vector<double> t_grid;
  for (std::size_t i = 0; i < cfg.tpoints; ++i)
    t_grid.push_back(cfg.tmin * std::pow(cfg.tmax / cfg.tmin, double(i) / double(cfg.tpoints - 1)));
  const EnergyTrace tr = energy_trace(spec, profile, t_grid, opt);
  std::string csv = "t,energy,energy_total,lf,mf,hf\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    csv += fmt17(tr.times[i]) + "," + fmt17(tr.energy[i]) + "," + fmt17(tr.energy_total[i]) +
           "," + fmt17(tr.lf[i]) + "," + fmt17(tr.mf[i]) + "," + fmt17(tr.hf[i]) + "\n";
  write_text(cfg.out_path, csv);

  const LineFit fit = fit_decay_exponent(tr, cfg.tmax / 10.0, cfg.tmax);
  nlohmann::json j = {{"fitted_exponent", -fit.slope},
                      {"predicted_exponent", predicted_exponent(spec, profile)},
                      {"r2", fit.r_squared}};
  const std::string jtext = j.dump(2) + "\n";
  if (cfg.out_path != "-" && !cfg.out_path.empty()) {
    std::string jpath = cfg.out_path;
    const auto dot = jpath.find_last_of('.');
    jpath = (dot == std::string::npos ? jpath : jpath.substr(0, dot)) + ".json";
    write_text(jpath, jtext);
  }
  std::cout << jtext;
  return 0;
}

} // namespace detail

/// Dispatch a validated config. Returns the process exit status:
/// 0 success, 2 assumption-gated refusal, 1 any other failure.
inline int run(const RunConfig &cfg) {
  try {
    if (cfg.command == "check") return detail::run_check(cfg);
    if (cfg.command == "herglotz") return detail::run_herglotz(cfg);
    if (cfg.command == "measure") return detail::run_measure(cfg);
    if (cfg.command == "dispersion-trace") return detail::run_dispersion_trace(cfg);
    if (cfg.command == "bands") return detail::run_bands(cfg);
    if (cfg.command == "asymptotics") return detail::run_asymptotics(cfg);
    if (cfg.command == "modal-spectrum") return detail::run_modal_spectrum(cfg);
    if (cfg.command == "modal-evolve") return detail::run_modal_evolve(cfg);
    if (cfg.command == "decay") return detail::run_decay(cfg);
    std::cerr << "error: cli.unknown_command: " << cfg.command << "\n";
    return 1;
  } catch (const AssumptionViolated &e) {
    std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
    return 2;
  } catch (const Error &e) {
    std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
}

} // namespace dlab::cli
