#include "spinboson/cli/runner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "spinboson/dynmap.hpp"
#include "spinboson/exact.hpp"
#include "spinboson/friedrichs.hpp"
#include "spinboson/gkls.hpp"
#include "spinboson/numerics/grid.hpp"
#include "spinboson/thermo.hpp"

namespace spinboson::cli {

namespace {

using nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> to_vec(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

double tail_median(const std::vector<double>& values) {
  std::vector<double> tail(values.begin() + 3 * values.size() / 4, values.end());
  if (tail.empty()) return kNaN;
  std::sort(tail.begin(), tail.end());
  return tail[tail.size() / 2];
}

ModelParams model_params(const Scenario& s) {
  ModelParams p;
  p.omega = s.omega;
  p.beta = s.beta;
  p.lambda = s.lambda;
  return p;
}

Eigen::Matrix2cd initial_density(const Scenario& s) {
  const auto [p0, coh0] = initial_qubit_state(s);
  Eigen::Matrix2cd rho;
  rho << p0, coh0, std::conj(coh0), 1.0 - p0;
  return rho;
}

Table coefficients_table(const std::string& name, const exact::MapCoefficients& mc) {
  Table t{name, {"t", "alpha", "xi", "gamma", "zeta", "eta_re", "eta_im", "D"}, {}};
  t.rows.reserve(static_cast<size_t>(mc.size()));
  for (Eigen::Index k = 0; k < mc.size(); ++k)
    t.rows.push_back({mc.t(k), mc.alpha(k), mc.xi(k), mc.gamma(k), mc.zeta(k),
                      mc.eta(k).real(), mc.eta(k).imag(), mc.D(k)});
  return t;
}

Table rates_table(const gkls::RateSeries& r) {
  Table t{"rates", {"t", "gamma_plus", "gamma_minus", "gamma_z", "shift", "valid"}, {}};
  t.rows.reserve(static_cast<size_t>(r.size()));
  for (Eigen::Index k = 0; k < r.size(); ++k)
    t.rows.push_back({r.t(k), r.gamma_plus(k), r.gamma_minus(k), r.gamma_z(k),
                      r.shift(k), static_cast<double>(r.valid[static_cast<size_t>(k)])});
  return t;
}

Table occupations_table(const exact::OccupationSeries& occ) {
  Table t{"occupations", {"t"}, {}};
  for (Eigen::Index k = 0; k < occ.n.cols(); ++k)
    t.columns.push_back("n_" + std::to_string(k));
  t.rows.reserve(static_cast<size_t>(occ.t.size()));
  for (Eigen::Index i = 0; i < occ.t.size(); ++i) {
    std::vector<double> row{occ.t(i)};
    for (Eigen::Index k = 0; k < occ.n.cols(); ++k) row.push_back(occ.n(i, k));
    t.rows.push_back(std::move(row));
  }
  return t;
}

ordered_json truncation_json(const exact::TruncationHealth& h, const Scenario& s) {
  ordered_json j;
  j["max_total"] = s.max_total;
  j["gibbs_weight"] = h.gibbs_weight;
  j["occupation_capture"] = h.occupation_capture;
  j["occupation_capture_min"] = s.occupation_capture_min;
  j["mode_occupation"] = to_vec(h.mode_occupation);
  j["mode_occupation_full"] = to_vec(h.mode_occupation_full);
  return j;
}

// Everything the engine pipelines share: bath, basis, engine, health gate,
// grid, and map coefficients.
struct EngineRun {
  bath::DiscretizedBath bath;
  exact::SectorBasis basis;
  std::unique_ptr<exact::SectorEngine> engine;
  Eigen::VectorXd grid;
  exact::MapCoefficients mc;
};

EngineRun engine_run(const Scenario& s, int threads, ordered_json& manifest) {
  EngineRun er;
  er.bath = discretized_bath(s);
  er.basis = exact::build_basis(er.bath.n_modes(), s.max_total);
  er.engine = std::make_unique<exact::SectorEngine>(er.bath, model_params(s),
                                                    er.basis, threads);
  const auto& h = er.engine->health();
  manifest["truncation"] = truncation_json(h, s);
  if (h.occupation_capture < s.occupation_capture_min) {
    std::ostringstream os;
    os << "occupation capture " << h.occupation_capture << " at max_total = "
       << s.max_total << " is below truncation.occupation_capture_min = "
       << s.occupation_capture_min;
    throw TruncationError(os.str());
  }
  er.grid = numerics::uniform_grid(s.t_max, s.steps);
  er.mc = er.engine->map_coefficients(er.grid);
  return er;
}

void convergence_check(const Scenario& s, const EngineRun& er, int threads,
                       ordered_json& manifest) {
  const auto basis2 = exact::build_basis(er.bath.n_modes(), s.max_total + 1);
  const exact::SectorEngine engine2(er.bath, model_params(s), basis2, threads);
  const auto mc2 = engine2.map_coefficients(er.grid);
  ordered_json j;
  j["compared_max_total"] = s.max_total + 1;
  j["sup_abs_diff"] = {
      {"alpha", (mc2.alpha - er.mc.alpha).cwiseAbs().maxCoeff()},
      {"xi", (mc2.xi - er.mc.xi).cwiseAbs().maxCoeff()},
      {"gamma", (mc2.gamma - er.mc.gamma).cwiseAbs().maxCoeff()},
      {"zeta", (mc2.zeta - er.mc.zeta).cwiseAbs().maxCoeff()},
      {"eta", (mc2.eta - er.mc.eta).cwiseAbs().maxCoeff()},
  };
  manifest["convergence"] = std::move(j);
}

void add_occupations(const Scenario& s, const EngineRun& er, OutputFormat fmt,
                     std::vector<Artifact>& arts) {
  const Eigen::Index n = er.grid.size();
  const Eigen::Index stride = std::max(1, s.occupation_stride);
  const Eigen::Index count = (n + stride - 1) / stride;
  Eigen::VectorXd subgrid(count);
  for (Eigen::Index i = 0; i < count; ++i) subgrid(i) = er.grid(i * stride);
  const double p0 = initial_qubit_state(s).first;
  arts.push_back(encode(occupations_table(er.engine->occupations(p0, subgrid)), fmt));
}

// Map application and GKLS re-integration along the grid for the scenario's
// initial state. The generator diverges as 1/D where the map loses
// invertibility, so the ODE runs only while D stays above ode_d_min; ODE
// columns are NaN beyond that prefix.
Table trajectory_table(const Scenario& s, const exact::MapCoefficients& mc,
                       const gkls::RateSeries& rates, ordered_json& report) {
  const Eigen::Matrix2cd rho0 = initial_density(s);
  const Eigen::Index n_valid = rates.valid_prefix();
  Eigen::Index n_ode = 0;
  while (n_ode < n_valid && mc.D(n_ode) > s.ode_d_min) ++n_ode;
  gkls::Trajectory traj;
  if (n_ode >= 2) traj = gkls::integrate(rates, rho0, n_ode - 1);

  Table t{"trajectory",
          {"t", "map_p_plus", "map_coh_re", "map_coh_im", "map_p_minus",
           "ode_p_plus", "ode_coh_re", "ode_coh_im", "ode_p_minus",
           "trace_distance"},
          {}};
  double sup_dist = 0.0;
  for (Eigen::Index k = 0; k < mc.size(); ++k) {
    const Eigen::Matrix2cd rm = dynmap::apply_map(dynmap::at(mc, k), rho0);
    std::vector<double> row{mc.t(k), rm(0, 0).real(), rm(0, 1).real(),
                            rm(0, 1).imag(), rm(1, 1).real()};
    if (k < n_ode && static_cast<size_t>(k) < traj.rho.size()) {
      const Eigen::Matrix2cd& ro = traj.rho[static_cast<size_t>(k)];
      const double dist = dynmap::trace_distance(rm, ro);
      sup_dist = std::max(sup_dist, dist);
      row.insert(row.end(), {ro(0, 0).real(), ro(0, 1).real(), ro(0, 1).imag(),
                             ro(1, 1).real(), dist});
    } else {
      row.insert(row.end(), {kNaN, kNaN, kNaN, kNaN, kNaN});
    }
    t.rows.push_back(std::move(row));
  }
  report["gkls_valid_points"] = n_valid;
  report["gkls_ode_points"] = n_ode;
  report["gkls_sup_trace_distance"] = n_ode >= 2 ? sup_dist : kNaN;
  return t;
}

Table equilibrium_table(const thermo::EquilibrationSeries& es,
                        const exact::MapCoefficients& mc) {
  Table t{"equilibrium",
          {"t", "ratio_alpha", "ratio_xi", "int_gamma_plus", "d_measured",
           "d_pred", "inv_cbar"},
          {}};
  t.rows.reserve(static_cast<size_t>(es.t.size()));
  for (Eigen::Index k = 0; k < es.t.size(); ++k)
    t.rows.push_back({es.t(k), es.ratio_alpha(k), es.ratio_xi(k),
                      es.int_gamma_plus(k), mc.D(k), es.d_pred(k), es.inv_cbar(k)});
  return t;
}

void equilibrium_report(const Scenario& s, const exact::MapCoefficients& mc,
                        const gkls::RateSeries& rates,
                        const thermo::EquilibrationSeries& es, ordered_json& report) {
  const auto ratios = thermo::detailed_balance_ratios(es);
  const auto st = gkls::stationarity(rates);
  ordered_json j;
  j["n_occ"] = es.n_occ;
  j["p_plus_asymptotic"] = thermo::asymptotic_excited_population(s.beta, s.omega);
  j["p_plus_tail_median"] = tail_median(to_vec(mc.gamma));
  j["ratio_alpha_tail_median"] = ratios.ratio_alpha_median;
  j["ratio_alpha_target"] = ratios.target_alpha;
  j["ratio_xi_tail_median"] = ratios.ratio_xi_median;
  j["ratio_xi_target"] = ratios.target_xi;
  j["fixed_point_tail_median"] = st.tail_median;
  j["fixed_point_tail_drift"] = st.tail_drift;
  report["equilibrium"] = std::move(j);
}

void run_engine_kinds(const Scenario& s, const RunOptions& opt,
                      std::vector<Artifact>& arts, ordered_json& manifest,
                      ordered_json& report) {
  EngineRun er = engine_run(s, opt.threads, manifest);
  if (s.check_convergence) convergence_check(s, er, opt.threads, manifest);
  arts.push_back(encode(coefficients_table("coefficients", er.mc), opt.format));
  if (s.occupations) add_occupations(s, er, opt.format, arts);
  if (s.kind == PipelineKind::Map) return;

  const auto rates = gkls::rates_from_map(er.mc, s.d_min, s.eta_min);
  arts.push_back(encode(rates_table(rates), opt.format));
  arts.push_back(encode(trajectory_table(s, er.mc, rates, report), opt.format));
  if (s.kind != PipelineKind::Equilibrium) return;

  const auto es = thermo::equilibration_series(er.mc, rates, model_params(s));
  arts.push_back(encode(equilibrium_table(es, er.mc), opt.format));
  equilibrium_report(s, er.mc, rates, es, report);
}

void run_collapse(const Scenario& s, const RunOptions& opt,
                  std::vector<Artifact>& arts, ordered_json& manifest,
                  ordered_json& report) {
  EngineRun er = engine_run(s, opt.threads, manifest);
  if (s.check_convergence) convergence_check(s, er, opt.threads, manifest);

  Scenario sb = s;
  sb.lambda = s.lambda * s.collapse_lambda_scale;
  sb.t_max = s.t_max * s.collapse_time_scale;
  const exact::SectorEngine engine_b(er.bath, model_params(sb), er.basis,
                                     opt.threads);
  const Eigen::VectorXd grid_b = numerics::uniform_grid(sb.t_max, sb.steps);
  const auto mc_b = engine_b.map_coefficients(grid_b);

  const auto rep = thermo::van_hove_collapse(er.mc, s.lambda, mc_b, sb.lambda, 512);

  Table t{"collapse", {"tau", "p_a", "p_b", "diff"}, {}};
  const double ha = er.grid(1) - er.grid(0);
  const double hb = grid_b(1) - grid_b(0);
  const int n_samples = 512;
  for (int i = 0; i < n_samples; ++i) {
    const double tau = rep.tau_max * i / (n_samples - 1);
    const double pa = numerics::interp_cubic(er.mc.xi, 0.0, ha, 0, er.mc.size() - 1,
                                             tau / (s.lambda * s.lambda));
    const double pb = numerics::interp_cubic(mc_b.xi, 0.0, hb, 0, mc_b.size() - 1,
                                             tau / (sb.lambda * sb.lambda));
    t.rows.push_back({tau, pa, pb, pa - pb});
  }
  arts.push_back(encode(coefficients_table("coefficients", er.mc), opt.format));
  arts.push_back(encode(coefficients_table("coefficients_scaled", mc_b), opt.format));
  arts.push_back(encode(t, opt.format));

  report["collapse"] = {{"lambda_a", s.lambda},
                        {"lambda_b", sb.lambda},
                        {"tau_max", rep.tau_max},
                        {"sup_diff", rep.sup_diff},
                        {"range", rep.range},
                        {"relative", rep.relative}};
}

void run_survival(const Scenario& s, const RunOptions& opt,
                  std::vector<Artifact>& arts, ordered_json& report) {
  const auto J = spectral_density(s);
  const ModelParams p = model_params(s);
  friedrichs::SurvivalOptions fo;
  fo.dt = s.survival_dt;
  fo.store_stride = s.store_stride;
  fo.track_norm = s.track_norm;
  fo.n_threads = opt.threads;
  const auto res = friedrichs::solve_survival(J, p, s.t_max, fo);

  Table t{"survival", {"t", "re_u", "im_u", "abs2_u", "flip_norm"}, {}};
  const bool tracked = res.norm_residual.size() == res.t.size();
  double max_resid = 0.0;
  std::vector<double> plateau;
  for (Eigen::Index i = 0; i < res.t.size(); ++i) {
    const double abs2 = std::norm(res.u(i));
    const double flip = tracked ? res.norm_residual(i) + 1.0 - abs2 : kNaN;
    if (tracked) max_resid = std::max(max_resid, std::fabs(res.norm_residual(i)));
    if (res.t(i) >= 0.5 * s.t_max) plateau.push_back(abs2);
    t.rows.push_back({res.t(i), res.u(i).real(), res.u(i).imag(), abs2, flip});
  }
  arts.push_back(encode(t, opt.format));

  ordered_json j;
  j["dt"] = s.survival_dt;
  j["norm_max_abs_residual"] = tracked ? max_resid : kNaN;
  std::sort(plateau.begin(), plateau.end());
  j["abs2_median_second_half"] = plateau.empty() ? kNaN : plateau[plateau.size() / 2];

  const auto bs = friedrichs::bound_state(J, p);
  j["bound_state"] = {{"exists", bs.exists},
                      {"s_pole", bs.s_pole},
                      {"weight", bs.weight},
                      {"residual", bs.residual}};
  if (J.has_continuum()) {
    const auto cp = friedrichs::cut_pole_identity(J, p);
    j["cut_pole"] = {{"cut_integral", cp.cut_integral},
                     {"pole_weight", cp.pole_weight},
                     {"total", cp.total},
                     {"residual", cp.residual}};
  }
  if (s.tail_fit_lo > 0.0 && s.tail_fit_hi > s.tail_fit_lo) {
    const auto fit = friedrichs::tail_fit(res, s.tail_fit_lo, s.tail_fit_hi, J, p);
    j["tail_fit"] = {{"exponent", fit.exponent},
                     {"log_prefactor", fit.log_prefactor},
                     {"r2", fit.r2},
                     {"points", fit.points},
                     {"predicted_exponent", fit.predicted_exponent},
                     {"predicted_prefactor", fit.predicted_prefactor}};
  }
  report["survival"] = std::move(j);
}

ordered_json config_json(const Scenario& s) {
  ordered_json j;
  std::istringstream in(canonical_config(s));
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) j[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return j;
}

}  // namespace

RunResult run_scenario(const Scenario& s, const RunOptions& opt) {
  const auto issues = validate_scenario(s);
  for (const auto& i : issues)
    if (i.severity == Issue::Severity::Error)
      throw ConfigError(i.key + ": " + i.message);

  ordered_json manifest;
  manifest["name"] = s.name.empty() ? "unnamed" : s.name;
  manifest["pipeline"] = to_string(s.kind);
  manifest["config_hash"] = config_hash(s);
  manifest["format"] = opt.format == OutputFormat::Csv ? "csv" : "json";
  manifest["config"] = config_json(s);
  {
    ordered_json w = ordered_json::array();
    for (const auto& i : issues) w.push_back(i.key + ": " + i.message);
    manifest["warnings"] = std::move(w);
  }

  std::vector<Artifact> arts;
  ordered_json report;
  switch (s.kind) {
    case PipelineKind::Map:
    case PipelineKind::Gkls:
    case PipelineKind::Equilibrium:
      run_engine_kinds(s, opt, arts, manifest, report);
      break;
    case PipelineKind::Collapse:
      run_collapse(s, opt, arts, manifest, report);
      break;
    case PipelineKind::Survival:
      run_survival(s, opt, arts, report);
      break;
  }
  if (!report.empty()) manifest["report"] = std::move(report);

  ordered_json names = ordered_json::array();
  for (const auto& a : arts) names.push_back(a.filename);
  manifest["artifacts"] = std::move(names);
  arts.push_back({"manifest.json", manifest.dump(2) + "\n"});

  write_artifacts(opt.out_dir, arts);

  RunResult result;
  for (const auto& a : arts) result.files.push_back(a.filename);
  for (const auto& i : issues) result.warnings.push_back(i);
  return result;
}

}  // namespace spinboson::cli
