#include "spinboson/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "spinboson/bath.hpp"
#include "spinboson/numerics/grid.hpp"

namespace spinboson::thermo {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double median(std::vector<double> v) {
  if (v.empty()) return kNaN;
  const size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    std::nth_element(v.begin(), v.begin() + static_cast<long>(mid) - 1, v.end());
    m = 0.5 * (m + v[mid - 1]);
  }
  return m;
}
}  // namespace

double asymptotic_excited_population(double beta, double omega) {
  if (std::isinf(beta)) return 0.0;
  if (!(beta > 0.0) || !(omega > 0.0))
    throw ConfigError("asymptotic_excited_population: need beta > 0, omega > 0");
  const double x = 0.5 * beta * omega;
  return std::exp(-x) / (2.0 * std::cosh(x));
}

EquilibrationSeries equilibration_series(const exact::MapCoefficients& mc,
                                         const gkls::RateSeries& rates,
                                         const ModelParams& params) {
  if (std::isinf(params.beta))
    throw ConfigError("equilibration_series: requires a thermal bath (finite beta)");
  const Eigen::Index n = mc.size();
  if (rates.size() != n)
    throw ConfigError("equilibration_series: rate and coefficient grids differ");

  EquilibrationSeries es;
  es.t = mc.t;
  es.n_occ = bath::thermal_occupation(params.omega, params.beta);
  es.ratio_alpha = (Eigen::VectorXd::Ones(n) - mc.alpha).cwiseQuotient(mc.alpha);
  es.ratio_xi = (Eigen::VectorXd::Ones(n) - mc.xi).cwiseQuotient(mc.xi);

  // Gamma_+ is integrable over the valid prefix only; past it the closed
  // forms are undefined on this run.
  const Eigen::Index prefix = rates.valid_prefix();
  es.int_gamma_plus = Eigen::VectorXd::Constant(n, kNaN);
  es.d_pred = Eigen::VectorXd::Constant(n, kNaN);
  es.inv_cbar = Eigen::VectorXd::Constant(n, kNaN);
  if (prefix >= 2) {
    const double h = mc.t(1) - mc.t(0);
    const Eigen::VectorXd cum = numerics::cumulative_trapezoid(
        Eigen::VectorXd(rates.gamma_plus.head(prefix)), h);
    const double slope = (2.0 * es.n_occ + 1.0) / es.n_occ;
    for (Eigen::Index k = 0; k < prefix; ++k) {
      es.int_gamma_plus(k) = cum(k);
      es.d_pred(k) = std::exp(-slope * cum(k));
      es.inv_cbar(k) = (1.0 - es.d_pred(k)) / (2.0 * es.n_occ + 1.0);
    }
  }
  return es;
}

RatioTails detailed_balance_ratios(const EquilibrationSeries& es) {
  RatioTails rt;
  rt.target_alpha = es.n_occ / (es.n_occ + 1.0);
  rt.target_xi = (es.n_occ + 1.0) / es.n_occ;
  const Eigen::Index n = es.t.size();
  const Eigen::Index start = (3 * n) / 4;
  std::vector<double> va, vx;
  for (Eigen::Index k = start; k < n; ++k) {
    if (std::isfinite(es.ratio_alpha(k))) va.push_back(es.ratio_alpha(k));
    if (std::isfinite(es.ratio_xi(k))) vx.push_back(es.ratio_xi(k));
  }
  rt.ratio_alpha_median = median(va);
  rt.ratio_xi_median = median(vx);
  return rt;
}

CollapseReport van_hove_collapse(const exact::MapCoefficients& a, double lambda_a,
                                 const exact::MapCoefficients& b, double lambda_b,
                                 int n_samples) {
  if (!(lambda_a > 0.0) || !(lambda_b > 0.0))
    throw ConfigError("van_hove_collapse: couplings must be positive");
  if (a.size() < 4 || b.size() < 4)
    throw ConfigError("van_hove_collapse: series too short");

  const double sa = lambda_a * lambda_a, sb = lambda_b * lambda_b;
  const double tau_max =
      std::min(sa * a.t(a.size() - 1), sb * b.t(b.size() - 1));
  const double ha = a.t(1) - a.t(0), hb = b.t(1) - b.t(0);

  CollapseReport rep;
  rep.tau_max = tau_max;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int i = 0; i <= n_samples; ++i) {
    const double tau = tau_max * i / n_samples;
    const double pa = numerics::interp_cubic(a.xi, 0.0, ha, 0, a.size() - 1, tau / sa);
    const double pb = numerics::interp_cubic(b.xi, 0.0, hb, 0, b.size() - 1, tau / sb);
    rep.sup_diff = std::max(rep.sup_diff, std::abs(pa - pb));
    lo = std::min(lo, pa);
    hi = std::max(hi, pa);
  }
  rep.range = hi - lo;
  rep.relative = rep.range > 0.0 ? rep.sup_diff / rep.range
                                 : std::numeric_limits<double>::infinity();
  return rep;
}

}  // namespace spinboson::thermo
