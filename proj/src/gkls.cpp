#include "spinboson/gkls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spinboson/numerics/grid.hpp"

namespace spinboson::gkls {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double grid_spacing(const Eigen::VectorXd& t) {
  if (t.size() < 5) throw ConfigError("rates_from_map: grid too short");
  const double h = t(1) - t(0);
  if (!(h > 0.0)) throw ConfigError("rates_from_map: grid must be increasing");
  for (Eigen::Index k = 1; k + 1 < t.size(); ++k) {
    if (std::abs(t(k + 1) - t(k) - h) > 1e-9 * std::max(1.0, h))
      throw ConfigError("rates_from_map: grid must be uniform");
  }
  return h;
}

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

Eigen::Index RateSeries::valid_prefix() const {
  Eigen::Index n = 0;
  while (n < static_cast<Eigen::Index>(valid.size()) &&
         valid[static_cast<size_t>(n)])
    ++n;
  return n;
}

RateSeries rates_from_map(const exact::MapCoefficients& mc, double d_min,
                          double eta_min) {
  const Eigen::Index n = mc.size();
  const double h = grid_spacing(mc.t);

  const Eigen::VectorXd alpha_dot = numerics::finite_difference(mc.alpha, h);
  const Eigen::VectorXd xi_dot = numerics::finite_difference(mc.xi, h);
  const Eigen::VectorXcd eta_dot = numerics::finite_difference(mc.eta, h);

  RateSeries r;
  r.t = mc.t;
  r.d_min = d_min;
  r.eta_min = eta_min;
  r.gamma_plus = Eigen::VectorXd::Constant(n, kNaN);
  r.gamma_minus = Eigen::VectorXd::Constant(n, kNaN);
  r.gamma_z = Eigen::VectorXd::Constant(n, kNaN);
  r.shift = Eigen::VectorXd::Constant(n, kNaN);
  r.valid.assign(static_cast<size_t>(n), 0);

  for (Eigen::Index k = 0; k < n; ++k) {
    const double d = mc.D(k);
    if (std::abs(d) <= d_min || std::abs(mc.eta(k)) <= eta_min) continue;
    r.valid[static_cast<size_t>(k)] = 1;
    const double a = mc.alpha(k), x = mc.xi(k);
    const double ad = alpha_dot(k), xd = xi_dot(k);
    const Complex f = -eta_dot(k) / (2.0 * mc.eta(k)) + (xd + ad) / (4.0 * d);
    r.gamma_z(k) = f.real();
    r.shift(k) = -f.imag();
    r.gamma_minus(k) = -(a * xd + (1.0 - x) * ad) / d;
    r.gamma_plus(k) = -(ad * x + (1.0 - a) * xd) / d;
  }
  return r;
}

Trajectory integrate(const RateSeries& rates, const Eigen::Matrix2cd& rho0,
                     Eigen::Index k_hi, const numerics::OdeOptions& opt) {
  const Eigen::Index n = rates.size();
  if (k_hi < 1 || k_hi >= n)
    throw ConfigError("gkls::integrate: k_hi out of range");
  if (k_hi > rates.valid_prefix() - 1)
    throw ConfigError("gkls::integrate: window contains masked rate points");
  if (std::abs(rho0.trace() - 1.0) > 1e-9)
    throw ConfigError("gkls::integrate: initial state must have unit trace");

  const double t0 = rates.t(0);
  const double h = rates.t(1) - rates.t(0);
  auto rhs = [&](double t, const Eigen::Vector3d& y) -> Eigen::Vector3d {
    const double gp = numerics::interp_cubic(rates.gamma_plus, t0, h, 0, k_hi, t);
    const double gm = numerics::interp_cubic(rates.gamma_minus, t0, h, 0, k_hi, t);
    const double gz = numerics::interp_cubic(rates.gamma_z, t0, h, 0, k_hi, t);
    const double gs = numerics::interp_cubic(rates.shift, t0, h, 0, k_hi, t);
    const double relax = 2.0 * gz + 0.5 * (gp + gm);
    return {gp - (gp + gm) * y(0),
            -relax * y(1) + 2.0 * gs * y(2),
            -relax * y(2) - 2.0 * gs * y(1)};
  };

  Trajectory traj;
  traj.t = rates.t.head(k_hi + 1);
  traj.rho.reserve(static_cast<size_t>(k_hi) + 1);
  Eigen::Vector3d y{rho0(0, 0).real(), rho0(0, 1).real(), rho0(0, 1).imag()};
  auto pack = [&](const Eigen::Vector3d& v) {
    Eigen::Matrix2cd rho;
    rho(0, 0) = v(0);
    rho(1, 1) = 1.0 - v(0);
    rho(0, 1) = Complex(v(1), v(2));
    rho(1, 0) = Complex(v(1), -v(2));
    return rho;
  };
  traj.rho.push_back(pack(y));
  numerics::OdeOptions stepopt = opt;
  stepopt.initial_dt = std::min(opt.initial_dt, 0.5 * h);
  for (Eigen::Index k = 1; k <= k_hi; ++k) {
    numerics::rk45_advance(rhs, y, rates.t(k - 1), rates.t(k), stepopt);
    traj.rho.push_back(pack(y));
  }
  return traj;
}

StationarityReport stationarity(const RateSeries& rates) {
  const Eigen::Index n = rates.size();
  StationarityReport rep;
  rep.p_fixed = Eigen::VectorXd::Constant(n, kNaN);
  std::vector<Eigen::Index> good;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!rates.valid[static_cast<size_t>(k)]) continue;
    const double tot = rates.gamma_plus(k) + rates.gamma_minus(k);
    if (tot == 0.0 || !std::isfinite(tot)) continue;
    rep.p_fixed(k) = rates.gamma_plus(k) / tot;
    good.push_back(k);
  }
  if (good.empty()) {
    rep.tail_median = kNaN;
    rep.tail_drift = kNaN;
    return rep;
  }
  const size_t start = (good.size() * 3) / 4;
  std::vector<double> tail;
  for (size_t i = start; i < good.size(); ++i)
    tail.push_back(rep.p_fixed(good[i]));
  rep.tail_median = median(tail);
  rep.tail_drift = 0.0;
  for (double v : tail)
    rep.tail_drift = std::max(rep.tail_drift, std::abs(v - rep.tail_median));
  return rep;
}

}  // namespace spinboson::gkls
