#include "spinboson/dynmap.hpp"

#include <cmath>

namespace spinboson::dynmap {

MapPoint at(const exact::MapCoefficients& mc, Eigen::Index k) {
  if (k < 0 || k >= mc.size())
    throw ConfigError("dynmap::at: time index out of range");
  MapPoint m;
  m.alpha = mc.alpha(k);
  m.xi = mc.xi(k);
  m.gamma = mc.gamma(k);
  m.zeta = mc.zeta(k);
  m.eta = mc.eta(k);
  m.D = mc.D(k);
  return m;
}

Eigen::Matrix2cd apply_map(const MapPoint& m, const Eigen::Matrix2cd& rho0) {
  Eigen::Matrix2cd rho;
  rho(0, 0) = m.xi * rho0(0, 0) + m.gamma * rho0(1, 1);
  rho(1, 1) = m.zeta * rho0(0, 0) + m.alpha * rho0(1, 1);
  rho(0, 1) = std::conj(m.eta) * rho0(0, 1);
  rho(1, 0) = m.eta * rho0(1, 0);
  return rho;
}

Eigen::Vector2d populations(const MapPoint& m, const Eigen::Vector2d& p0) {
  return {m.xi * p0(0) + m.gamma * p0(1), m.zeta * p0(0) + m.alpha * p0(1)};
}

Eigen::Matrix2cd KrausSet::completeness() const {
  Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
  for (const auto& k : ops) s += k.adjoint() * k;
  return s;
}

Eigen::Matrix2cd KrausSet::apply(const Eigen::Matrix2cd& rho) const {
  Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
  for (const auto& k : ops) s += k * rho * k.adjoint();
  return s;
}

KrausSet kraus(const MapPoint& m, double schwarz_tol) {
  if (!(m.xi > 0.0)) throw SolverError("kraus: requires xi > 0");
  const double schwarz = m.alpha * m.xi - std::norm(m.eta);
  if (schwarz < -schwarz_tol * std::max(1.0, m.alpha * m.xi))
    throw SolverError("kraus: Schwarz bound |eta|^2 <= alpha xi violated");
  if (m.gamma < -schwarz_tol || m.zeta < -schwarz_tol)
    throw SolverError("kraus: negative transition probability");

  KrausSet set;
  Eigen::Matrix2cd k = Eigen::Matrix2cd::Zero();
  k(0, 1) = std::sqrt(std::max(m.gamma, 0.0));  // sigma_+
  set.ops.push_back(k);
  k.setZero();
  k(1, 0) = std::sqrt(std::max(m.zeta, 0.0));  // sigma_-
  set.ops.push_back(k);
  k.setZero();
  k(0, 0) = std::sqrt(m.xi);
  k(1, 1) = m.eta / std::sqrt(m.xi);
  set.ops.push_back(k);
  k.setZero();
  k(1, 1) = std::sqrt(std::max(m.alpha - std::norm(m.eta) / m.xi, 0.0));
  set.ops.push_back(k);
  return set;
}

double trace_distance(const Eigen::Matrix2cd& rho, const Eigen::Matrix2cd& sigma) {
  const Eigen::Matrix2cd d = rho - sigma;
  const double x = d(0, 0).real(), y = d(1, 1).real();
  const double mean = 0.5 * (x + y);
  const double disc = std::sqrt(0.25 * (x - y) * (x - y) + std::norm(d(0, 1)));
  return 0.5 * (std::abs(mean + disc) + std::abs(mean - disc));
}

bool is_physical(const Eigen::Matrix2cd& rho, double tol) {
  if (std::abs(rho(0, 0).imag()) > tol || std::abs(rho(1, 1).imag()) > tol)
    return false;
  if (std::abs(rho(0, 0).real() + rho(1, 1).real() - 1.0) > tol) return false;
  if (std::abs(rho(0, 1) - std::conj(rho(1, 0))) > tol) return false;
  const double p = rho(0, 0).real(), q = rho(1, 1).real();
  const double mean = 0.5 * (p + q);
  const double disc = std::sqrt(0.25 * (p - q) * (p - q) + std::norm(rho(0, 1)));
  return mean - disc >= -tol;
}

}  // namespace spinboson::dynmap
