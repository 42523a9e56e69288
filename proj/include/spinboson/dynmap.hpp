// dynmap.hpp — the reduced qubit dynamical map built from exact coefficients.
//
// Qubit basis order is {excited, ground}: rho(0,0) = p_+. One time point of
// the map acts as
//   p_+(t) = xi p_+(0) + gamma p_-(0)
//   p_-(t) = zeta p_+(0) + alpha p_-(0)
//   rho_+-(t) = conj(eta) rho_+-(0)
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spinboson/exact.hpp"
#include "spinboson/types.hpp"

namespace spinboson::dynmap {

struct MapPoint {
  double alpha{1.0};
  double xi{1.0};
  double gamma{0.0};
  double zeta{0.0};
  Complex eta{1.0, 0.0};
  double D{1.0};  // alpha + xi - 1
};

MapPoint at(const exact::MapCoefficients& mc, Eigen::Index k);

Eigen::Matrix2cd apply_map(const MapPoint& m, const Eigen::Matrix2cd& rho0);

Eigen::Vector2d populations(const MapPoint& m, const Eigen::Vector2d& p0);

// Kraus operators of the map point:
//   K1 = sqrt(gamma) sigma_+,
//   K2 = sqrt(zeta) sigma_-,
//   K3 = sqrt(xi) (sigma_+ sigma_- + (eta / xi) sigma_- sigma_+),
//   K4 = sqrt(alpha) sqrt(1 - |eta|^2 / (alpha xi)) sigma_- sigma_+.
// Requires xi > 0 and the Schwarz bound |eta|^2 <= alpha xi.
struct KrausSet {
  std::vector<Eigen::Matrix2cd> ops;
  // sum_i K_i^dag K_i; equals the identity when alpha + gamma = xi + zeta = 1.
  Eigen::Matrix2cd completeness() const;
  Eigen::Matrix2cd apply(const Eigen::Matrix2cd& rho) const;
};

KrausSet kraus(const MapPoint& m, double schwarz_tol = 1e-12);

// Half the trace norm of rho - sigma.
double trace_distance(const Eigen::Matrix2cd& rho, const Eigen::Matrix2cd& sigma);

// Unit trace, hermitian and positive semidefinite within tol.
bool is_physical(const Eigen::Matrix2cd& rho, double tol = 1e-9);

}  // namespace spinboson::dynmap
