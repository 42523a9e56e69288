// gkls.hpp — time-dependent generator in standard form equivalent to the
// exact map, and its integration.
//
//   drho/dt = -i G(t) [sigma_z, rho]
//           + Gamma_z(t) (sigma_z rho sigma_z - rho)
//           + Gamma_-(t) (sigma_- rho sigma_+ - {sigma_+ sigma_-, rho}/2)
//           + Gamma_+(t) (sigma_+ rho sigma_- - {sigma_- sigma_+, rho}/2)
//
// with rates obtained from the map coefficients:
//   F(t)       = -eta'/(2 eta) + (xi' + alpha')/(4 D)
//   Gamma_z    = Re F,  G = -Im F
//   Gamma_-    = -(alpha xi' + (1 - xi) alpha') / D
//   Gamma_+    = -(alpha' xi + (1 - alpha) xi') / D
// The rates are undefined where D or eta vanish; such grid points are masked.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "spinboson/exact.hpp"
#include "spinboson/numerics/ode.hpp"
#include "spinboson/types.hpp"

namespace spinboson::gkls {

struct RateSeries {
  Eigen::VectorXd t;
  Eigen::VectorXd gamma_plus;   // absorption
  Eigen::VectorXd gamma_minus;  // emission
  Eigen::VectorXd gamma_z;      // pure dephasing
  Eigen::VectorXd shift;        // Hamiltonian coefficient G(t)
  std::vector<std::uint8_t> valid;  // 1 where |D| > d_min and |eta| > eta_min
  double d_min{1e-6};
  double eta_min{1e-12};

  Eigen::Index size() const { return t.size(); }
  // Length of the contiguous valid run starting at t = 0.
  Eigen::Index valid_prefix() const;
};

// Derivatives are taken with fourth-order finite differences on the uniform
// grid; masked entries are NaN.
RateSeries rates_from_map(const exact::MapCoefficients& mc, double d_min = 1e-6,
                          double eta_min = 1e-12);

struct Trajectory {
  Eigen::VectorXd t;
  std::vector<Eigen::Matrix2cd> rho;
};

// Integrates the generator from grid index 0 through k_hi (inclusive),
// recording the state at every grid point. The rates are interpolated with
// local cubics; every grid point up to k_hi must be valid.
Trajectory integrate(const RateSeries& rates, const Eigen::Matrix2cd& rho0,
                     Eigen::Index k_hi, const numerics::OdeOptions& opt = {});

// Instantaneous fixed point p*(t) = Gamma_+ / (Gamma_+ + Gamma_-) and its
// behavior over the last quartile of the valid window.
struct StationarityReport {
  Eigen::VectorXd p_fixed;  // NaN where masked
  double tail_median{0.0};
  double tail_drift{0.0};  // max |p_fixed - median| over the tail window
};

StationarityReport stationarity(const RateSeries& rates);

}  // namespace spinboson::gkls
