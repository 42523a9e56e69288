// thermo.hpp — equilibration diagnostics for a thermal reservoir.
//
// With n = n(Omega, beta) the Bose occupation at the qubit frequency, the
// weak-coupling limit predicts
//   (1 - alpha)/alpha -> n/(n+1) = e^{-beta Omega}
//   (1 - xi)/xi       -> (n+1)/n = e^{+beta Omega}
//   D(t) ~ exp(-((2n+1)/n) int_0^t Gamma_+)
//   1/cbar(t) = (1/(2n+1)) [1 - D_pred(t)]
// and the populations relax to p_+ = e^{-beta Omega/2} / (2 cosh(beta Omega/2)).
#pragma once

#include <Eigen/Dense>

#include "spinboson/exact.hpp"
#include "spinboson/gkls.hpp"
#include "spinboson/types.hpp"

namespace spinboson::thermo {

// Gibbs excited-state population of the bare qubit.
double asymptotic_excited_population(double beta, double omega);

struct EquilibrationSeries {
  Eigen::VectorXd t;
  Eigen::VectorXd ratio_alpha;  // (1 - alpha)/alpha
  Eigen::VectorXd ratio_xi;     // (1 - xi)/xi
  Eigen::VectorXd int_gamma_plus;  // int_0^t Gamma_+ (NaN past the valid prefix)
  Eigen::VectorXd d_pred;          // exp(-((2n+1)/n) int Gamma_+)
  Eigen::VectorXd inv_cbar;        // (1/(2n+1)) (1 - d_pred)
  double n_occ{0.0};               // n(Omega, beta)
};

EquilibrationSeries equilibration_series(const exact::MapCoefficients& mc,
                                         const gkls::RateSeries& rates,
                                         const ModelParams& params);

// Tail medians of the occupation-ratio series against their closed-form
// limits, over the last quartile of the grid.
struct RatioTails {
  double ratio_alpha_median{0.0};
  double ratio_xi_median{0.0};
  double target_alpha{0.0};  // n/(n+1)
  double target_xi{0.0};     // (n+1)/n
};

RatioTails detailed_balance_ratios(const EquilibrationSeries& es);

// Coupling-rescaled comparison of two excited-state survival curves
// p_+(t) = xi(t): curves from runs (a, lambda_a) and (b, lambda_b) are
// sampled on the common tau = lambda^2 t axis.
struct CollapseReport {
  double sup_diff{0.0};
  double range{0.0};     // spread of curve a over the common window
  double relative{0.0};  // sup_diff / range
  double tau_max{0.0};
};

CollapseReport van_hove_collapse(const exact::MapCoefficients& a, double lambda_a,
                                 const exact::MapCoefficients& b, double lambda_b,
                                 int n_samples = 512);

}  // namespace spinboson::thermo
