// friedrichs.hpp — single-excitation (vacuum reservoir) analytics: the
// survival amplitude of the excited state, bound-state pole and weight,
// power-law tails, and the sum rule linking cut and pole contributions.
//
// In the interaction picture the survival amplitude obeys
//   du/dt = - int_0^t K(t - t') u(t') dt',  u(0) = 1,
// with memory kernel K(tau) = lambda^2 int dw J(w) e^{-i(w - Omega) tau}.
#pragma once

#include <Eigen/Dense>

#include "spinboson/bath.hpp"
#include "spinboson/types.hpp"

namespace spinboson::friedrichs {

struct SurvivalOptions {
  double dt{2e-3};
  int store_stride{1};    // keep every k-th sample
  bool track_norm{true};  // integrate the one-flip amplitudes for the sum rule
  int n_threads{1};
};

struct SurvivalResult {
  Eigen::VectorXd t;
  Eigen::VectorXcd u;
  // |u|^2 + sum_k |c_k|^2 - 1 at the stored samples (empty when untracked).
  Eigen::VectorXd norm_residual;
};

// Second-order product integration (implicit trapezoid) of the memory
// equation; the one-flip amplitudes use a derivative-corrected trapezoid
// cumulative sum, continuum baths being represented by Gauss-Legendre nodes.
SurvivalResult solve_survival(const bath::SpectralDensity& J,
                              const ModelParams& params, double t_max,
                              const SurvivalOptions& opt = {});

SurvivalResult solve_survival(const bath::DiscretizedBath& bath,
                              const ModelParams& params, double t_max,
                              const SurvivalOptions& opt = {});

// Real pole of the resolvent below the continuum: the root s > Omega of
//   s = lambda^2 int dw J(w) / (s + w - Omega),
// which exists iff lambda^2 int J/w dw > Omega. Its weight is
//   Z = [1 + lambda^2 int dw J(w) / (s + w - Omega)^2]^{-1},
// the long-time plateau of |u| being Z.
struct BoundState {
  bool exists{false};
  double s_pole{0.0};
  double weight{0.0};
  double residual{0.0};  // |s - lambda^2 int J/(s + w - Omega)| at the root
};

BoundState bound_state(const bath::SpectralDensity& J, const ModelParams& params);

// Sum rule: the continuum (cut) contribution
//   C = int dw lambda^2 J / (R^2 + pi^2 lambda^4 J^2),
//   R(w) = (w - Omega) - lambda^2 P int J(w')/(w - w') dw',
// plus the pole weight Z equals 1 for densities supported on [0, inf) with
// at most the single pole above. Principal values use symmetric pairing.
struct CutPole {
  double cut_integral{0.0};
  double pole_weight{0.0};
  double total{0.0};
  double residual{0.0};  // |total - 1|
};

CutPole cut_pole_identity(const bath::SpectralDensity& J, const ModelParams& params);

// Least-squares fit of log|u| = c + p log t over [t_lo, t_hi]; for an Ohmic
// density J ~ scale * w^a near w = 0 (no bound state) the prediction is
//   p = -(1 + a),  |u| ~ lambda^2 scale Gamma(1+a) / (Omega - lambda^2 int J/w)^2 / t^{1+a}.
struct TailFit {
  double exponent{0.0};
  double log_prefactor{0.0};
  double r2{0.0};
  int points{0};
  double predicted_exponent{0.0};
  double predicted_prefactor{0.0};  // NaN when no closed-form prediction applies
};

TailFit tail_fit(const SurvivalResult& s, double t_lo, double t_hi,
                 const bath::SpectralDensity& J, const ModelParams& params);

}  // namespace spinboson::friedrichs
