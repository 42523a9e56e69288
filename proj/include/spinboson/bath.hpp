// bath.hpp — reservoir spectral densities, thermal occupation, bath
// discretization, and the memory kernel K(tau) = int dw J(w) e^{-i(w-Omega)tau}.
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "spinboson/types.hpp"

namespace spinboson::bath {

enum class SpectralFamily { Ohmic, FlatBand, SingleMode };
enum class CutoffShape { Exponential, Hard };

// Supported families:
//   Ohmic-like   J(w) = scale * w^a * cutoff(w / omega_c)      on w > 0
//   flat band    J(w) = j0                                     on [omega_lo, omega_hi]
//   single mode  J(w) = g2 * delta(w - omega0)
// The overall coupling lambda from ModelParams is *not* folded into J; it
// multiplies the couplings wherever the bath enters the dynamics.
struct SpectralDensity {
  SpectralFamily family{SpectralFamily::Ohmic};

  double scale{1.0};      // Ohmic prefactor
  double exponent{1.0};   // Ohmic power a > 0
  double omega_c{1.0};    // Ohmic cutoff frequency
  CutoffShape cutoff{CutoffShape::Exponential};

  double j0{0.0};         // flat band height
  double omega_lo{0.0};   // flat band edges
  double omega_hi{0.0};

  double g2{0.0};         // single mode weight (squared coupling)
  double omega0{0.0};     // single mode frequency

  static SpectralDensity ohmic(double scale, double exponent, double omega_c,
                               CutoffShape cutoff = CutoffShape::Exponential);
  static SpectralDensity flat_band(double j0, double omega_lo, double omega_hi);
  static SpectralDensity single_mode(double g2, double omega0);

  bool has_continuum() const { return family != SpectralFamily::SingleMode; }

  // Continuum density value; identically zero for the single-mode family
  // (its weight lives in the discrete part).
  double operator()(double w) const;

  double support_lo() const;
  double support_hi() const;  // infinity for the exponential cutoff
  // Finite frequency beyond which the density is numerically negligible.
  double support_hi_effective() const;

  double integral() const;             // int J dw
  double integral_over_omega() const;  // int J/w dw, may be infinite
};

enum class DiscretizationScheme { Midpoint, GaussLegendre };

struct DiscretizedBath {
  std::vector<double> omega;  // mode frequencies
  std::vector<double> g;      // couplings, g_k^2 ~ J(w_k) * quadrature weight
  DiscretizationScheme scheme{DiscretizationScheme::Midpoint};
  double window_lo{0.0};
  double window_hi{0.0};

  int n_modes() const { return static_cast<int>(omega.size()); }
  double coupling_weight() const;  // sum_k g_k^2, approximates int J dw
};

// Represent the continuum by n_modes discrete modes over the given window
// (defaults to the density's support, with 10 omega_c standing in for an
// infinite exponential tail). Midpoint: equal bins, w_k at bin centers,
// g_k = sqrt(J(w_k) dw). Gauss-Legendre: nodes/weights of the n-point rule.
// Single-mode densities require n_modes == 1 and reproduce the mode exactly.
DiscretizedBath discretize(const SpectralDensity& J, int n_modes,
                           DiscretizationScheme scheme,
                           double window_lo = -1.0, double window_hi = -1.0);

// Bose-Einstein occupation n(w) = 1 / (e^{beta w} - 1); zero in the vacuum.
double thermal_occupation(double w, double beta);

// Memory kernel of the continuum density, K(tau) = int dw J(w) e^{-i(w-Omega)tau}.
// Closed forms for the exponential-cutoff Ohmic family, flat bands and single
// modes; adaptive quadrature otherwise.
Complex memory_kernel(const SpectralDensity& J, double omega_q, double tau);

// Discrete-bath kernel K(tau) = sum_k g_k^2 e^{-i(w_k-Omega)tau}.
Complex memory_kernel(const DiscretizedBath& bath, double omega_q, double tau);

// n-point Gauss-Legendre nodes and weights on [-1, 1] for arbitrary n
// (Newton iteration on the Legendre recurrence).
void gauss_legendre_rule(int n, std::vector<double>& nodes,
                         std::vector<double>& weights);

}  // namespace spinboson::bath
