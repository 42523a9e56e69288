#include "spinboson/bath.hpp"

#include <cmath>
#include <limits>

#include "spinboson/numerics/quadrature.hpp"

namespace spinboson::bath {

SpectralDensity SpectralDensity::ohmic(double scale, double exponent,
                                       double omega_c, CutoffShape cutoff) {
  if (!(scale >= 0.0)) throw ConfigError("SpectralDensity: scale must be >= 0");
  if (!(exponent > 0.0)) throw ConfigError("SpectralDensity: exponent must be > 0");
  if (!(omega_c > 0.0)) throw ConfigError("SpectralDensity: omega_c must be > 0");
  SpectralDensity J;
  J.family = SpectralFamily::Ohmic;
  J.scale = scale;
  J.exponent = exponent;
  J.omega_c = omega_c;
  J.cutoff = cutoff;
  return J;
}

SpectralDensity SpectralDensity::flat_band(double j0, double omega_lo,
                                           double omega_hi) {
  if (!(j0 >= 0.0)) throw ConfigError("SpectralDensity: j0 must be >= 0");
  if (!(omega_lo >= 0.0) || !(omega_hi > omega_lo))
    throw ConfigError("SpectralDensity: need 0 <= omega_lo < omega_hi");
  SpectralDensity J;
  J.family = SpectralFamily::FlatBand;
  J.j0 = j0;
  J.omega_lo = omega_lo;
  J.omega_hi = omega_hi;
  return J;
}

SpectralDensity SpectralDensity::single_mode(double g2, double omega0) {
  if (!(g2 >= 0.0)) throw ConfigError("SpectralDensity: g2 must be >= 0");
  if (!(omega0 > 0.0)) throw ConfigError("SpectralDensity: omega0 must be > 0");
  SpectralDensity J;
  J.family = SpectralFamily::SingleMode;
  J.g2 = g2;
  J.omega0 = omega0;
  return J;
}

double SpectralDensity::operator()(double w) const {
  switch (family) {
    case SpectralFamily::Ohmic: {
      if (w <= 0.0) return 0.0;
      const double body = scale * std::pow(w, exponent);
      if (cutoff == CutoffShape::Exponential) return body * std::exp(-w / omega_c);
      return (w <= omega_c) ? body : 0.0;
    }
    case SpectralFamily::FlatBand:
      return (w >= omega_lo && w <= omega_hi) ? j0 : 0.0;
    case SpectralFamily::SingleMode:
      return 0.0;
  }
  return 0.0;
}

double SpectralDensity::support_lo() const {
  switch (family) {
    case SpectralFamily::Ohmic: return 0.0;
    case SpectralFamily::FlatBand: return omega_lo;
    case SpectralFamily::SingleMode: return omega0;
  }
  return 0.0;
}

double SpectralDensity::support_hi() const {
  switch (family) {
    case SpectralFamily::Ohmic:
      return cutoff == CutoffShape::Exponential
                 ? std::numeric_limits<double>::infinity()
                 : omega_c;
    case SpectralFamily::FlatBand: return omega_hi;
    case SpectralFamily::SingleMode: return omega0;
  }
  return 0.0;
}

double SpectralDensity::support_hi_effective() const {
  if (family == SpectralFamily::Ohmic && cutoff == CutoffShape::Exponential) {
    // e^{-45} ~ 3e-20 makes the truncated tail irrelevant at double precision.
    return (45.0 + 5.0 * exponent) * omega_c;
  }
  return support_hi();
}

double SpectralDensity::integral() const {
  switch (family) {
    case SpectralFamily::Ohmic:
      if (cutoff == CutoffShape::Exponential)
        return scale * std::tgamma(exponent + 1.0) *
               std::pow(omega_c, exponent + 1.0);
      return scale * std::pow(omega_c, exponent + 1.0) / (exponent + 1.0);
    case SpectralFamily::FlatBand: return j0 * (omega_hi - omega_lo);
    case SpectralFamily::SingleMode: return g2;
  }
  return 0.0;
}

double SpectralDensity::integral_over_omega() const {
  switch (family) {
    case SpectralFamily::Ohmic:
      if (cutoff == CutoffShape::Exponential)
        return scale * std::tgamma(exponent) * std::pow(omega_c, exponent);
      return scale * std::pow(omega_c, exponent) / exponent;
    case SpectralFamily::FlatBand:
      if (omega_lo <= 0.0) return std::numeric_limits<double>::infinity();
      return j0 * std::log(omega_hi / omega_lo);
    case SpectralFamily::SingleMode: return g2 / omega0;
  }
  return 0.0;
}

double DiscretizedBath::coupling_weight() const {
  double s = 0.0;
  for (double gk : g) s += gk * gk;
  return s;
}

void gauss_legendre_rule(int n, std::vector<double>& nodes,
                         std::vector<double>& weights) {
  if (n < 1) throw ConfigError("gauss_legendre_rule: n must be >= 1");
  nodes.assign(static_cast<size_t>(n), 0.0);
  weights.assign(static_cast<size_t>(n), 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-based initial guess for the i-th positive root of P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Legendre recurrence: (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}.
      double p0 = 1.0, p1 = x;
      for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[static_cast<size_t>(i)] = -x;
    nodes[static_cast<size_t>(n - 1 - i)] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[static_cast<size_t>(i)] = w;
    weights[static_cast<size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) nodes[static_cast<size_t>(n / 2)] = 0.0;
}

DiscretizedBath discretize(const SpectralDensity& J, int n_modes,
                           DiscretizationScheme scheme, double window_lo,
                           double window_hi) {
  if (n_modes < 1) throw ConfigError("discretize: n_modes must be >= 1");

  DiscretizedBath bath;
  bath.scheme = scheme;

  if (J.family == SpectralFamily::SingleMode) {
    if (n_modes != 1)
      throw ConfigError("discretize: single-mode density requires n_modes == 1");
    bath.omega = {J.omega0};
    bath.g = {std::sqrt(J.g2)};
    bath.window_lo = bath.window_hi = J.omega0;
    return bath;
  }

  double lo = window_lo, hi = window_hi;
  if (lo < 0.0 || hi < 0.0) {
    lo = J.support_lo();
    hi = (J.family == SpectralFamily::Ohmic &&
          J.cutoff == CutoffShape::Exponential)
             ? 10.0 * J.omega_c
             : J.support_hi();
  }
  if (!(hi > lo))
    throw ConfigError("discretize: window must satisfy window_lo < window_hi");
  bath.window_lo = lo;
  bath.window_hi = hi;

  bath.omega.resize(static_cast<size_t>(n_modes));
  bath.g.resize(static_cast<size_t>(n_modes));
  if (scheme == DiscretizationScheme::Midpoint) {
    const double dw = (hi - lo) / n_modes;
    for (int k = 0; k < n_modes; ++k) {
      const double wk = lo + (k + 0.5) * dw;
      bath.omega[static_cast<size_t>(k)] = wk;
      bath.g[static_cast<size_t>(k)] = std::sqrt(J(wk) * dw);
    }
  } else {
    std::vector<double> x, w;
    gauss_legendre_rule(n_modes, x, w);
    const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
    for (int k = 0; k < n_modes; ++k) {
      const double wk = c + r * x[static_cast<size_t>(k)];
      bath.omega[static_cast<size_t>(k)] = wk;
      bath.g[static_cast<size_t>(k)] =
          std::sqrt(J(wk) * r * w[static_cast<size_t>(k)]);
    }
  }
  return bath;
}

double thermal_occupation(double w, double beta) {
  if (std::isinf(beta)) return 0.0;
  if (!(beta > 0.0)) throw ConfigError("thermal_occupation: beta must be > 0");
  if (!(w > 0.0))
    throw ConfigError("thermal_occupation: omega must be > 0 at finite beta");
  return 1.0 / std::expm1(beta * w);
}

Complex memory_kernel(const SpectralDensity& J, double omega_q, double tau) {
  switch (J.family) {
    case SpectralFamily::Ohmic: {
      if (J.cutoff == CutoffShape::Exponential) {
        // int_0^inf w^a e^{-w/wc} e^{-iw tau} dw = Gamma(a+1) / (1/wc + i tau)^{a+1}
        const Complex pole(1.0 / J.omega_c, tau);
        const Complex denom = std::pow(pole, J.exponent + 1.0);
        return J.scale * std::tgamma(J.exponent + 1.0) *
               std::exp(kI * omega_q * tau) / denom;
      }
      auto f = [&](double w) {
        return J(w) * std::exp(-kI * (w - omega_q) * tau);
      };
      return numerics::adaptive_simpson(f, 0.0, J.omega_c, 1e-10, 1e-14);
    }
    case SpectralFamily::FlatBand: {
      const double width = J.omega_hi - J.omega_lo;
      const double mid = 0.5 * (J.omega_lo + J.omega_hi);
      const Complex carrier = std::exp(kI * (omega_q - mid) * tau);
      const double x = 0.5 * width * tau;
      // j0 * width * sinc(x), with the series for small arguments.
      double sinc;
      if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        sinc = 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
      } else {
        sinc = std::sin(x) / x;
      }
      return J.j0 * width * sinc * carrier;
    }
    case SpectralFamily::SingleMode:
      return J.g2 * std::exp(-kI * (J.omega0 - omega_q) * tau);
  }
  return Complex{};
}

Complex memory_kernel(const DiscretizedBath& bath, double omega_q, double tau) {
  Complex k{};
  for (size_t i = 0; i < bath.omega.size(); ++i) {
    k += bath.g[i] * bath.g[i] *
         std::exp(-kI * (bath.omega[i] - omega_q) * tau);
  }
  return k;
}

}  // namespace spinboson::bath
