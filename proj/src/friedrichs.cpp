#include "spinboson/friedrichs.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "spinboson/numerics/parallel.hpp"
#include "spinboson/numerics/quadrature.hpp"

namespace spinboson::friedrichs {

namespace {

struct FlipNode {
  double wbar;    // mode detuning w - Omega
  double weight;  // multiplies |I|^2 in the norm sum
};

// Shared product-integration core. The kernel sampler already carries the
// lambda^2 coupling factor.
SurvivalResult volterra(const std::function<Complex(double)>& kernel,
                        const std::vector<FlipNode>& nodes, double t_max,
                        const SurvivalOptions& opt) {
  if (!(t_max > 0.0)) throw ConfigError("solve_survival: t_max must be > 0");
  if (!(opt.dt > 0.0)) throw ConfigError("solve_survival: dt must be > 0");
  const int stride = std::max(1, opt.store_stride);
  long steps = std::lround(std::ceil(t_max / opt.dt));
  steps = ((steps + stride - 1) / stride) * stride;
  if (steps < 2 * stride) steps = 2 * stride;
  if (steps > 4'000'000) throw ConfigError("solve_survival: too many steps");
  const double h = t_max / static_cast<double>(steps);

  // Kernel samples K_j = K(j h), evaluated in fixed-size chunks.
  Eigen::VectorXcd kern(steps + 1);
  {
    constexpr long chunk = 512;
    const int n_chunks = static_cast<int>((steps + chunk) / chunk);
    numerics::parallel_for(n_chunks, opt.n_threads, [&](int c) {
      const long j0 = static_cast<long>(c) * chunk;
      const long j1 = std::min(j0 + chunk, steps + 1);
      for (long j = j0; j < j1; ++j) kern(j) = kernel(h * static_cast<double>(j));
    });
  }

  // Implicit trapezoid step of du/dt = -int_0^t K(t-t') u(t'):
  //   u_m (1 + h^2 K_0 / 4) = u_{m-1} + (h/2) u'_{m-1} - (h/2) conv_m,
  //   conv_m = h (K_m u_0 / 2 + sum_{j=1}^{m-1} K_{m-j} u_j),
  //   u'_m = -conv_m - (h/2) K_0 u_m.
  Eigen::VectorXcd u(steps + 1), up(steps + 1);
  // urev[steps - j] = u_j keeps the convolution a contiguous dot product.
  Eigen::VectorXcd urev = Eigen::VectorXcd::Zero(steps + 1);
  u(0) = 1.0;
  up(0) = 0.0;
  urev(steps) = 1.0;
  const Complex denom = 1.0 + 0.25 * h * h * kern(0);
  for (long m = 1; m <= steps; ++m) {
    Complex conv = 0.5 * kern(m);  // j = 0 term, u_0 = 1
    if (m > 1)
      conv += (kern.segment(1, m - 1).array() *
               urev.segment(steps - m + 1, m - 1).array())
                  .sum();
    conv *= h;
    const Complex um =
        (u(m - 1) + 0.5 * h * up(m - 1) - 0.5 * h * conv) / denom;
    u(m) = um;
    up(m) = -conv - 0.5 * h * kern(0) * um;
    urev(steps - m) = um;
  }

  SurvivalResult res;
  const long n_store = steps / stride + 1;
  res.t.resize(n_store);
  res.u.resize(n_store);
  for (long i = 0; i < n_store; ++i) {
    res.t(i) = h * static_cast<double>(i * stride);
    res.u(i) = u(i * stride);
  }

  if (!opt.track_norm || nodes.empty()) return res;

  // One-flip amplitudes I_k(t) = int_0^t e^{i wbar t'} u(t') dt' by
  // derivative-corrected trapezoid: I += h (f_0 + f_1)/2 - h^2 (f_1' - f_0')/12.
  const int n_nodes = static_cast<int>(nodes.size());
  constexpr int node_chunk = 64;
  const int n_tasks = (n_nodes + node_chunk - 1) / node_chunk;
  std::vector<Eigen::VectorXd> partial(static_cast<size_t>(n_tasks));
  numerics::parallel_for(n_tasks, opt.n_threads, [&](int task) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(n_store);
    const int k0 = task * node_chunk;
    const int k1 = std::min(k0 + node_chunk, n_nodes);
    for (int k = k0; k < k1; ++k) {
      const double wbar = nodes[static_cast<size_t>(k)].wbar;
      const double wgt = nodes[static_cast<size_t>(k)].weight;
      const Complex rot_step = std::exp(Complex(0.0, wbar * h));
      Complex rot = 1.0;
      Complex I = 0.0;
      Complex f_prev = u(0);  // e^{i wbar 0} u_0
      Complex fp_prev = up(0) + Complex(0.0, wbar) * u(0);
      for (long m = 1; m <= steps; ++m) {
        rot = (m % 1024 == 0) ? std::exp(Complex(0.0, wbar * h * static_cast<double>(m)))
                              : rot * rot_step;
        const Complex f = rot * u(m);
        const Complex fp = rot * (up(m) + Complex(0.0, wbar) * u(m));
        I += 0.5 * h * (f_prev + f) - h * h / 12.0 * (fp - fp_prev);
        f_prev = f;
        fp_prev = fp;
        if (m % stride == 0) acc(m / stride) += wgt * std::norm(I);
      }
    }
    partial[static_cast<size_t>(task)] = std::move(acc);
  });

  res.norm_residual.resize(n_store);
  for (long i = 0; i < n_store; ++i) {
    double s = std::norm(res.u(i)) - 1.0;
    for (const auto& acc : partial) s += acc(i);
    res.norm_residual(i) = s;
  }
  return res;
}

double effective_band_top(const bath::SpectralDensity& J) {
  return J.support_hi_effective();
}

std::vector<FlipNode> continuum_nodes(const bath::SpectralDensity& J,
                                      const ModelParams& p, double t_max) {
  const double lo = J.support_lo();
  const double hi = effective_band_top(J);
  int panels = static_cast<int>(std::ceil((hi - lo) * t_max / (2.0 * M_PI) / 3.0));
  panels = std::clamp(panels, 8, 4000);
  const auto q = numerics::gauss_legendre_panels(lo, hi, panels);
  std::vector<FlipNode> nodes(q.x.size());
  const double l2 = p.lambda * p.lambda;
  for (size_t i = 0; i < q.x.size(); ++i)
    nodes[i] = {q.x[i] - p.omega, l2 * q.w[i] * J(q.x[i])};
  return nodes;
}

// P int J(w')/(w - w') dw' over the support, without the coupling factor.
double pv_shift(const bath::SpectralDensity& J, double w) {
  switch (J.family) {
    case bath::SpectralFamily::FlatBand:
      return J.j0 * std::log((w - J.omega_lo) / (J.omega_hi - w));
    case bath::SpectralFamily::Ohmic:
      if (J.cutoff == bath::CutoffShape::Exponential && J.exponent == 1.0) {
        // P int w' e^{-w'/wc} / (w - w') dw' = wc (x e^{-x} Ei(x) - 1), x = w/wc
        const double x = w / J.omega_c;
        return J.scale * J.omega_c * J.omega_c *
               (x * std::exp(-x) * std::expint(x) - 1.0);
      }
      return numerics::principal_value([&](double wp) { return J(wp); },
                                       J.support_lo(), effective_band_top(J), w,
                                       1e-8);
    case bath::SpectralFamily::SingleMode:
      break;
  }
  throw ConfigError("pv_shift: no continuum density");
}

// lambda^2 int J(w) / (s + w - Omega)^m dw for s > Omega, m = 1 or 2.
double level_shift_integral(const bath::SpectralDensity& J, const ModelParams& p,
                            double s, int m) {
  const double l2 = p.lambda * p.lambda;
  const double off = s - p.omega;
  switch (J.family) {
    case bath::SpectralFamily::FlatBand: {
      const double a = off + J.omega_lo, b = off + J.omega_hi;
      if (m == 1) return l2 * J.j0 * std::log(b / a);
      return l2 * J.j0 * (1.0 / a - 1.0 / b);
    }
    case bath::SpectralFamily::SingleMode: {
      const double d = off + J.omega0;
      return m == 1 ? l2 * J.g2 / d : l2 * J.g2 / (d * d);
    }
    case bath::SpectralFamily::Ohmic: {
      auto f = [&](double w) {
        const double d = off + w;
        return J(w) / (m == 1 ? d : d * d);
      };
      return l2 * numerics::adaptive_simpson(f, 0.0, effective_band_top(J), 1e-12, 1e-15);
    }
  }
  return 0.0;
}

}  // namespace

SurvivalResult solve_survival(const bath::SpectralDensity& J,
                              const ModelParams& params, double t_max,
                              const SurvivalOptions& opt) {
  validate_model(params);
  if (J.family == bath::SpectralFamily::SingleMode) {
    const auto b = bath::discretize(J, 1, bath::DiscretizationScheme::Midpoint);
    return solve_survival(b, params, t_max, opt);
  }
  const double l2 = params.lambda * params.lambda;
  auto kernel = [&, l2](double tau) {
    return l2 * bath::memory_kernel(J, params.omega, tau);
  };
  std::vector<FlipNode> nodes;
  if (opt.track_norm) nodes = continuum_nodes(J, params, t_max);
  return volterra(kernel, nodes, t_max, opt);
}

SurvivalResult solve_survival(const bath::DiscretizedBath& bath_in,
                              const ModelParams& params, double t_max,
                              const SurvivalOptions& opt) {
  validate_model(params);
  const double l2 = params.lambda * params.lambda;
  auto kernel = [&, l2](double tau) {
    return l2 * bath::memory_kernel(bath_in, params.omega, tau);
  };
  std::vector<FlipNode> nodes;
  if (opt.track_norm) {
    nodes.resize(bath_in.omega.size());
    for (size_t k = 0; k < bath_in.omega.size(); ++k)
      nodes[k] = {bath_in.omega[k] - params.omega,
                  l2 * bath_in.g[k] * bath_in.g[k]};
  }
  return volterra(kernel, nodes, t_max, opt);
}

BoundState bound_state(const bath::SpectralDensity& J, const ModelParams& params) {
  validate_model(params);
  BoundState bs;
  const double l2 = params.lambda * params.lambda;
  const double condition = l2 * J.integral_over_omega();
  if (!(condition > params.omega)) return bs;

  auto h = [&](double s) { return s - level_shift_integral(J, params, s, 1); };
  double s_lo = params.omega * (1.0 + 1e-13) + 1e-300;
  if (!(h(s_lo) < 0.0)) return bs;  // marginally bound, weight negligible
  double s_hi =
      std::max(2.0 * params.omega, params.omega + l2 * J.integral() / params.omega);
  for (int i = 0; i < 200 && h(s_hi) <= 0.0; ++i) s_hi *= 2.0;
  if (h(s_hi) <= 0.0)
    throw SolverError("bound_state: failed to bracket the pole");
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (s_lo + s_hi);
    if (mid == s_lo || mid == s_hi) break;
    (h(mid) < 0.0 ? s_lo : s_hi) = mid;
  }
  bs.exists = true;
  bs.s_pole = 0.5 * (s_lo + s_hi);
  bs.residual = std::abs(h(bs.s_pole));
  bs.weight = 1.0 / (1.0 + level_shift_integral(J, params, bs.s_pole, 2));
  return bs;
}

CutPole cut_pole_identity(const bath::SpectralDensity& J, const ModelParams& params) {
  validate_model(params);
  if (!J.has_continuum())
    throw ConfigError("cut_pole_identity: requires a continuum density");
  const double l2 = params.lambda * params.lambda;
  const double lo = J.support_lo();
  const double hi = effective_band_top(J);

  // R(w) = (w - Omega) - lambda^2 P int J(w')/(w - w') dw'
  auto dispersion = [&](double w) -> double {
    return (w - params.omega) - l2 * pv_shift(J, w);
  };

  const double eps = 1e-9 * (hi - lo);
  auto integrand = [&](double w) -> double {
    if (w <= lo + eps || w >= hi - eps) return 0.0;
    const double jw = l2 * J(w);
    if (jw <= 0.0) return 0.0;
    const double r = dispersion(w);
    return jw / (r * r + M_PI * M_PI * jw * jw);
  };

  const bool closed_shift =
      J.family == bath::SpectralFamily::FlatBand ||
      (J.cutoff == bath::CutoffShape::Exponential && J.exponent == 1.0);
  CutPole cp;
  cp.cut_integral = numerics::adaptive_simpson(integrand, lo + eps, hi - eps,
                                               closed_shift ? 1e-7 : 1e-5, 1e-12);
  const BoundState bs = bound_state(J, params);
  cp.pole_weight = bs.exists ? bs.weight : 0.0;
  cp.total = cp.cut_integral + cp.pole_weight;
  cp.residual = std::abs(cp.total - 1.0);
  return cp;
}

TailFit tail_fit(const SurvivalResult& s, double t_lo, double t_hi,
                 const bath::SpectralDensity& J, const ModelParams& params) {
  if (!(t_hi > t_lo) || !(t_lo > 0.0))
    throw ConfigError("tail_fit: need 0 < t_lo < t_hi");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  int n = 0;
  for (Eigen::Index i = 0; i < s.t.size(); ++i) {
    const double t = s.t(i), a = std::abs(s.u(i));
    if (t < t_lo || t > t_hi || a <= 0.0) continue;
    const double x = std::log(t), y = std::log(a);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    ++n;
  }
  TailFit fit;
  fit.points = n;
  if (n < 8) throw SolverError("tail_fit: too few samples in the fit window");
  const double det = n * sxx - sx * sx;
  fit.exponent = (n * sxy - sx * sy) / det;
  fit.log_prefactor = (sy - fit.exponent * sx) / n;
  const double ss_res = syy - sy * sy / n -
                        fit.exponent * (sxy - sx * sy / n);
  const double ss_tot = syy - sy * sy / n;
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;

  fit.predicted_exponent = std::numeric_limits<double>::quiet_NaN();
  fit.predicted_prefactor = std::numeric_limits<double>::quiet_NaN();
  if (J.family == bath::SpectralFamily::Ohmic) {
    const double l2 = params.lambda * params.lambda;
    const double denom = params.omega - l2 * J.integral_over_omega();
    fit.predicted_exponent = -(1.0 + J.exponent);
    if (denom > 0.0)
      fit.predicted_prefactor = l2 * J.scale * std::tgamma(1.0 + J.exponent) /
                                (denom * denom);
  }
  return fit;
}

}  // namespace spinboson::friedrichs
