// quadrature.hpp — adaptive Simpson integration, Gauss-Legendre panels,
// and principal-value integrals by symmetric pairing.
#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "spinboson/types.hpp"

namespace spinboson::numerics {

namespace detail {

template <class T>
inline double mag(const T& x) { return std::abs(x); }

// One level of Simpson refinement with Richardson acceptance: the halved
// estimate S2 is accepted when |S2 - S1|/15 meets the tolerance, and the
// extrapolated value S2 + (S2 - S1)/15 is returned.
template <class F, class T>
T simpson_step(F& f, double a, double m, double b, T fa, T fm, T fb, T whole,
               double tol, int depth, double& err_out) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const T flm = f(lm), frm = f(rm);
  const T left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const T right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const T s2 = left + right;
  const double err = mag(s2 - whole) / 15.0;
  if (depth <= 0 || err <= tol) {
    err_out += err;
    return s2 + (s2 - whole) / 15.0;
  }
  double e1 = 0.0, e2 = 0.0;
  const T vl = simpson_step(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1, e1);
  const T vr = simpson_step(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1, e2);
  err_out += e1 + e2;
  return vl + vr;
}

}  // namespace detail

// Adaptive Simpson on [a, b]. Tolerance is applied as
// abs_tol + rel_tol * |result| distributed over subintervals.
template <class F>
auto adaptive_simpson(F&& f, double a, double b, double rel_tol = 1e-10,
                      double abs_tol = 0.0, int max_depth = 48)
    -> decltype(f(a)) {
  using T = decltype(f(a));
  if (a == b) return T{};
  const double m = 0.5 * (a + b);
  const T fa = f(a), fm = f(m), fb = f(b);
  const T whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  // First pass with a scale guess from the coarse estimate, second pass if the
  // result came out much smaller than the guess.
  double scale = std::max(detail::mag(whole), abs_tol);
  if (scale == 0.0) scale = 1.0;
  double err = 0.0;
  T val = detail::simpson_step(f, a, m, b, fa, fm, fb, whole,
                               rel_tol * scale + abs_tol, max_depth, err);
  const double have = std::max(detail::mag(val), abs_tol);
  if (have > 0.0 && have < 0.01 * scale) {
    err = 0.0;
    val = detail::simpson_step(f, a, m, b, fa, fm, fb, whole,
                               rel_tol * have + abs_tol, max_depth, err);
  }
  return val;
}

// 16-point Gauss-Legendre nodes/weights on [-1, 1] (positive half; the rule
// is symmetric).
inline constexpr int kGaussLegendreOrder = 16;
inline constexpr double kGlNodes[8] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
inline constexpr double kGlWeights[8] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

struct QuadratureNodes {
  std::vector<double> x;
  std::vector<double> w;
};

// Composite 16-point Gauss-Legendre rule over n_panels equal panels of [a, b].
inline QuadratureNodes gauss_legendre_panels(double a, double b, int n_panels) {
  QuadratureNodes q;
  q.x.reserve(static_cast<size_t>(n_panels) * kGaussLegendreOrder);
  q.w.reserve(static_cast<size_t>(n_panels) * kGaussLegendreOrder);
  const double h = (b - a) / n_panels;
  for (int p = 0; p < n_panels; ++p) {
    const double c = a + (p + 0.5) * h, r = 0.5 * h;
    for (int i = 7; i >= 0; --i) {
      q.x.push_back(c - r * kGlNodes[i]);
      q.w.push_back(r * kGlWeights[i]);
    }
    for (int i = 0; i < 8; ++i) {
      q.x.push_back(c + r * kGlNodes[i]);
      q.w.push_back(r * kGlWeights[i]);
    }
  }
  return q;
}

// Principal value integral P int_lo^hi f(w') / (w - w') dw' for lo < w < hi.
// The singular strip [w-r, w+r] is handled by pairing points symmetric about
// w, where the difference quotient (f(w-u) - f(w+u))/u is regular (it tends
// to -2 f'(w) as u -> 0); the remainder is an ordinary integral.
template <class F>
double principal_value(F&& f, double lo, double hi, double w,
                       double rel_tol = 1e-10) {
  const double r = std::min(w - lo, hi - w);
  if (!(r > 0.0))
    throw SolverError("principal_value: singularity must lie strictly inside the interval");
  const double u0 = 1e-7 * r;
  auto paired = [&](double u) {
    const double uu = std::max(u, u0);
    return (f(w - uu) - f(w + uu)) / uu;
  };
  double val = adaptive_simpson(paired, 0.0, r, rel_tol, 1e-14);
  auto plain = [&](double wp) { return f(wp) / (w - wp); };
  if (w - lo < hi - w) {
    val += adaptive_simpson(plain, w + r, hi, rel_tol, 1e-14);
  } else if (hi - w < w - lo) {
    val += adaptive_simpson(plain, lo, w - r, rel_tol, 1e-14);
  }
  return val;
}

}  // namespace spinboson::numerics
