// grid.hpp — uniform time grids, fourth-order finite differences,
// cumulative trapezoid sums, and local cubic interpolation.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "spinboson/types.hpp"

namespace spinboson::numerics {

// steps + 1 equally spaced points covering [0, t_max].
inline Eigen::VectorXd uniform_grid(double t_max, int steps) {
  if (!(t_max > 0.0) || steps < 1)
    throw ConfigError("uniform_grid: need t_max > 0 and steps >= 1");
  return Eigen::VectorXd::LinSpaced(steps + 1, 0.0, t_max);
}

// Fourth-order accurate first derivative on a uniform grid: the centered
// five-point stencil in the interior, one-sided five-point stencils at the
// two points on each end. Needs at least five samples.
template <class Derived>
auto finite_difference(const Eigen::MatrixBase<Derived>& f, double h)
    -> Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = f.size();
  if (n < 5) throw SolverError("finite_difference: need at least 5 points");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> d(n);
  const double c = 1.0 / (12.0 * h);
  d(0) = c * (-25.0 * f(0) + 48.0 * f(1) - 36.0 * f(2) + 16.0 * f(3) - 3.0 * f(4));
  d(1) = c * (-3.0 * f(0) - 10.0 * f(1) + 18.0 * f(2) - 6.0 * f(3) + f(4));
  for (Eigen::Index k = 2; k + 2 < n; ++k)
    d(k) = c * (f(k - 2) - 8.0 * f(k - 1) + 8.0 * f(k + 1) - f(k + 2));
  d(n - 2) = -c * (-3.0 * f(n - 1) - 10.0 * f(n - 2) + 18.0 * f(n - 3) -
                   6.0 * f(n - 4) + f(n - 5));
  d(n - 1) = -c * (-25.0 * f(n - 1) + 48.0 * f(n - 2) - 36.0 * f(n - 3) +
                   16.0 * f(n - 4) - 3.0 * f(n - 5));
  return d;
}

// Running trapezoid integral of f over a uniform grid, starting at 0.
template <class Derived>
auto cumulative_trapezoid(const Eigen::MatrixBase<Derived>& f, double h)
    -> Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = f.size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(n);
  Scalar acc{};
  out(0) = acc;
  for (Eigen::Index k = 1; k < n; ++k) {
    acc += 0.5 * h * (f(k - 1) + f(k));
    out(k) = acc;
  }
  return out;
}

// Cubic Lagrange interpolation of a uniformly sampled series, restricted to
// the index window [i_lo, i_hi]. x is clamped to the window.
template <class Derived>
auto interp_cubic(const Eigen::MatrixBase<Derived>& y, double t0, double h,
                  Eigen::Index i_lo, Eigen::Index i_hi, double x) ->
    typename Derived::Scalar {
  if (i_hi - i_lo < 3) throw SolverError("interp_cubic: window needs 4 points");
  const double lo = t0 + h * static_cast<double>(i_lo);
  const double hi = t0 + h * static_cast<double>(i_hi);
  x = std::clamp(x, lo, hi);
  Eigen::Index base = i_lo + static_cast<Eigen::Index>(std::floor((x - lo) / h)) - 1;
  base = std::clamp(base, i_lo, i_hi - 3);
  const double s = (x - (t0 + h * static_cast<double>(base))) / h;
  // Lagrange weights for nodes at s = 0, 1, 2, 3.
  const double w0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
  const double w1 = s * (s - 2.0) * (s - 3.0) / 2.0;
  const double w2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
  const double w3 = s * (s - 1.0) * (s - 2.0) / 6.0;
  return w0 * y(base) + w1 * y(base + 1) + w2 * y(base + 2) + w3 * y(base + 3);
}

}  // namespace spinboson::numerics
