// ode.hpp — adaptive Dormand-Prince 5(4) integrator for small dense states.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "spinboson/types.hpp"

namespace spinboson::numerics {

struct OdeOptions {
  double rel_tol{1e-10};
  double abs_tol{1e-12};
  double initial_dt{1e-3};
  double min_dt{1e-12};
  long max_steps{20'000'000};
};

// Advances y from t0 to t1 with the RHS functor dy = f(t, y).
// State is any fixed-size Eigen vector type. Error control uses the embedded
// fourth-order solution with a standard step-size controller.
template <class State, class Rhs>
void rk45_advance(Rhs&& f, State& y, double t0, double t1,
                  const OdeOptions& opt = {}) {
  if (t1 <= t0) return;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                          e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640,
                          e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

  double t = t0;
  double h = std::min(opt.initial_dt, t1 - t0);
  State k1 = f(t, y);
  for (long step = 0; step < opt.max_steps; ++step) {
    if (t >= t1) return;
    h = std::min(h, t1 - t);
    const State k2 = f(t + 0.2 * h, State(y + h * (a21 * k1)));
    const State k3 = f(t + 0.3 * h, State(y + h * (a31 * k1 + a32 * k2)));
    const State k4 = f(t + 0.8 * h, State(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
    const State k5 = f(t + 8.0 / 9.0 * h,
                       State(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
    const State k6 = f(t + h, State(y + h * (a61 * k1 + a62 * k2 + a63 * k3 +
                                             a64 * k4 + a65 * k5)));
    const State y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const State k7 = f(t + h, y5);
    const State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double err_norm = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double sc = opt.abs_tol +
                        opt.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
      err_norm = std::max(err_norm, std::abs(err[i]) / sc);
    }
    if (err_norm <= 1.0) {
      t += h;
      y = y5;
      k1 = k7;  // first-same-as-last
    }
    const double fac =
        std::clamp(0.9 * std::pow(std::max(err_norm, 1e-10), -0.2), 0.2, 5.0);
    h *= fac;
    if (h < opt.min_dt)
      throw SolverError("rk45_advance: step size underflow");
  }
  throw SolverError("rk45_advance: max step count exceeded");
}

}  // namespace spinboson::numerics
