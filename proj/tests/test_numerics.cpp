// Closed-form checks for the numerics layer: quadrature, principal values,
// finite differences, interpolation, the RK45 stepper, and the deterministic
// parallel loop.
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "spinboson/numerics/grid.hpp"
#include "spinboson/numerics/ode.hpp"
#include "spinboson/numerics/parallel.hpp"
#include "spinboson/numerics/quadrature.hpp"
#include "spinboson/types.hpp"

using spinboson::Complex;
using spinboson::ConfigError;
using spinboson::SolverError;
namespace num = spinboson::numerics;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("adaptive Simpson reproduces closed-form integrals") {
  // int_0^pi sin = 2
  const double s = num::adaptive_simpson([](double x) { return std::sin(x); }, 0.0, kPi);
  CHECK(s == doctest::Approx(2.0).epsilon(1e-12));

  // Gaussian over a wide window, int e^{-x^2} = sqrt(pi) erf(6)
  const double g = num::adaptive_simpson([](double x) { return std::exp(-x * x); }, -6.0, 6.0);
  CHECK(g == doctest::Approx(std::sqrt(kPi) * std::erf(6.0)).epsilon(1e-9));

  // Empty interval
  CHECK(num::adaptive_simpson([](double x) { return std::cos(x); }, 1.0, 1.0) == 0.0);
}

TEST_CASE("adaptive Simpson handles complex integrands") {
  // int_0^X e^{ix} dx = sin X + i (1 - cos X); at X = pi/2 this is 1 + i
  const Complex v = num::adaptive_simpson(
      [](double x) { return std::exp(Complex(0.0, x)); }, 0.0, 0.5 * kPi);
  CHECK(v.real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v.imag() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Gauss-Legendre panels integrate high-degree polynomials exactly") {
  // A 16-point rule is exact through degree 31: int_0^1 x^31 = 1/32.
  const auto q = num::gauss_legendre_panels(0.0, 1.0, 1);
  REQUIRE(q.x.size() == static_cast<size_t>(num::kGaussLegendreOrder));
  double acc = 0.0, wsum = 0.0;
  for (size_t i = 0; i < q.x.size(); ++i) {
    acc += q.w[i] * std::pow(q.x[i], 31);
    wsum += q.w[i];
  }
  CHECK(acc == doctest::Approx(1.0 / 32.0).epsilon(1e-13));
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("composite Gauss-Legendre rule converges on oscillatory integrands") {
  const auto q = num::gauss_legendre_panels(0.0, 10.0, 8);
  CHECK(q.x.size() == static_cast<size_t>(8 * num::kGaussLegendreOrder));
  double acc = 0.0;
  for (size_t i = 0; i < q.x.size(); ++i) acc += q.w[i] * std::cos(q.x[i]);
  CHECK(acc == doctest::Approx(std::sin(10.0)).epsilon(1e-12));
  // Nodes stay inside the interval and increase within each panel.
  for (size_t i = 1; i < q.x.size(); ++i) {
    CHECK(q.x[i] > 0.0);
    CHECK(q.x[i] < 10.0);
  }
}

TEST_CASE("principal value integral matches the logarithmic closed form") {
  // P int_0^3 dw' / (1 - w') = ln|1 - 0| - ln|1 - 3| = -ln 2
  auto one = [](double) { return 1.0; };
  const double pv = num::principal_value(one, 0.0, 3.0, 1.0);
  CHECK(pv == doctest::Approx(-std::log(2.0)).epsilon(1e-10));

  // Symmetric window about the pole cancels exactly.
  CHECK(num::principal_value(one, 0.0, 2.0, 1.0) == doctest::Approx(0.0));

  // P int_0^2 w' / (1 - w') dw' = -2 by writing w'/(1-w') = -1 + 1/(1-w').
  const double pv2 = num::principal_value([](double w) { return w; }, 0.0, 2.0, 1.0);
  CHECK(pv2 == doctest::Approx(-2.0).epsilon(1e-10));

  CHECK_THROWS_AS(num::principal_value(one, 0.0, 1.0, 1.0), SolverError);
  CHECK_THROWS_AS(num::principal_value(one, 0.0, 1.0, 0.0), SolverError);
}

TEST_CASE("finite difference is fourth order on smooth data") {
  auto max_err = [](double h, int n) {
    Eigen::VectorXd f(n);
    for (int k = 0; k < n; ++k) f(k) = std::cos(h * k);
    const Eigen::VectorXd d = num::finite_difference(f, h);
    double worst = 0.0;
    for (int k = 0; k < n; ++k)
      worst = std::max(worst, std::abs(d(k) + std::sin(h * k)));
    return worst;
  };
  const double e1 = max_err(0.05, 201);
  const double e2 = max_err(0.025, 401);
  CHECK(e1 < 1e-6);
  // Halving h should reduce the error by about 2^4.
  CHECK(e1 / e2 > 10.0);

  Eigen::VectorXd tiny(4);
  tiny.setZero();
  CHECK_THROWS_AS(num::finite_difference(tiny, 0.1), SolverError);
}

TEST_CASE("cumulative trapezoid is exact for linear integrands") {
  const int n = 11;
  const double h = 0.1;
  Eigen::VectorXd f(n);
  for (int k = 0; k < n; ++k) f(k) = h * k;
  const Eigen::VectorXd F = num::cumulative_trapezoid(f, h);
  CHECK(F(0) == 0.0);
  for (int k = 0; k < n; ++k) {
    const double t = h * k;
    CHECK(F(k) == doctest::Approx(0.5 * t * t).epsilon(1e-14));
  }
}

TEST_CASE("cubic interpolation reproduces cubics and clamps out-of-window points") {
  auto poly = [](double t) { return t * t * t - 2.0 * t * t + t - 0.5; };
  const double h = 0.1;
  const int n = 21;
  Eigen::VectorXd y(n);
  for (int k = 0; k < n; ++k) y(k) = poly(h * k);

  for (double x : {0.03, 0.512, 1.07, 1.999}) {
    const double v = num::interp_cubic(y, 0.0, h, 0, n - 1, x);
    CHECK(v == doctest::Approx(poly(x)).epsilon(1e-12));
  }
  // Clamped to the window edges.
  CHECK(num::interp_cubic(y, 0.0, h, 0, n - 1, -1.0) == doctest::Approx(poly(0.0)));
  CHECK(num::interp_cubic(y, 0.0, h, 0, n - 1, 5.0) == doctest::Approx(poly(2.0)));
  // Restricted index window still interpolates exactly inside it.
  CHECK(num::interp_cubic(y, 0.0, h, 4, 9, 0.65) == doctest::Approx(poly(0.65)).epsilon(1e-12));

  CHECK_THROWS_AS(num::interp_cubic(y, 0.0, h, 3, 5, 0.4), SolverError);
}

TEST_CASE("uniform grid covers [0, t_max] with steps + 1 points") {
  const Eigen::VectorXd t = num::uniform_grid(4.0, 8);
  REQUIRE(t.size() == 9);
  CHECK(t(0) == 0.0);
  CHECK(t(8) == doctest::Approx(4.0));
  for (int k = 1; k < 9; ++k) CHECK(t(k) - t(k - 1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(num::uniform_grid(0.0, 8), ConfigError);
  CHECK_THROWS_AS(num::uniform_grid(1.0, 0), ConfigError);
}

TEST_CASE("RK45 integrates decay and oscillation to tight tolerance") {
  using V1 = Eigen::Matrix<double, 1, 1>;
  V1 y;
  y << 1.0;
  num::rk45_advance([](double, const V1& v) { return V1(-v); }, y, 0.0, 10.0);
  CHECK(y(0) == doctest::Approx(std::exp(-10.0)).epsilon(1e-8));

  Eigen::Vector2d z(1.0, 0.0);  // x' = v, v' = -x
  num::rk45_advance(
      [](double, const Eigen::Vector2d& s) { return Eigen::Vector2d(s(1), -s(0)); },
      z, 0.0, 10.0);
  CHECK(z(0) == doctest::Approx(std::cos(10.0)).epsilon(1e-8));
  CHECK(z(1) == doctest::Approx(-std::sin(10.0)).epsilon(1e-8));
}

TEST_CASE("RK45 handles complex states and reports failure modes") {
  using VC = Eigen::Matrix<Complex, 1, 1>;
  VC y;
  y << Complex(1.0, 0.0);
  const double w = 3.0;
  num::rk45_advance([w](double, const VC& v) { return VC(Complex(0.0, w) * v(0)); },
                    y, 0.0, 2.0);
  CHECK(std::abs(y(0)) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(y(0).real() == doctest::Approx(std::cos(w * 2.0)).epsilon(1e-8));
  CHECK(y(0).imag() == doctest::Approx(std::sin(w * 2.0)).epsilon(1e-8));

  // t1 <= t0 is a no-op.
  VC y0 = y;
  num::rk45_advance([w](double, const VC& v) { return VC(Complex(0.0, w) * v(0)); },
                    y, 2.0, 2.0);
  CHECK(y(0) == y0(0));

  Eigen::Vector2d z(1.0, 0.0);
  num::OdeOptions opt;
  opt.max_steps = 3;
  CHECK_THROWS_AS(num::rk45_advance(
                      [](double, const Eigen::Vector2d& s) {
                        return Eigen::Vector2d(s(1), -s(0));
                      },
                      z, 0.0, 100.0, opt),
                  SolverError);
}

TEST_CASE("parallel_for fills slots identically for any thread count") {
  const int n = 257;
  auto fill = [n](int threads) {
    std::vector<double> slot(n, 0.0);
    num::parallel_for(n, threads, [&](int i) { slot[static_cast<size_t>(i)] = std::sin(0.1 * i) * i; });
    return slot;
  };
  const auto a = fill(1);
  const auto b = fill(4);
  const auto c = fill(7);
  CHECK(a == b);
  CHECK(a == c);
  num::parallel_for(0, 4, [](int) { FAIL("task ran for an empty loop"); });
}

TEST_CASE("parallel_for visits each index once and propagates exceptions") {
  const int n = 100;
  std::vector<int> visits(n, 0);
  num::parallel_for(n, 3, [&](int i) { visits[static_cast<size_t>(i)] += 1; });
  for (int v : visits) CHECK(v == 1);

  CHECK_THROWS_WITH_AS(num::parallel_for(64, 4,
                                         [](int i) {
                                           if (i == 37) throw SolverError("slot 37 failed");
                                         }),
                       "slot 37 failed", SolverError);
}
