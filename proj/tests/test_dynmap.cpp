// Dynamical map application, Kraus decomposition, trace distance, and
// physicality checks.
#include <cmath>
#include <complex>

#include "doctest.h"
#include "spinboson/bath.hpp"
#include "spinboson/dynmap.hpp"
#include "spinboson/exact.hpp"
#include "spinboson/types.hpp"

using namespace spinboson;
using dynmap::MapPoint;

namespace {

MapPoint synthetic_point() {
  MapPoint m;
  m.alpha = 0.8;
  m.xi = 0.7;
  m.gamma = 0.2;
  m.zeta = 0.3;
  m.eta = 0.6 * std::exp(kI * 0.4);
  m.D = m.alpha + m.xi - 1.0;
  return m;
}

Eigen::Matrix2cd test_state() {
  Eigen::Matrix2cd rho;
  rho << Complex(0.6, 0.0), Complex(0.2, -0.1), Complex(0.2, 0.1), Complex(0.4, 0.0);
  return rho;
}

// A physical map point taken from the exact thermal single-mode dynamics.
MapPoint engine_point(double t) {
  const auto b = bath::discretize(bath::SpectralDensity::single_mode(0.25, 1.3), 1,
                                  bath::DiscretizationScheme::Midpoint);
  const auto basis = exact::build_basis(1, 5);
  Eigen::VectorXd grid(1);
  grid << t;
  const auto mc = exact::map_coefficients(b, ModelParams{1.0, 0.6, 0.8}, basis, grid);
  return dynmap::at(mc, 0);
}

}  // namespace

TEST_CASE("map application follows the population law and coherence contraction") {
  const MapPoint m = synthetic_point();
  const Eigen::Matrix2cd rho0 = test_state();
  const Eigen::Matrix2cd rho = dynmap::apply_map(m, rho0);

  CHECK(rho(0, 0).real() == doctest::Approx(0.7 * 0.6 + 0.2 * 0.4).epsilon(1e-14));
  CHECK(rho(1, 1).real() == doctest::Approx(0.3 * 0.6 + 0.8 * 0.4).epsilon(1e-14));
  CHECK(std::abs(rho(0, 1) - std::conj(m.eta) * rho0(0, 1)) < 1e-14);
  CHECK(std::abs(rho(1, 0) - std::conj(rho(0, 1))) < 1e-14);
  CHECK(std::abs(rho.trace() - 1.0) < 1e-14);

  const Eigen::Vector2d p = dynmap::populations(m, Eigen::Vector2d(0.6, 0.4));
  CHECK(p(0) == doctest::Approx(rho(0, 0).real()).epsilon(1e-14));
  CHECK(p(1) == doctest::Approx(rho(1, 1).real()).epsilon(1e-14));
}

TEST_CASE("at() reads one grid point out of the coefficient series") {
  exact::MapCoefficients mc;
  mc.t = Eigen::Vector3d(0.0, 0.5, 1.0);
  mc.alpha = Eigen::Vector3d(1.0, 0.9, 0.8);
  mc.xi = Eigen::Vector3d(1.0, 0.85, 0.7);
  mc.gamma = Eigen::Vector3d(0.0, 0.1, 0.2);
  mc.zeta = Eigen::Vector3d(0.0, 0.15, 0.3);
  mc.eta = Eigen::Vector3cd(Complex(1, 0), Complex(0.9, 0.05), Complex(0.75, 0.1));
  mc.D = Eigen::Vector3d(1.0, 0.75, 0.5);
  const MapPoint m = dynmap::at(mc, 1);
  CHECK(m.alpha == 0.9);
  CHECK(m.xi == 0.85);
  CHECK(m.gamma == 0.1);
  CHECK(m.zeta == 0.15);
  CHECK(m.eta == Complex(0.9, 0.05));
  CHECK(m.D == 0.75);
}

TEST_CASE("Kraus set matches the documented operator forms") {
  const MapPoint m = synthetic_point();
  const auto set = dynmap::kraus(m);
  REQUIRE(set.ops.size() == 4);
  // sigma_+ = |e><g| sits at (0,1) in the {excited, ground} basis.
  CHECK(std::abs(set.ops[0](0, 1) - std::sqrt(m.gamma)) < 1e-14);
  CHECK(std::abs(set.ops[1](1, 0) - std::sqrt(m.zeta)) < 1e-14);
  CHECK(std::abs(set.ops[2](0, 0) - std::sqrt(m.xi)) < 1e-14);
  CHECK(std::abs(set.ops[2](1, 1) - m.eta / std::sqrt(m.xi)) < 1e-14);
  const double k4 = std::sqrt(m.alpha) *
                    std::sqrt(1.0 - std::norm(m.eta) / (m.alpha * m.xi));
  CHECK(std::abs(set.ops[3](1, 1) - k4) < 1e-14);
}

TEST_CASE("Kraus decomposition reproduces the map on physical points") {
  for (double t : {0.3, 0.9, 2.1}) {
    const MapPoint m = engine_point(t);
    const auto set = dynmap::kraus(m);
    const Eigen::Matrix2cd comp = set.completeness();
    CHECK((comp - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-13);
    const Eigen::Matrix2cd rho0 = test_state();
    const Eigen::Matrix2cd via_kraus = set.apply(rho0);
    const Eigen::Matrix2cd via_map = dynmap::apply_map(m, rho0);
    CHECK((via_kraus - via_map).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(dynmap::is_physical(via_kraus));
  }
}

TEST_CASE("Kraus construction rejects unphysical points") {
  MapPoint m = synthetic_point();
  m.xi = 0.0;
  CHECK_THROWS_AS(dynmap::kraus(m), SolverError);
  m = synthetic_point();
  m.eta = Complex(0.9, 0.0);  // |eta|^2 = 0.81 > alpha xi = 0.56
  CHECK_THROWS_AS(dynmap::kraus(m), SolverError);
  m = synthetic_point();
  m.gamma = -0.05;
  CHECK_THROWS_AS(dynmap::kraus(m), SolverError);
}

TEST_CASE("trace distance has the textbook values") {
  Eigen::Matrix2cd e = Eigen::Matrix2cd::Zero(), g = Eigen::Matrix2cd::Zero();
  e(0, 0) = 1.0;
  g(1, 1) = 1.0;
  CHECK(dynmap::trace_distance(e, g) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(dynmap::trace_distance(e, e) == doctest::Approx(0.0));

  Eigen::Matrix2cd a = Eigen::Matrix2cd::Zero(), b = Eigen::Matrix2cd::Zero();
  a(0, 0) = 0.75;
  a(1, 1) = 0.25;
  b(0, 0) = 0.25;
  b(1, 1) = 0.75;
  CHECK(dynmap::trace_distance(a, b) == doctest::Approx(0.5).epsilon(1e-14));

  // Pure coherence difference of magnitude c has distance c.
  Eigen::Matrix2cd c1 = test_state();
  Eigen::Matrix2cd c2 = c1;
  c2(0, 1) = c1(0, 1) + Complex(0.3, 0.0);
  c2(1, 0) = std::conj(c2(0, 1));
  CHECK(dynmap::trace_distance(c1, c2) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("physicality check accepts states and rejects non-states") {
  CHECK(dynmap::is_physical(test_state()));
  Eigen::Matrix2cd bad = test_state();
  bad(0, 0) = 0.7;  // trace 1.1
  CHECK_FALSE(dynmap::is_physical(bad));

  bad = test_state();
  bad(0, 1) = Complex(0.9, 0.0);  // |coh| above sqrt(p+ p-), negative eigenvalue
  bad(1, 0) = Complex(0.9, 0.0);
  CHECK_FALSE(dynmap::is_physical(bad));

  bad = test_state();
  bad(1, 0) = Complex(0.0, 0.9);  // not hermitian
  CHECK_FALSE(dynmap::is_physical(bad));
}
