// Sector basis, Hamiltonian blocks, truncation health, conditioned
// propagators, and the exact map coefficients against Jaynes-Cummings
// closed forms and a brute-force product-basis evolution.
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "spinboson/bath.hpp"
#include "spinboson/exact.hpp"
#include "spinboson/numerics/grid.hpp"
#include "spinboson/types.hpp"

using namespace spinboson;
using bath::DiscretizationScheme;
using bath::SpectralDensity;

namespace {

bath::DiscretizedBath single_mode_bath(double g2, double omega0) {
  return bath::discretize(SpectralDensity::single_mode(g2, omega0), 1,
                          DiscretizationScheme::Midpoint);
}

bath::DiscretizedBath two_mode_bath(double w1, double g1, double w2, double g2) {
  bath::DiscretizedBath b;
  b.omega = {w1, w2};
  b.g = {g1, g2};
  b.window_lo = w1;
  b.window_hi = w2;
  return b;
}

// Diagonal interaction-picture amplitudes of the detuned Jaynes-Cummings
// ladder with delta = Omega - omega0 and theta_m = sqrt(delta^2/4 + v^2 m):
//   <e,n|U_I|e,n> = e^{+i delta t/2} (cos theta_{n+1} t - i (delta/2theta) sin theta_{n+1} t)
//   <g,m|U_I|g,m> = e^{-i delta t/2} (cos theta_m t     + i (delta/2theta) sin theta_m t)
Complex jc_excited_amp(int n, double delta, double v, double t) {
  const double th = std::sqrt(0.25 * delta * delta + v * v * (n + 1));
  return std::exp(kI * (0.5 * delta * t)) *
         (std::cos(th * t) - kI * (0.5 * delta / th) * std::sin(th * t));
}

Complex jc_ground_amp(int m, double delta, double v, double t) {
  if (m == 0 && delta == 0.0) return Complex{1.0, 0.0};
  const double th = std::sqrt(0.25 * delta * delta + v * v * m);
  if (th == 0.0) return Complex{1.0, 0.0};
  return std::exp(-kI * (0.5 * delta * t)) *
         (std::cos(th * t) + kI * (0.5 * delta / th) * std::sin(th * t));
}

}  // namespace

TEST_CASE("sector basis enumerates boson compositions by total quanta") {
  const auto basis = exact::build_basis(3, 2);
  CHECK(basis.n_modes == 3);
  CHECK(basis.max_total == 2);
  CHECK(basis.comp_count(0) == 1);
  CHECK(basis.comp_count(1) == 3);
  CHECK(basis.comp_count(2) == 6);  // multiset coefficient C(2+3-1, 2)
  CHECK(basis.comp_count(3) == 0);
  CHECK(basis.comp_count(-1) == 0);
  CHECK(basis.boson_dim() == 10);
  CHECK(basis.excited_dim(0) == 0);
  CHECK(basis.ground_dim(0) == 1);
  CHECK(basis.sector_dim(1) == 1 + 3);
  CHECK(basis.sector_dim(2) == 3 + 6);
  CHECK(basis.total_dim() == 1 + 4 + 9);
  for (int m = 0; m <= 2; ++m) {
    const auto& c = basis.comp[static_cast<size_t>(m)];
    for (int r = 0; r < c.rows(); ++r) {
      int sum = 0;
      for (int k = 0; k < c.cols(); ++k) {
        CHECK(c(r, k) >= 0);
        sum += c(r, k);
      }
      CHECK(sum == m);
    }
  }
}

TEST_CASE("single-mode Hamiltonian blocks match the ladder matrix elements") {
  const double Omega = 1.0, w0 = 1.3, g = 0.5, lambda = 0.8;
  const auto b = single_mode_bath(g * g, w0);
  const auto basis = exact::build_basis(1, 2);
  const auto H = exact::build_hamiltonian(b, ModelParams{Omega, kVacuumBeta, lambda}, basis);
  REQUIRE(H.size() == 3);

  REQUIRE(H[0].rows() == 1);  // |g,0> alone
  CHECK(H[0](0, 0) == doctest::Approx(-0.5 * Omega));

  REQUIRE(H[1].rows() == 2);  // {|e,0>, |g,1>}
  CHECK(H[1](0, 0) == doctest::Approx(0.5 * Omega));
  CHECK(H[1](1, 1) == doctest::Approx(w0 - 0.5 * Omega));
  CHECK(H[1](0, 1) == doctest::Approx(lambda * g));
  CHECK(H[1](1, 0) == doctest::Approx(lambda * g));

  REQUIRE(H[2].rows() == 2);  // {|e,1>, |g,2>}
  CHECK(H[2](0, 0) == doctest::Approx(0.5 * Omega + w0));
  CHECK(H[2](1, 1) == doctest::Approx(2.0 * w0 - 0.5 * Omega));
  CHECK(H[2](0, 1) == doctest::Approx(lambda * g * std::sqrt(2.0)));
}

TEST_CASE("two-mode sector-1 block couples the qubit to each mode") {
  const double Omega = 0.9, lambda = 0.6;
  const auto b = two_mode_bath(1.1, 0.3, 1.7, 0.2);
  const auto basis = exact::build_basis(2, 1);
  const auto H = exact::build_hamiltonian(b, ModelParams{Omega, kVacuumBeta, lambda}, basis);
  REQUIRE(H[1].rows() == 3);  // {|e,(0,0)>, |g,one quantum in either mode>}
  CHECK(H[1](0, 0) == doctest::Approx(0.5 * Omega));
  // Ground diagonal entries are omega_k - Omega/2 for the singly occupied mode.
  std::vector<double> diags = {H[1](1, 1), H[1](2, 2)};
  std::vector<double> offs = {H[1](0, 1), H[1](0, 2)};
  for (int r = 0; r < 2; ++r) {
    int which = -1;
    for (int k = 0; k < 2; ++k)
      if (basis.comp[1](r, k) == 1) which = k;
    REQUIRE(which >= 0);
    CHECK(diags[static_cast<size_t>(r)] ==
          doctest::Approx(b.omega[static_cast<size_t>(which)] - 0.5 * Omega));
    CHECK(offs[static_cast<size_t>(r)] ==
          doctest::Approx(lambda * b.g[static_cast<size_t>(which)]));
  }
  CHECK(H[1](1, 2) == doctest::Approx(0.0));
}

TEST_CASE("sector eigendecomposition reconstructs the block") {
  const auto b = two_mode_bath(1.1, 0.3, 1.7, 0.2);
  const ModelParams p{0.9, std::log(2.0), 0.6};
  const auto basis = exact::build_basis(2, 2);
  const exact::SectorEngine engine(b, p, basis);
  const auto H = exact::build_hamiltonian(b, p, basis);
  for (int s = 0; s <= 2; ++s) {
    const auto& sec = engine.sector(s);
    const Eigen::MatrixXd rebuilt = sec.V * sec.lam.asDiagonal() * sec.V.transpose();
    CHECK((rebuilt - H[static_cast<size_t>(s)]).cwiseAbs().maxCoeff() < 1e-12);
    const Eigen::MatrixXd gram = sec.V.transpose() * sec.V;
    CHECK((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((sec.e0 - H[static_cast<size_t>(s)].diagonal()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("truncation health matches the geometric ladder closed form") {
  // Single mode with beta w = ln 2: occupation ratio x = 1/2.
  const auto b = single_mode_bath(0.25, 1.0);
  const double beta = std::log(2.0);
  const int mp = 3;
  const auto h = exact::thermal_truncation_health(b, beta, mp);
  const double x = 0.5;
  double z = 0.0, nsum = 0.0;
  for (int n = 0; n <= mp; ++n) {
    z += std::pow(x, n);
    nsum += n * std::pow(x, n);
  }
  CHECK(h.gibbs_weight == doctest::Approx(1.0 - std::pow(x, mp + 1)).epsilon(1e-13));
  CHECK(h.mode_occupation(0) == doctest::Approx(nsum / z).epsilon(1e-13));
  CHECK(h.mode_occupation_full(0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(h.occupation_capture == doctest::Approx(nsum / z).epsilon(1e-13));

  const auto hv = exact::thermal_truncation_health(b, kVacuumBeta, mp);
  CHECK(hv.gibbs_weight == 1.0);
  CHECK(hv.occupation_capture == 1.0);
  CHECK(hv.mode_occupation(0) == 0.0);
}

TEST_CASE("two-mode truncation health agrees with brute-force enumeration") {
  const auto b = two_mode_bath(0.9, 0.1, 1.4, 0.2);
  const double beta = 0.8;
  const int mp = 4;
  const auto h = exact::thermal_truncation_health(b, beta, mp);

  const double x1 = std::exp(-beta * 0.9), x2 = std::exp(-beta * 1.4);
  double z_tr = 0.0, n1 = 0.0, n2 = 0.0;
  for (int a = 0; a <= mp; ++a)
    for (int c = 0; a + c <= mp; ++c) {
      const double w = std::pow(x1, a) * std::pow(x2, c);
      z_tr += w;
      n1 += a * w;
      n2 += c * w;
    }
  const double z_full = 1.0 / ((1.0 - x1) * (1.0 - x2));
  CHECK(h.gibbs_weight == doctest::Approx(z_tr / z_full).epsilon(1e-12));
  CHECK(h.mode_occupation(0) == doctest::Approx(n1 / z_tr).epsilon(1e-12));
  CHECK(h.mode_occupation(1) == doctest::Approx(n2 / z_tr).epsilon(1e-12));
  const double full = x1 / (1.0 - x1) + x2 / (1.0 - x2);
  CHECK(h.occupation_capture == doctest::Approx((n1 + n2) / z_tr / full).epsilon(1e-12));
}

TEST_CASE("conditioned propagators satisfy the sector isometries") {
  const auto b = two_mode_bath(0.9, 0.25, 1.3, 0.2);
  const ModelParams p{1.0, std::log(2.0), 0.7};
  const int M = 3;
  const auto basis = exact::build_basis(2, M);
  const exact::SectorEngine engine(b, p, basis);
  const long nb = basis.boson_dim();

  // Boson totals per flat index, enumeration order ascending in total.
  std::vector<int> total(static_cast<size_t>(nb));
  {
    long at = 0;
    for (int m = 0; m <= M; ++m)
      for (int r = 0; r < basis.comp_count(m); ++r) total[static_cast<size_t>(at++)] = m;
  }

  for (double t : {0.0, 0.7, 2.3}) {
    const auto u = engine.propagate(t);
    REQUIRE(u.pp.rows() == nb);
    const Eigen::MatrixXcd iso_e = u.pp.adjoint() * u.pp + u.mp.adjoint() * u.mp;
    const Eigen::MatrixXcd iso_g = u.mm.adjoint() * u.mm + u.pm.adjoint() * u.pm;
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(nb, nb);
    // Ground-conditioned columns evolve entirely inside the retained sectors.
    CHECK((iso_g - id).cwiseAbs().maxCoeff() < 1e-12);
    // Excited-conditioned columns exist only for boson totals <= M-1.
    for (long i = 0; i < nb; ++i)
      for (long j = 0; j < nb; ++j) {
        const double want =
            (i == j && total[static_cast<size_t>(i)] <= M - 1) ? 1.0 : 0.0;
        CHECK(std::abs(iso_e(i, j) - want) < 1e-12);
      }
  }

  const auto u0 = engine.propagate(0.0);
  CHECK((u0.mm - Eigen::MatrixXcd::Identity(nb, nb)).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(u0.mp.cwiseAbs().maxCoeff() < 1e-13);
  CHECK(u0.pm.cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("vacuum single-mode map has the resonant Rabi closed form") {
  const double Omega = 1.0, g = 0.5, lambda = 1.0;
  const auto b = single_mode_bath(g * g, Omega);
  const auto basis = exact::build_basis(1, 1);
  const Eigen::VectorXd t = numerics::uniform_grid(6.0, 240);
  const auto mc = exact::map_coefficients(b, ModelParams{Omega, kVacuumBeta, lambda}, basis, t);
  for (Eigen::Index k = 0; k < t.size(); ++k) {
    const double c = std::cos(lambda * g * t(k));
    CHECK(mc.xi(k) == doctest::Approx(c * c).epsilon(1e-12));
    CHECK(mc.alpha(k) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(mc.gamma(k) == doctest::Approx(0.0));
    CHECK(mc.zeta(k) == doctest::Approx(1.0 - c * c).epsilon(1e-12));
    CHECK(mc.eta(k).real() == doctest::Approx(c).epsilon(1e-12));
    CHECK(std::abs(mc.eta(k).imag()) < 1e-12);
    CHECK(mc.D(k) == doctest::Approx(c * c).epsilon(1e-12));
  }
}

TEST_CASE("thermal detuned map matches the dressed-ladder sums") {
  const double Omega = 1.0, w0 = 1.3, g = 0.5, lambda = 0.8;
  const double beta = 0.6;
  const int M = 6;
  const auto b = single_mode_bath(g * g, w0);
  const auto basis = exact::build_basis(1, M);
  const exact::SectorEngine engine(b, ModelParams{Omega, beta, lambda}, basis);

  Eigen::VectorXd t(4);
  t << 0.0, 0.3, 0.9, 2.0;
  const auto mc = engine.map_coefficients(t);

  // Normalized Gibbs weights on photon numbers 0 .. M-1.
  std::vector<double> w(static_cast<size_t>(M));
  double z = 0.0;
  for (int n = 0; n < M; ++n) z += std::exp(-beta * w0 * n);
  for (int n = 0; n < M; ++n) w[static_cast<size_t>(n)] = std::exp(-beta * w0 * n) / z;

  const double delta = Omega - w0, v = lambda * g;
  for (Eigen::Index k = 0; k < t.size(); ++k) {
    double xi = 0.0, alpha = 0.0;
    Complex eta{};
    for (int n = 0; n < M; ++n) {
      const Complex A = jc_excited_amp(n, delta, v, t(k));
      const Complex B = jc_ground_amp(n, delta, v, t(k));
      xi += w[static_cast<size_t>(n)] * std::norm(A);
      alpha += w[static_cast<size_t>(n)] * std::norm(B);
      eta += w[static_cast<size_t>(n)] * std::conj(A) * B;
    }
    CHECK(mc.xi(k) == doctest::Approx(xi).epsilon(1e-12));
    CHECK(mc.alpha(k) == doctest::Approx(alpha).epsilon(1e-12));
    CHECK(std::abs(mc.eta(k) - eta) < 1e-12);
    // Unitarity sums and the Schwarz bound.
    CHECK(mc.alpha(k) + mc.gamma(k) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(mc.xi(k) + mc.zeta(k) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::norm(mc.eta(k)) <= mc.alpha(k) * mc.xi(k) + 1e-12);
    CHECK(mc.D(k) == doctest::Approx(mc.alpha(k) + mc.xi(k) - 1.0));
  }
}

TEST_CASE("map coefficients reproduce brute-force product-basis evolution") {
  // Hand-built dense H on the sector-truncated single-mode space:
  // excited states n = 0..M-1, ground states n = 0..M.
  const double Omega = 1.0, w0 = 1.3, g = 0.5, lambda = 0.8;
  const double beta = 0.6;
  const int M = 5;
  const int ne = M, ng = M + 1, dim = ne + ng;

  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd E0(dim);
  for (int n = 0; n < ne; ++n) {
    H(n, n) = 0.5 * Omega + n * w0;
    E0(n) = H(n, n);
  }
  for (int n = 0; n < ng; ++n) {
    H(ne + n, ne + n) = -0.5 * Omega + n * w0;
    E0(ne + n) = H(ne + n, ne + n);
  }
  for (int n = 0; n < ne; ++n) {
    const double vg = lambda * g * std::sqrt(n + 1.0);
    H(n, ne + n + 1) = vg;
    H(ne + n + 1, n) = vg;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  REQUIRE(es.info() == Eigen::Success);

  std::vector<double> w(static_cast<size_t>(M));
  double z = 0.0;
  for (int n = 0; n < M; ++n) z += std::exp(-beta * w0 * n);
  for (int n = 0; n < M; ++n) w[static_cast<size_t>(n)] = std::exp(-beta * w0 * n) / z;

  const double p_plus0 = 0.35;
  const Complex coh0{0.2, -0.1};
  Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 0; n < M; ++n) {
    rho0(n, n) = p_plus0 * w[static_cast<size_t>(n)];
    rho0(ne + n, ne + n) = (1.0 - p_plus0) * w[static_cast<size_t>(n)];
    rho0(n, ne + n) = coh0 * w[static_cast<size_t>(n)];
    rho0(ne + n, n) = std::conj(coh0) * w[static_cast<size_t>(n)];
  }

  const auto b = single_mode_bath(g * g, w0);
  const auto basis = exact::build_basis(1, M);
  const exact::SectorEngine engine(b, ModelParams{Omega, beta, lambda}, basis);
  Eigen::VectorXd t(3);
  t << 0.4, 1.1, 2.7;
  const auto mc = engine.map_coefficients(t);

  for (Eigen::Index k = 0; k < t.size(); ++k) {
    const Eigen::VectorXcd ph =
        (-kI * es.eigenvalues().array() * t(k)).exp().matrix();
    const Eigen::MatrixXcd U =
        es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().transpose();
    const Eigen::VectorXcd ph0 = (kI * E0.array() * t(k)).exp().matrix();
    const Eigen::MatrixXcd UI = ph0.asDiagonal() * U;
    const Eigen::MatrixXcd rho_t = UI * rho0 * UI.adjoint();

    double p_plus = 0.0;
    Complex coh{};
    for (int n = 0; n < ne; ++n) {
      p_plus += rho_t(n, n).real();
      coh += rho_t(n, ne + n);
    }
    CHECK(p_plus ==
          doctest::Approx(mc.xi(k) * p_plus0 + mc.gamma(k) * (1.0 - p_plus0)).epsilon(1e-12));
    CHECK(std::abs(coh - std::conj(mc.eta(k)) * coh0) < 1e-12);
  }
}

TEST_CASE("mode occupations conserve the total excitation number") {
  const auto b = two_mode_bath(0.9, 0.25, 1.3, 0.2);
  const ModelParams p{1.0, std::log(2.0), 0.7};
  const auto basis = exact::build_basis(2, 4);
  const exact::SectorEngine engine(b, p, basis);
  const Eigen::VectorXd t = numerics::uniform_grid(8.0, 64);

  const double p_plus0 = 0.8;
  const auto occ = engine.occupations(p_plus0, t);
  const auto mc = engine.map_coefficients(t);
  REQUIRE(occ.n.rows() == t.size());
  REQUIRE(occ.n.cols() == 2);

  const double n_init = engine.health().mode_occupation.sum();
  CHECK(occ.n.row(0).sum() == doctest::Approx(n_init).epsilon(1e-10));

  for (Eigen::Index k = 0; k < t.size(); ++k) {
    const double p_plus = mc.xi(k) * p_plus0 + mc.gamma(k) * (1.0 - p_plus0);
    CHECK(occ.n.row(k).sum() + p_plus ==
          doctest::Approx(n_init + p_plus0).epsilon(1e-10));
    CHECK(occ.n.row(k).minCoeff() >= -1e-13);
  }

  CHECK_THROWS_AS(engine.occupations(1.5, t), ConfigError);
}

TEST_CASE("reservoir state stays normalized and consistent with occupations") {
  const auto b = single_mode_bath(0.25, 1.0);
  const ModelParams p{1.0, std::log(2.0), 0.8};
  const auto basis = exact::build_basis(1, 4);
  const exact::SectorEngine engine(b, p, basis);

  Eigen::Matrix2cd rho_q0 = Eigen::Matrix2cd::Zero();
  rho_q0(0, 0) = 1.0;  // excited

  const auto r0 = engine.reservoir_state(rho_q0, 0.0);
  CHECK(std::abs(r0.rho.trace() - 1.0) < 1e-12);
  CHECK((r0.rho - r0.rho.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  // The initial boson state is the normalized truncated Gibbs ladder.
  double z = 0.0;
  for (int n = 0; n < 4; ++n) z += std::exp(-p.beta * n);
  for (int n = 0; n < 4; ++n)
    CHECK(r0.rho(n, n).real() == doctest::Approx(std::exp(-p.beta * n) / z).epsilon(1e-12));
  CHECK(std::abs(r0.rho(4, 4)) < 1e-14);

  const double tq = 1.7;
  const auto rt = engine.reservoir_state(rho_q0, tq);
  CHECK(std::abs(rt.rho.trace() - 1.0) < 1e-12);
  CHECK((rt.rho - rt.rho.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::VectorXd tg(2);
  tg << 0.0, tq;
  const auto occ = engine.occupations(1.0, tg);
  CHECK(rt.occupation(0) == doctest::Approx(occ.n(1, 0)).epsilon(1e-11));
}

TEST_CASE("engine rejects mismatched bath and basis") {
  const auto b = two_mode_bath(0.9, 0.25, 1.3, 0.2);
  const auto basis = exact::build_basis(3, 2);
  CHECK_THROWS_AS(exact::SectorEngine(b, ModelParams{}, basis), ConfigError);
}

TEST_CASE("map coefficients are identical for any thread count") {
  const auto b = two_mode_bath(0.9, 0.25, 1.3, 0.2);
  const ModelParams p{1.0, std::log(2.0), 0.7};
  const auto basis = exact::build_basis(2, 3);
  const Eigen::VectorXd t = numerics::uniform_grid(5.0, 200);
  const auto m1 = exact::SectorEngine(b, p, basis, 1).map_coefficients(t);
  const auto m4 = exact::SectorEngine(b, p, basis, 4).map_coefficients(t);
  CHECK((m1.alpha - m4.alpha).cwiseAbs().maxCoeff() == 0.0);
  CHECK((m1.xi - m4.xi).cwiseAbs().maxCoeff() == 0.0);
  CHECK((m1.eta - m4.eta).cwiseAbs().maxCoeff() == 0.0);
}
