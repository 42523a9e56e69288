#include "spinboson/exact.hpp"

#include <cmath>
#include <cstring>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "spinboson/numerics/parallel.hpp"

namespace spinboson::exact {

namespace {

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void fill_compositions(int n_modes, int m, Eigen::MatrixXi& out) {
  std::vector<int> occ(static_cast<size_t>(n_modes), 0);
  int row = 0;
  // Depth-first over modes, leading occupations descending.
  std::function<void(int, int)> rec = [&](int k, int rest) {
    if (k == n_modes - 1) {
      occ[static_cast<size_t>(k)] = rest;
      for (int j = 0; j < n_modes; ++j) out(row, j) = occ[static_cast<size_t>(j)];
      ++row;
      return;
    }
    for (int v = rest; v >= 0; --v) {
      occ[static_cast<size_t>(k)] = v;
      rec(k + 1, rest - v);
    }
  };
  rec(0, m);
}

std::string pack_key(const Eigen::MatrixXi& comp, int row) {
  std::string key(static_cast<size_t>(comp.cols()), '\0');
  for (int j = 0; j < comp.cols(); ++j)
    key[static_cast<size_t>(j)] = static_cast<char>(comp(row, j));
  return key;
}

using IndexMap = std::unordered_map<std::string, int>;

IndexMap build_index(const Eigen::MatrixXi& comp) {
  IndexMap map;
  map.reserve(static_cast<size_t>(comp.rows()) * 2);
  for (int r = 0; r < comp.rows(); ++r) map.emplace(pack_key(comp, r), r);
  return map;
}

constexpr int kChunk = 256;  // fixed time-chunk width keeps results independent of thread count

// sum_q Re/Im(conj(U) .* Z) per column, accumulated into series segments.
void accumulate_real_series(const Eigen::MatrixXd& ure, const Eigen::MatrixXd& uim,
                            const Eigen::MatrixXd& zre, const Eigen::MatrixXd& zim,
                            Eigen::Ref<Eigen::VectorXd> out) {
  out.noalias() += (ure.cwiseProduct(zre) + uim.cwiseProduct(zim))
                       .colwise()
                       .sum()
                       .transpose();
}

}  // namespace

long SectorBasis::boson_dim() const {
  long b = 0;
  for (int m = 0; m <= max_total; ++m) b += comp_count(m);
  return b;
}

long SectorBasis::total_dim() const {
  long d = 0;
  for (int s = 0; s <= max_total; ++s) d += sector_dim(s);
  return d;
}

SectorBasis build_basis(int n_modes, int max_total) {
  if (n_modes < 1) throw ConfigError("build_basis: n_modes must be >= 1");
  if (max_total < 1) throw ConfigError("build_basis: max_total must be >= 1");
  if (max_total > 120) throw ConfigError("build_basis: max_total too large");
  SectorBasis basis;
  basis.n_modes = n_modes;
  basis.max_total = max_total;
  basis.comp.resize(static_cast<size_t>(max_total) + 1);
  long total = 0;
  for (int m = 0; m <= max_total; ++m) {
    const long long count = binomial(n_modes + m - 1, m);
    if (count > 2'000'000)
      throw ConfigError("build_basis: basis too large (reduce modes or max_total)");
    auto& comp = basis.comp[static_cast<size_t>(m)];
    comp.resize(static_cast<Eigen::Index>(count), n_modes);
    fill_compositions(n_modes, m, comp);
    total += count;
    if (total > 4'000'000)
      throw ConfigError("build_basis: basis too large (reduce modes or max_total)");
  }
  return basis;
}

std::vector<Eigen::MatrixXd> build_hamiltonian(const bath::DiscretizedBath& bath,
                                               const ModelParams& params,
                                               const SectorBasis& basis) {
  validate_model(params);
  const int n = basis.n_modes;
  if (bath.n_modes() != n)
    throw ConfigError("build_hamiltonian: bath and basis mode counts differ");
  std::vector<Eigen::MatrixXd> blocks(static_cast<size_t>(basis.max_total) + 1);
  std::vector<IndexMap> index(basis.comp.size());
  for (size_t m = 0; m < basis.comp.size(); ++m) index[m] = build_index(basis.comp[m]);

  for (int s = 0; s <= basis.max_total; ++s) {
    const int de = basis.excited_dim(s), dg = basis.ground_dim(s);
    const int d = de + dg;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
    const auto& ce = basis.comp[static_cast<size_t>(std::max(s - 1, 0))];
    const auto& cg = basis.comp[static_cast<size_t>(s)];
    for (int i = 0; i < de; ++i) {
      double e = 0.5 * params.omega;
      for (int k = 0; k < n; ++k) e += ce(i, k) * bath.omega[static_cast<size_t>(k)];
      h(i, i) = e;
    }
    for (int j = 0; j < dg; ++j) {
      double e = -0.5 * params.omega;
      for (int k = 0; k < n; ++k) e += cg(j, k) * bath.omega[static_cast<size_t>(k)];
      h(de + j, de + j) = e;
    }
    // (1, n) <-> (0, n + e_k) with element lambda g_k sqrt(n_k + 1).
    if (de > 0) {
      std::string key(static_cast<size_t>(n), '\0');
      for (int i = 0; i < de; ++i) {
        for (int k = 0; k < n; ++k)
          key[static_cast<size_t>(k)] = static_cast<char>(ce(i, k));
        for (int k = 0; k < n; ++k) {
          key[static_cast<size_t>(k)] = static_cast<char>(ce(i, k) + 1);
          const auto it = index[static_cast<size_t>(s)].find(key);
          key[static_cast<size_t>(k)] = static_cast<char>(ce(i, k));
          if (it == index[static_cast<size_t>(s)].end())
            throw SolverError("build_hamiltonian: missing raised configuration");
          const double v = params.lambda * bath.g[static_cast<size_t>(k)] *
                           std::sqrt(static_cast<double>(ce(i, k)) + 1.0);
          h(i, de + it->second) = v;
          h(de + it->second, i) = v;
        }
      }
    }
    blocks[static_cast<size_t>(s)] = std::move(h);
  }
  return blocks;
}

TruncationHealth thermal_truncation_health(const bath::DiscretizedBath& bath,
                                           double beta, int max_boson_total) {
  const int n = bath.n_modes();
  TruncationHealth h;
  h.mode_occupation = Eigen::VectorXd::Zero(n);
  h.mode_occupation_full = Eigen::VectorXd::Zero(n);
  if (std::isinf(beta)) return h;  // vacuum retains everything

  const int mp = max_boson_total;
  std::vector<double> x(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double w = bath.omega[static_cast<size_t>(k)];
    h.mode_occupation_full(k) = bath::thermal_occupation(w, beta);
    x[static_cast<size_t>(k)] = std::exp(-beta * w);
  }

  // z[j] = sum over configurations with total j of prod_k x_k^{n_k},
  // built mode by mode (polynomial product truncated at total mp).
  auto dp = [&](int skip) {
    std::vector<double> z(static_cast<size_t>(mp) + 1, 0.0);
    z[0] = 1.0;
    for (int k = 0; k < n; ++k) {
      if (k == skip) continue;
      std::vector<double> zn(static_cast<size_t>(mp) + 1, 0.0);
      for (int j = 0; j <= mp; ++j) {
        double pw = 1.0;
        for (int q = 0; q + j <= mp; ++q) {
          zn[static_cast<size_t>(j + q)] += z[static_cast<size_t>(j)] * pw;
          pw *= x[static_cast<size_t>(k)];
        }
      }
      z.swap(zn);
    }
    return z;
  };

  const std::vector<double> z_all = dp(-1);
  double z_tr = 0.0;
  for (double v : z_all) z_tr += v;
  double z_full = 1.0;
  for (int k = 0; k < n; ++k) z_full *= 1.0 / (1.0 - x[static_cast<size_t>(k)]);
  h.gibbs_weight = z_tr / z_full;

  double occ_sum = 0.0, occ_full_sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const std::vector<double> z_rest = dp(k);
    std::vector<double> cum(z_rest.size());
    double acc = 0.0;
    for (size_t j = 0; j < z_rest.size(); ++j) {
      acc += z_rest[j];
      cum[j] = acc;
    }
    double num = 0.0, pw = x[static_cast<size_t>(k)];
    for (int q = 1; q <= mp; ++q) {
      num += q * pw * cum[static_cast<size_t>(mp - q)];
      pw *= x[static_cast<size_t>(k)];
    }
    h.mode_occupation(k) = num / z_tr;
    occ_sum += h.mode_occupation(k);
    occ_full_sum += h.mode_occupation_full(k);
  }
  h.occupation_capture = occ_full_sum > 0.0 ? occ_sum / occ_full_sum : 1.0;
  return h;
}

SectorEngine::SectorEngine(const bath::DiscretizedBath& bath,
                           const ModelParams& params, const SectorBasis& basis,
                           int n_threads)
    : bath_(bath), params_(params), basis_(basis),
      n_threads_(std::max(1, n_threads)) {
  validate_model(params_);
  if (bath_.n_modes() != basis_.n_modes)
    throw ConfigError("SectorEngine: bath and basis mode counts differ");

  auto blocks = build_hamiltonian(bath_, params_, basis_);
  const int n_sec = basis_.max_total + 1;
  eig_.resize(static_cast<size_t>(n_sec));
  numerics::parallel_for(n_sec, n_threads_, [&](int s) {
    auto& sec = eig_[static_cast<size_t>(s)];
    sec.e0 = blocks[static_cast<size_t>(s)].diagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(blocks[static_cast<size_t>(s)]);
    if (es.info() != Eigen::Success)
      throw SolverError("SectorEngine: eigendecomposition failed");
    sec.V = es.eigenvectors();
    sec.lam = es.eigenvalues();
    blocks[static_cast<size_t>(s)].resize(0, 0);
  });

  // Initial thermal ensemble on boson totals <= M-1, renormalized.
  const int mp = basis_.max_total - 1;
  weights_.resize(static_cast<size_t>(mp) + 1);
  if (std::isinf(params_.beta)) {
    for (int m = 0; m <= mp; ++m)
      weights_[static_cast<size_t>(m)] =
          Eigen::VectorXd::Zero(basis_.comp_count(m));
    weights_[0](0) = 1.0;
  } else {
    double z = 0.0;
    for (int m = 0; m <= mp; ++m) {
      const auto& comp = basis_.comp[static_cast<size_t>(m)];
      Eigen::VectorXd w(comp.rows());
      for (int r = 0; r < comp.rows(); ++r) {
        double e = 0.0;
        for (int k = 0; k < basis_.n_modes; ++k)
          e += comp(r, k) * bath_.omega[static_cast<size_t>(k)];
        w(r) = std::exp(-params_.beta * e);
      }
      z += w.sum();
      weights_[static_cast<size_t>(m)] = std::move(w);
    }
    for (auto& w : weights_) w /= z;
  }
  health_ = thermal_truncation_health(bath_, params_.beta, mp);
}

MapCoefficients SectorEngine::map_coefficients(const Eigen::VectorXd& t_grid) const {
  const Eigen::Index nt = t_grid.size();
  if (nt < 1) throw ConfigError("map_coefficients: empty time grid");
  MapCoefficients mc;
  mc.t = t_grid;
  mc.alpha = Eigen::VectorXd::Zero(nt);
  mc.xi = Eigen::VectorXd::Zero(nt);
  mc.gamma = Eigen::VectorXd::Zero(nt);
  mc.zeta = Eigen::VectorXd::Zero(nt);
  Eigen::VectorXd eta_re = Eigen::VectorXd::Zero(nt);
  Eigen::VectorXd eta_im = Eigen::VectorXd::Zero(nt);

  const int n_chunks = static_cast<int>((nt + kChunk - 1) / kChunk);
  Eigen::MatrixXd vg_prev, ure_prev, uim_prev;

  for (int s = 0; s <= basis_.max_total; ++s) {
    const auto& sec = eig_[static_cast<size_t>(s)];
    const int de = basis_.excited_dim(s), dg = basis_.ground_dim(s);
    const int d = de + dg;
    const auto ve = sec.V.topRows(de);
    const auto vg = sec.V.bottomRows(dg);

    const bool has_ground_weight = s < basis_.max_total;  // ground initial state total s
    const bool has_excited_weight = s >= 1;                // excited initial state total s-1

    // Gram matrices of the qubit projectors and the weighted initial states.
    // Be and Bg are computed independently so that alpha + gamma = 1 and
    // xi + zeta = 1 remain genuine numerical cross-checks.
    Eigen::MatrixXd stack;  // rows: [C_alpha; C_gamma; C_xi; C_zeta] as present
    struct Slice { int row; Eigen::VectorXd* out; };
    std::vector<Slice> slices;
    int rows = 0;
    if (has_ground_weight) rows += 2 * d;
    if (has_excited_weight) rows += 2 * d;
    stack.resize(rows, d);
    int at = 0;
    if (has_ground_weight) {
      const auto& wg = weights_[static_cast<size_t>(s)];
      Eigen::MatrixXd gg = vg.transpose() * wg.asDiagonal() * vg;
      Eigen::MatrixXd bg = vg.transpose() * vg;
      Eigen::MatrixXd be = ve.transpose() * ve;
      stack.middleRows(at, d) = bg.cwiseProduct(gg);
      slices.push_back({at, &mc.alpha});
      at += d;
      stack.middleRows(at, d) = be.cwiseProduct(gg);
      slices.push_back({at, &mc.gamma});
      at += d;
    }
    if (has_excited_weight) {
      const auto& we = weights_[static_cast<size_t>(s - 1)];
      Eigen::MatrixXd ge = ve.transpose() * we.asDiagonal() * ve;
      Eigen::MatrixXd be = ve.transpose() * ve;
      Eigen::MatrixXd bg = vg.transpose() * vg;
      stack.middleRows(at, d) = be.cwiseProduct(ge);
      slices.push_back({at, &mc.xi});
      at += d;
      stack.middleRows(at, d) = bg.cwiseProduct(ge);
      slices.push_back({at, &mc.zeta});
      at += d;
    }

    Eigen::MatrixXd c_eta;
    if (has_excited_weight && vg_prev.size() > 0) {
      // Excited configurations of sector s and ground configurations of
      // sector s-1 share the same enumeration (boson totals s-1), so the
      // overlap rows align one-to-one.
      const auto& we = weights_[static_cast<size_t>(s - 1)];
      Eigen::MatrixXd smat = ve.transpose() * vg_prev;
      Eigen::MatrixXd tmat = ve.transpose() * we.asDiagonal() * vg_prev;
      c_eta = smat.cwiseProduct(tmat);
    }

    // Phase matrices U(q, k) = e^{-i lam_q t_k} over the grid.
    Eigen::MatrixXd ure(d, nt), uim(d, nt);
    numerics::parallel_for(n_chunks, n_threads_, [&](int c) {
      const Eigen::Index k0 = static_cast<Eigen::Index>(c) * kChunk;
      const Eigen::Index nb = std::min<Eigen::Index>(kChunk, nt - k0);
      for (Eigen::Index k = k0; k < k0 + nb; ++k) {
        const double t = t_grid(k);
        for (int q = 0; q < d; ++q) {
          const double ph = sec.lam(q) * t;
          ure(q, k) = std::cos(ph);
          uim(q, k) = -std::sin(ph);
        }
      }
    });

    numerics::parallel_for(n_chunks, n_threads_, [&](int c) {
      const Eigen::Index k0 = static_cast<Eigen::Index>(c) * kChunk;
      const Eigen::Index nb = std::min<Eigen::Index>(kChunk, nt - k0);
      const auto urc = ure.middleCols(k0, nb);
      const auto uic = uim.middleCols(k0, nb);
      if (stack.rows() > 0) {
        Eigen::MatrixXd zre = stack * urc;
        Eigen::MatrixXd zim = stack * uic;
        for (const auto& sl : slices) {
          accumulate_real_series(urc, uic, zre.middleRows(sl.row, d),
                                 zim.middleRows(sl.row, d),
                                 sl.out->segment(k0, nb));
        }
      }
      if (c_eta.size() > 0) {
        const auto upr = ure_prev.middleCols(k0, nb);
        const auto upi = uim_prev.middleCols(k0, nb);
        Eigen::MatrixXd zre = c_eta * upr;
        Eigen::MatrixXd zim = c_eta * upi;
        eta_re.segment(k0, nb) +=
            (urc.cwiseProduct(zre) + uic.cwiseProduct(zim)).colwise().sum().transpose();
        eta_im.segment(k0, nb) +=
            (urc.cwiseProduct(zim) - uic.cwiseProduct(zre)).colwise().sum().transpose();
      }
    });

    vg_prev = vg;
    ure_prev = std::move(ure);
    uim_prev = std::move(uim);
  }

  // eta carries the qubit rotating phase e^{-i Omega t}.
  mc.eta.resize(nt);
  for (Eigen::Index k = 0; k < nt; ++k) {
    const double ph = params_.omega * t_grid(k);
    const Complex rot(std::cos(ph), -std::sin(ph));
    mc.eta(k) = rot * Complex(eta_re(k), eta_im(k));
  }
  mc.D = mc.alpha + mc.xi - Eigen::VectorXd::Ones(nt);
  return mc;
}

OccupationSeries SectorEngine::occupations(double p_plus0,
                                           const Eigen::VectorXd& t_grid) const {
  const Eigen::Index nt = t_grid.size();
  const int n = basis_.n_modes;
  if (!(p_plus0 >= 0.0 && p_plus0 <= 1.0))
    throw ConfigError("occupations: p_plus0 must lie in [0, 1]");
  OccupationSeries out;
  out.t = t_grid;
  out.n = Eigen::MatrixXd::Zero(nt, n);
  const double p_minus0 = 1.0 - p_plus0;
  const int n_chunks = static_cast<int>((nt + kChunk - 1) / kChunk);

  for (int s = 0; s <= basis_.max_total; ++s) {
    const auto& sec = eig_[static_cast<size_t>(s)];
    const int de = basis_.excited_dim(s), dg = basis_.ground_dim(s);
    const int d = de + dg;
    const auto ve = sec.V.topRows(de);
    const auto vg = sec.V.bottomRows(dg);

    // Weighted initial-state Gram matrix for this sector.
    Eigen::MatrixXd gmix = Eigen::MatrixXd::Zero(d, d);
    bool any = false;
    if (s < basis_.max_total && p_minus0 > 0.0) {
      const auto& wg = weights_[static_cast<size_t>(s)];
      if (wg.sum() > 0.0) {
        gmix.noalias() += p_minus0 * (vg.transpose() * wg.asDiagonal() * vg);
        any = true;
      }
    }
    if (s >= 1 && p_plus0 > 0.0) {
      const auto& we = weights_[static_cast<size_t>(s - 1)];
      if (we.sum() > 0.0) {
        gmix.noalias() += p_plus0 * (ve.transpose() * we.asDiagonal() * ve);
        any = true;
      }
    }
    if (!any) continue;

    // Stack the mode-number contractions C_k = (V^T diag(occ_k) V) .* Gmix.
    Eigen::MatrixXd stack(static_cast<Eigen::Index>(n) * d, d);
    const auto& ce = basis_.comp[static_cast<size_t>(std::max(s - 1, 0))];
    const auto& cg = basis_.comp[static_cast<size_t>(s)];
    Eigen::VectorXd occ(d);
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < de; ++i) occ(i) = ce(i, k);
      for (int j = 0; j < dg; ++j) occ(de + j) = cg(j, k);
      Eigen::MatrixXd bnk = sec.V.transpose() * occ.asDiagonal() * sec.V;
      stack.middleRows(static_cast<Eigen::Index>(k) * d, d) =
          bnk.cwiseProduct(gmix);
    }

    Eigen::MatrixXd ure(d, nt), uim(d, nt);
    numerics::parallel_for(n_chunks, n_threads_, [&](int c) {
      const Eigen::Index k0 = static_cast<Eigen::Index>(c) * kChunk;
      const Eigen::Index nb = std::min<Eigen::Index>(kChunk, nt - k0);
      for (Eigen::Index k = k0; k < k0 + nb; ++k) {
        const double t = t_grid(k);
        for (int q = 0; q < d; ++q) {
          const double ph = sec.lam(q) * t;
          ure(q, k) = std::cos(ph);
          uim(q, k) = -std::sin(ph);
        }
      }
    });
    numerics::parallel_for(n_chunks, n_threads_, [&](int c) {
      const Eigen::Index k0 = static_cast<Eigen::Index>(c) * kChunk;
      const Eigen::Index nb = std::min<Eigen::Index>(kChunk, nt - k0);
      const auto urc = ure.middleCols(k0, nb);
      const auto uic = uim.middleCols(k0, nb);
      Eigen::MatrixXd zre = stack * urc;
      Eigen::MatrixXd zim = stack * uic;
      for (int k = 0; k < n; ++k) {
        out.n.block(k0, k, nb, 1).noalias() +=
            (urc.cwiseProduct(zre.middleRows(static_cast<Eigen::Index>(k) * d, d)) +
             uic.cwiseProduct(zim.middleRows(static_cast<Eigen::Index>(k) * d, d)))
                .colwise()
                .sum()
                .transpose();
      }
    });
  }
  return out;
}

ConditionedPropagators SectorEngine::propagate(double t) const {
  const long b = basis_.boson_dim();
  if (b > 4096)
    throw ConfigError("propagate: boson space too large for dense blocks");
  ConditionedPropagators p;
  p.pp = Eigen::MatrixXcd::Zero(b, b);
  p.mp = Eigen::MatrixXcd::Zero(b, b);
  p.mm = Eigen::MatrixXcd::Zero(b, b);
  p.pm = Eigen::MatrixXcd::Zero(b, b);

  std::vector<long> offset(static_cast<size_t>(basis_.max_total) + 1, 0);
  for (int m = 1; m <= basis_.max_total; ++m)
    offset[static_cast<size_t>(m)] =
        offset[static_cast<size_t>(m - 1)] + basis_.comp_count(m - 1);

  for (int s = 0; s <= basis_.max_total; ++s) {
    const auto& sec = eig_[static_cast<size_t>(s)];
    const int de = basis_.excited_dim(s), dg = basis_.ground_dim(s);
    const int d = de + dg;
    Eigen::VectorXcd phase(d);
    for (int q = 0; q < d; ++q)
      phase(q) = std::exp(Complex(0.0, -sec.lam(q) * t));
    Eigen::MatrixXcd u = sec.V * phase.asDiagonal() * sec.V.transpose();
    // interaction picture: left phases e^{+i e0 t}
    for (int r = 0; r < d; ++r)
      u.row(r) *= std::exp(Complex(0.0, sec.e0(r) * t));

    const long oe = (s >= 1) ? offset[static_cast<size_t>(s - 1)] : 0;
    const long og = offset[static_cast<size_t>(s)];
    if (de > 0) {
      p.pp.block(oe, oe, de, de) = u.topLeftCorner(de, de);
      p.mp.block(og, oe, dg, de) = u.bottomLeftCorner(dg, de);
      p.pm.block(oe, og, de, dg) = u.topRightCorner(de, dg);
    }
    p.mm.block(og, og, dg, dg) = u.bottomRightCorner(dg, dg);
  }
  return p;
}

ReservoirState SectorEngine::reservoir_state(const Eigen::Matrix2cd& rho_q0,
                                             double t) const {
  const long b = basis_.boson_dim();
  if (b > 1500)
    throw ConfigError("reservoir_state: boson space too large; use occupations()");
  if (std::abs(rho_q0.trace() - 1.0) > 1e-9)
    throw ConfigError("reservoir_state: initial qubit state must have unit trace");

  const ConditionedPropagators p = propagate(t);

  Eigen::VectorXd w = Eigen::VectorXd::Zero(b);
  {
    long at = 0;
    for (int m = 0; m <= basis_.max_total; ++m) {
      const int c = basis_.comp_count(m);
      if (m <= basis_.max_total - 1)
        w.segment(at, c) = weights_[static_cast<size_t>(m)];
      at += c;
    }
  }

  const Complex rpp = rho_q0(0, 0), rmm = rho_q0(1, 1), rpm = rho_q0(0, 1);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(b, b);
  auto add = [&](const Complex& c, const Eigen::MatrixXcd& l,
                 const Eigen::MatrixXcd& r) {
    if (std::abs(c) == 0.0) return;
    rho.noalias() += c * (l * w.asDiagonal() * r.adjoint());
  };
  add(rpp, p.pp, p.pp);
  add(rpp, p.mp, p.mp);
  add(rmm, p.pm, p.pm);
  add(rmm, p.mm, p.mm);
  add(rpm, p.pp, p.pm);
  add(rpm, p.mp, p.mm);
  add(std::conj(rpm), p.pm, p.pp);
  add(std::conj(rpm), p.mm, p.mp);

  ReservoirState out;
  out.rho = std::move(rho);
  out.occupation = Eigen::VectorXd::Zero(basis_.n_modes);
  long at = 0;
  for (int m = 0; m <= basis_.max_total; ++m) {
    const auto& comp = basis_.comp[static_cast<size_t>(m)];
    for (int r = 0; r < comp.rows(); ++r) {
      const double pop = out.rho(at + r, at + r).real();
      for (int k = 0; k < basis_.n_modes; ++k)
        out.occupation(k) += pop * comp(r, k);
    }
    at += comp.rows();
  }
  return out;
}

MapCoefficients map_coefficients(const bath::DiscretizedBath& bath,
                                 const ModelParams& params,
                                 const SectorBasis& basis,
                                 const Eigen::VectorXd& t_grid, int n_threads) {
  return SectorEngine(bath, params, basis, n_threads).map_coefficients(t_grid);
}

ConditionedPropagators propagate(const bath::DiscretizedBath& bath,
                                 const ModelParams& params,
                                 const SectorBasis& basis, double t) {
  return SectorEngine(bath, params, basis, 1).propagate(t);
}

}  // namespace spinboson::exact
