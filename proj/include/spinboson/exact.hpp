// exact.hpp — numerically exact dynamics of one qubit coupled to a
// discretized boson bath under the rotating-wave approximation.
//
// The Hamiltonian conserves the total excitation number (qubit bit plus
// boson quanta), so the Hilbert space splits into sectors of fixed total.
// Truncating to complete sectors with total <= max_total keeps the retained
// dynamics exactly unitary; the only truncation error is the thermal weight
// of discarded initial boson states.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spinboson/bath.hpp"
#include "spinboson/types.hpp"

namespace spinboson::exact {

// Occupation configurations grouped by total quanta. Within sector s the
// basis is ordered: qubit-excited states (boson totals s-1) first, then
// qubit-ground states (boson totals s), each block in the fixed enumeration
// order of compositions(m).
struct SectorBasis {
  int n_modes{0};
  int max_total{0};  // M, largest retained total excitation
  // comp[m]: (count x n_modes) matrix of boson occupations summing to m.
  std::vector<Eigen::MatrixXi> comp;

  int comp_count(int m) const {
    return (m < 0 || m > max_total) ? 0
                                    : static_cast<int>(comp[static_cast<size_t>(m)].rows());
  }
  int excited_dim(int s) const { return comp_count(s - 1); }
  int ground_dim(int s) const { return comp_count(s); }
  int sector_dim(int s) const { return excited_dim(s) + ground_dim(s); }
  // All boson configurations with total <= max_total.
  long boson_dim() const;
  long total_dim() const;
};

SectorBasis build_basis(int n_modes, int max_total);

// Dense sector blocks of H. Real symmetric; row/column order as in SectorBasis.
std::vector<Eigen::MatrixXd> build_hamiltonian(const bath::DiscretizedBath& bath,
                                               const ModelParams& params,
                                               const SectorBasis& basis);

struct SectorEigen {
  Eigen::MatrixXd V;    // orthonormal eigenvectors (columns)
  Eigen::VectorXd lam;  // eigenvalues
  Eigen::VectorXd e0;   // free (lambda = 0) energies of the basis states
};

// Exact map coefficients over a time grid. Populations evolve as
//   p+(t) = xi p+(0) + gamma p-(0),   p-(t) = zeta p+(0) + alpha p-(0),
// coherences as rho_+-(t) = eta* rho_+-(0), and D = alpha + xi - 1.
// alpha + gamma = 1 and xi + zeta = 1 hold exactly for unitary dynamics.
struct MapCoefficients {
  Eigen::VectorXd t;
  Eigen::VectorXd alpha;  // ground stays ground
  Eigen::VectorXd xi;     // excited stays excited
  Eigen::VectorXd gamma;  // ground -> excited (absorption)
  Eigen::VectorXd zeta;   // excited -> ground (emission)
  Eigen::VectorXcd eta;   // coherence amplitude <U_+^dag U_->
  Eigen::VectorXd D;      // alpha + xi - 1

  Eigen::Index size() const { return t.size(); }
};

// Health of the truncated thermal ensemble on boson totals <= max_boson_total.
struct TruncationHealth {
  double gibbs_weight{1.0};        // raw joint Gibbs weight retained
  double occupation_capture{1.0};  // <sum_k n_k> truncated / untruncated
  Eigen::VectorXd mode_occupation;       // truncated <n_k>
  Eigen::VectorXd mode_occupation_full;  // Bose-Einstein n(omega_k)
};

TruncationHealth thermal_truncation_health(const bath::DiscretizedBath& bath,
                                           double beta, int max_boson_total);

// Boson-space blocks of the interaction-picture propagator
// U_I(t) = e^{+i H_0 t} e^{-i H t}, conditioned on the qubit transition.
// Rows and columns are indexed by boson configurations with total <= M in
// enumeration order (sector totals ascending). Entries whose qubit-excited
// side would exceed total M are structurally zero.
struct ConditionedPropagators {
  Eigen::MatrixXcd pp;  // excited -> excited  (U_+)
  Eigen::MatrixXcd mp;  // excited -> ground   (emission amplitude)
  Eigen::MatrixXcd mm;  // ground  -> ground   (U_-)
  Eigen::MatrixXcd pm;  // ground  -> excited  (absorption amplitude)
};

// Mode occupations along the evolution for an initial product state
// (diagonal qubit state) x (truncated Gibbs ensemble).
struct OccupationSeries {
  Eigen::VectorXd t;
  Eigen::MatrixXd n;  // (grid points x modes), <n_k>(t)
};

struct ReservoirState {
  Eigen::MatrixXcd rho;      // reduced boson density matrix, boson_dim square
  Eigen::VectorXd occupation;  // <n_k>
};

// Diagonalizes every sector once and answers all time-domain queries from the
// cached eigenpairs.
class SectorEngine {
 public:
  SectorEngine(const bath::DiscretizedBath& bath, const ModelParams& params,
               const SectorBasis& basis, int n_threads = 1);

  const SectorBasis& basis() const { return basis_; }
  const ModelParams& params() const { return params_; }
  const bath::DiscretizedBath& bath() const { return bath_; }
  const SectorEigen& sector(int s) const {
    return eig_[static_cast<size_t>(s)];
  }
  const TruncationHealth& health() const { return health_; }

  // Exact thermal-average map coefficients over the grid.
  MapCoefficients map_coefficients(const Eigen::VectorXd& t_grid) const;

  // <n_k>(t) for initial qubit populations (p_plus, p_minus).
  OccupationSeries occupations(double p_plus0, const Eigen::VectorXd& t_grid) const;

  // Full conditioned propagator blocks at one time (small systems).
  ConditionedPropagators propagate(double t) const;

  // Reduced boson state at one time for an arbitrary initial qubit state
  // (small systems; cost is boson_dim^2 per block).
  ReservoirState reservoir_state(const Eigen::Matrix2cd& rho_q0, double t) const;

 private:
  bath::DiscretizedBath bath_;
  ModelParams params_;
  SectorBasis basis_;
  int n_threads_;
  std::vector<SectorEigen> eig_;
  // Gibbs weights of the compositions with total <= M-1, normalized to 1;
  // weights_[m](r) belongs to comp[m] row r. Vacuum: weight 1 on the empty
  // configuration.
  std::vector<Eigen::VectorXd> weights_;
  TruncationHealth health_;
};

// One-shot convenience wrappers.
MapCoefficients map_coefficients(const bath::DiscretizedBath& bath,
                                 const ModelParams& params,
                                 const SectorBasis& basis,
                                 const Eigen::VectorXd& t_grid,
                                 int n_threads = 1);

ConditionedPropagators propagate(const bath::DiscretizedBath& bath,
                                 const ModelParams& params,
                                 const SectorBasis& basis, double t);

}  // namespace spinboson::exact
