// scenario.hpp — the declarative run description: everything a batch run needs,
// with fail-fast validation, canonical serialization and a stable content hash.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinboson/bath.hpp"
#include "spinboson/types.hpp"

namespace spinboson::cli {

enum class PipelineKind { Map, Gkls, Equilibrium, Collapse, Survival };
enum class InitialState { Excited, Ground, Plus, Thermal };

struct Scenario {
  // [model]
  double omega{1.0};
  double beta{kVacuumBeta};  // inf encodes the vacuum reservoir
  double lambda{1.0};

  // [bath]
  bath::SpectralFamily family{bath::SpectralFamily::Ohmic};
  double scale{1.0};
  double exponent{1.0};
  double omega_c{1.0};
  bath::CutoffShape cutoff{bath::CutoffShape::Exponential};
  double j0{0.0};
  double band_lo{0.0};
  double band_hi{0.0};
  double g2{0.0};
  double omega0{0.0};

  // [discretization]
  int modes{1};
  bath::DiscretizationScheme scheme{bath::DiscretizationScheme::Midpoint};
  double window_lo{-1.0};  // negative: use the family default window
  double window_hi{-1.0};
  // Optional second panel for composite layouts, e.g. a resonant cluster
  // plus an off-resonant probe mode; 0 modes means no second panel.
  int modes2{0};
  double window2_lo{0.0};
  double window2_hi{0.0};

  // [truncation]
  int max_total{1};
  bool check_convergence{false};
  double occupation_capture_min{0.9};
  double gibbs_weight_warn{0.999};

  // [grid]
  double t_max{10.0};
  int steps{400};

  // [initial]
  InitialState initial{InitialState::Excited};

  // [rates]
  double d_min{1e-6};
  double eta_min{1e-12};
  // The generator carries a 1/D singularity where the map loses
  // invertibility, so the ODE cross-check stops once D drops to this level.
  double ode_d_min{1e-2};

  // [survival]
  double survival_dt{2e-3};
  int store_stride{1};
  bool track_norm{true};
  double tail_fit_lo{0.0};  // both zero: skip the tail fit
  double tail_fit_hi{0.0};

  // [pipeline]
  PipelineKind kind{PipelineKind::Map};
  bool occupations{false};
  int occupation_stride{1};
  double collapse_lambda_scale{0.5};
  double collapse_time_scale{4.0};

  // Provenance label (preset name or config file stem); not part of the hash.
  std::string name{};
};

struct Issue {
  enum class Severity { Error, Warning };
  Severity severity{Severity::Error};
  std::string key;
  std::string message;
};

// Full precondition check, including the truncation-health estimate for
// thermal scenarios (computed without running any dynamics). Warnings do not
// block a run; errors do.
std::vector<Issue> validate_scenario(const Scenario& s);

inline bool has_errors(const std::vector<Issue>& issues) {
  for (const auto& i : issues)
    if (i.severity == Issue::Severity::Error) return true;
  return false;
}

// Canonical key=value serialization in a fixed field order with 17-digit
// floats. Semantically identical scenarios produce identical text no matter
// how the config file was formatted; the hash below is FNV-1a 64 of it.
std::string canonical_config(const Scenario& s);
std::uint64_t fnv1a64(std::string_view text);
std::string config_hash(const Scenario& s);

// Builders for the module inputs described by the scenario.
bath::SpectralDensity spectral_density(const Scenario& s);
bath::DiscretizedBath discretized_bath(const Scenario& s);

// Initial qubit state as (p_plus, rho_plus_minus).
std::pair<double, Complex> initial_qubit_state(const Scenario& s);

const char* to_string(PipelineKind k);
const char* to_string(InitialState s);
const char* to_string(bath::SpectralFamily f);
const char* to_string(bath::CutoffShape c);
const char* to_string(bath::DiscretizationScheme d);

}  // namespace spinboson::cli
