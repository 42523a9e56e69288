// types.hpp — shared scalar types, model parameters, error hierarchy.
#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace spinboson {

using Complex = std::complex<double>;
inline constexpr Complex kI{0.0, 1.0};

// beta = infinity selects the vacuum reservoir state.
inline constexpr double kVacuumBeta = std::numeric_limits<double>::infinity();

// Qubit + boson bath in the rotating-wave approximation,
//   H = (Omega/2) sigma_z + sum_k omega_k a_k^dag a_k
//     + lambda * sum_k g_k (a_k^dag sigma_- + a_k sigma_+),
// with the qubit basis ordered {excited, ground}.
struct ModelParams {
  double omega{1.0};          // qubit level splitting, > 0
  double beta{kVacuumBeta};   // inverse temperature, > 0 or infinity (vacuum)
  double lambda{1.0};         // global coupling scale multiplying every g_k, >= 0
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when the truncated thermal ensemble cannot represent the requested
// reservoir state (occupation capture below the configured threshold).
struct TruncationError : std::runtime_error {
  explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

inline void validate_model(const ModelParams& p) {
  if (!(p.omega > 0.0)) throw ConfigError("ModelParams: omega must be > 0");
  if (!(p.beta > 0.0)) throw ConfigError("ModelParams: beta must be > 0 (use infinity for vacuum)");
  if (!(p.lambda >= 0.0)) throw ConfigError("ModelParams: lambda must be >= 0");
}

}  // namespace spinboson
