#include "spinboson/cli/presets.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace spinboson::cli {

namespace {

// beta for beta * Omega = ln 2 at Omega = 1, i.e. n(Omega) = 1.
constexpr double kBetaLn2 = 0.69314718055994531;

Scenario thermal_base() {
  Scenario s;
  s.omega = 1.0;
  s.beta = kBetaLn2;
  s.lambda = 0.17;
  s.family = bath::SpectralFamily::Ohmic;
  s.scale = 0.3;
  s.exponent = 1.0;
  s.omega_c = 5.0;
  s.modes = 4;
  s.scheme = bath::DiscretizationScheme::Midpoint;
  s.window_lo = 0.8;
  s.window_hi = 1.2;
  s.max_total = 14;
  s.t_max = 42.0;
  s.steps = 1680;
  s.initial = InitialState::Excited;
  s.kind = PipelineKind::Equilibrium;
  return s;
}

Scenario survival_base() {
  Scenario s;
  s.beta = kVacuumBeta;
  s.lambda = 1.0;
  s.kind = PipelineKind::Survival;
  s.track_norm = true;
  return s;
}

struct Entry {
  const char* name;
  const char* description;
  std::function<Scenario()> build;
};

const Entry kPresets[] = {
    {"jc-vacuum-resonant",
     "single resonant mode, vacuum: Rabi oscillations and the tangent rate",
     [] {
       Scenario s;
       s.omega = 1.0;
       s.beta = kVacuumBeta;
       s.lambda = 1.0;
       s.family = bath::SpectralFamily::SingleMode;
       s.g2 = 0.25;
       s.omega0 = 1.0;
       s.modes = 1;
       s.max_total = 1;
       s.t_max = 6.0;
       s.steps = 1200;
       s.initial = InitialState::Excited;
       s.kind = PipelineKind::Gkls;
       return s;
     }},
    {"ohmic-thermal",
     "Ohmic bath at beta*Omega = ln 2, excited start: thermalization diagnostics",
     [] {
       Scenario s = thermal_base();
       s.check_convergence = true;
       return s;
     }},
    {"ohmic-thermal-stationary",
     "stationary-qubit start with a detuned probe mode tracking bath return",
     [] {
       Scenario s = thermal_base();
       s.initial = InitialState::Thermal;
       s.occupations = true;
       s.occupation_stride = 4;
       // Resonant trio drives the slow relaxation clock; the far-detuned
       // probe exchanges virtually on the fast 2 pi / detuning scale.
       s.modes = 3;
       s.window_lo = 0.85;
       s.window_hi = 1.15;
       s.modes2 = 1;
       s.window2_lo = 1.5;
       s.window2_hi = 2.5;
       s.max_total = 13;
       return s;
     }},
    {"ohmic-collapse",
     "lambda versus lambda/2 population curves on the lambda^2 t axis",
     [] {
       Scenario s = thermal_base();
       s.kind = PipelineKind::Collapse;
       s.collapse_lambda_scale = 0.5;
       s.collapse_time_scale = 4.0;
       // Scaled-time collapse needs bath memory short against relaxation,
       // which a narrow thermal window cannot deliver. A vacuum run over a
       // wide band keeps the memory time at 2 pi / bandwidth ~ 2 while the
       // single-excitation sector makes 56 modes cheap; the spacing puts the
       // revival at 2 pi / 0.0536 ~ 117, past the half-coupling horizon 88.
       s.beta = std::numeric_limits<double>::infinity();
       s.lambda = 0.25;
       s.modes = 56;
       s.window_lo = 0.0;
       s.window_hi = 3.0;
       s.max_total = 1;
       s.t_max = 22.0;
       s.steps = 880;
       return s;
     }},
    {"flat-weak-survival",
     "wide flat band, weak coupling: exponential decay and the cut sum rule",
     [] {
       Scenario s = survival_base();
       s.omega = 2.0;
       s.family = bath::SpectralFamily::FlatBand;
       s.j0 = 0.01;
       s.band_lo = 0.0;
       s.band_hi = 20.0;
       s.survival_dt = 2e-3;
       s.t_max = 100.0;
       s.store_stride = 25;
       return s;
     }},
    {"ohmic-strong-survival",
     "strong coupling with a bound state: survival plateau at the pole weight",
     [] {
       Scenario s = survival_base();
       s.omega = 1.0;
       s.family = bath::SpectralFamily::Ohmic;
       s.scale = 2.0;
       s.exponent = 1.0;
       s.omega_c = 1.0;
       s.survival_dt = 2.5e-3;
       s.t_max = 80.0;
       s.store_stride = 20;
       return s;
     }},
    {"ohmic-tail-survival",
     "weak Ohmic coupling: 1/t^2 survival tail and its fitted exponent",
     [] {
       Scenario s = survival_base();
       s.omega = 1.0;
       s.family = bath::SpectralFamily::Ohmic;
       s.scale = 0.4;
       s.exponent = 1.0;
       s.omega_c = 1.0;
       s.survival_dt = 2e-3;
       s.t_max = 95.0;
       s.store_stride = 10;
       s.tail_fit_lo = 30.0;
       s.tail_fit_hi = 90.0;
       return s;
     }},
    {"demo-small",
     "three thermal modes, small truncation: the full pipeline in seconds",
     [] {
       Scenario s;
       s.omega = 1.0;
       s.beta = kBetaLn2;
       s.lambda = 0.25;
       s.family = bath::SpectralFamily::Ohmic;
       s.scale = 0.3;
       s.exponent = 1.0;
       s.omega_c = 5.0;
       s.modes = 3;
       s.scheme = bath::DiscretizationScheme::Midpoint;
       s.window_lo = 0.7;
       s.window_hi = 1.3;
       s.max_total = 10;
       s.occupation_capture_min = 0.85;
       s.t_max = 30.0;
       s.steps = 600;
       s.initial = InitialState::Excited;
       s.kind = PipelineKind::Equilibrium;
       s.occupations = true;
       s.occupation_stride = 2;
       return s;
     }},
};

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& e : kPresets) names.emplace_back(e.name);
  return names;
}

std::string preset_description(const std::string& name) {
  for (const auto& e : kPresets)
    if (name == e.name) return e.description;
  throw ConfigError("unknown preset '" + name + "'");
}

Scenario preset(const std::string& name) {
  for (const auto& e : kPresets)
    if (name == e.name) {
      Scenario s = e.build();
      s.name = name;
      return s;
    }
  throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace spinboson::cli
