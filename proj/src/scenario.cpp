#include "spinboson/cli/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "spinboson/exact.hpp"
#include "spinboson/thermo.hpp"

namespace spinboson::cli {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void err(std::vector<Issue>& out, std::string key, std::string msg) {
  out.push_back({Issue::Severity::Error, std::move(key), std::move(msg)});
}

void warn(std::vector<Issue>& out, std::string key, std::string msg) {
  out.push_back({Issue::Severity::Warning, std::move(key), std::move(msg)});
}

bool uses_engine(PipelineKind k) { return k != PipelineKind::Survival; }

}  // namespace

const char* to_string(PipelineKind k) {
  switch (k) {
    case PipelineKind::Map: return "map";
    case PipelineKind::Gkls: return "gkls";
    case PipelineKind::Equilibrium: return "equilibrium";
    case PipelineKind::Collapse: return "collapse";
    case PipelineKind::Survival: return "survival";
  }
  return "?";
}

const char* to_string(InitialState s) {
  switch (s) {
    case InitialState::Excited: return "excited";
    case InitialState::Ground: return "ground";
    case InitialState::Plus: return "plus";
    case InitialState::Thermal: return "thermal";
  }
  return "?";
}

const char* to_string(bath::SpectralFamily f) {
  switch (f) {
    case bath::SpectralFamily::Ohmic: return "ohmic-family";
    case bath::SpectralFamily::FlatBand: return "flat-band";
    case bath::SpectralFamily::SingleMode: return "single-mode";
  }
  return "?";
}

const char* to_string(bath::CutoffShape c) {
  return c == bath::CutoffShape::Exponential ? "exponential" : "hard";
}

const char* to_string(bath::DiscretizationScheme d) {
  return d == bath::DiscretizationScheme::Midpoint ? "midpoint" : "gauss-legendre";
}

bath::SpectralDensity spectral_density(const Scenario& s) {
  switch (s.family) {
    case bath::SpectralFamily::Ohmic:
      return bath::SpectralDensity::ohmic(s.scale, s.exponent, s.omega_c, s.cutoff);
    case bath::SpectralFamily::FlatBand:
      return bath::SpectralDensity::flat_band(s.j0, s.band_lo, s.band_hi);
    case bath::SpectralFamily::SingleMode:
      return bath::SpectralDensity::single_mode(s.g2, s.omega0);
  }
  throw ConfigError("bath.family: unknown spectral family");
}

bath::DiscretizedBath discretized_bath(const Scenario& s) {
  const bath::SpectralDensity J = spectral_density(s);
  bath::DiscretizedBath b =
      bath::discretize(J, s.modes, s.scheme, s.window_lo, s.window_hi);
  if (s.modes2 > 0) {
    const bath::DiscretizedBath b2 =
        bath::discretize(J, s.modes2, s.scheme, s.window2_lo, s.window2_hi);
    b.omega.insert(b.omega.end(), b2.omega.begin(), b2.omega.end());
    b.g.insert(b.g.end(), b2.g.begin(), b2.g.end());
    b.window_lo = std::min(b.window_lo, b2.window_lo);
    b.window_hi = std::max(b.window_hi, b2.window_hi);
  }
  return b;
}

std::pair<double, Complex> initial_qubit_state(const Scenario& s) {
  switch (s.initial) {
    case InitialState::Excited: return {1.0, 0.0};
    case InitialState::Ground: return {0.0, 0.0};
    case InitialState::Plus: return {0.5, 0.5};
    case InitialState::Thermal:
      return {thermo::asymptotic_excited_population(s.beta, s.omega), 0.0};
  }
  throw ConfigError("initial.state: unknown initial state");
}

std::vector<Issue> validate_scenario(const Scenario& s) {
  std::vector<Issue> out;

  if (!(s.omega > 0.0)) err(out, "model.omega", "must be > 0");
  if (!(s.beta > 0.0)) err(out, "model.beta", "must be > 0 or vacuum");
  if (!(s.lambda >= 0.0)) err(out, "model.lambda", "must be >= 0");

  switch (s.family) {
    case bath::SpectralFamily::Ohmic:
      if (!(s.scale > 0.0)) err(out, "bath.scale", "must be > 0");
      if (!(s.exponent > 0.0)) err(out, "bath.exponent", "must be > 0");
      if (!(s.omega_c > 0.0)) err(out, "bath.omega_c", "must be > 0");
      break;
    case bath::SpectralFamily::FlatBand:
      if (!(s.j0 > 0.0)) err(out, "bath.j0", "must be > 0");
      if (!(s.band_lo >= 0.0)) err(out, "bath.omega_lo", "must be >= 0");
      if (!(s.band_hi > s.band_lo)) err(out, "bath.omega_hi", "must exceed bath.omega_lo");
      break;
    case bath::SpectralFamily::SingleMode:
      if (!(s.g2 > 0.0)) err(out, "bath.g2", "must be > 0");
      if (!(s.omega0 > 0.0)) err(out, "bath.omega0", "must be > 0");
      if (s.modes != 1)
        err(out, "discretization.modes", "single-mode density requires modes = 1");
      break;
  }

  if (s.modes < 1) err(out, "discretization.modes", "must be >= 1");
  const bool window_set = s.window_lo >= 0.0 || s.window_hi >= 0.0;
  if (window_set && !(s.window_lo >= 0.0 && s.window_hi > s.window_lo))
    err(out, "discretization.window_hi", "window needs 0 <= window_lo < window_hi");
  if (s.modes2 < 0) err(out, "discretization.modes2", "must be >= 0");
  if (s.modes2 > 0) {
    if (s.family == bath::SpectralFamily::SingleMode)
      err(out, "discretization.modes2", "single-mode density has no second panel");
    if (!(s.window2_lo >= 0.0 && s.window2_hi > s.window2_lo))
      err(out, "discretization.window2_hi",
          "second panel needs 0 <= window2_lo < window2_hi");
    else if (window_set && s.window2_lo < s.window_hi && s.window2_hi > s.window_lo)
      err(out, "discretization.window2_lo", "panels must not overlap");
  }

  if (s.max_total < 1) err(out, "truncation.max_total", "must be >= 1");
  if (!(s.occupation_capture_min >= 0.0 && s.occupation_capture_min <= 1.0))
    err(out, "truncation.occupation_capture_min", "must lie in [0, 1]");
  if (!(s.gibbs_weight_warn > 0.0 && s.gibbs_weight_warn <= 1.0))
    err(out, "truncation.gibbs_weight_warn", "must lie in (0, 1]");

  if (!(s.t_max > 0.0)) err(out, "grid.t_max", "must be > 0");
  if (s.steps < 2) err(out, "grid.steps", "must be >= 2");

  if (!(s.d_min > 0.0)) err(out, "rates.d_min", "must be > 0");
  if (!(s.eta_min > 0.0)) err(out, "rates.eta_min", "must be > 0");
  if (!(s.ode_d_min > 0.0)) err(out, "rates.ode_d_min", "must be > 0");

  if (s.kind == PipelineKind::Survival) {
    if (!(s.survival_dt > 0.0)) err(out, "survival.dt", "must be > 0");
    if (s.store_stride < 1) err(out, "survival.store_stride", "must be >= 1");
    const bool fit_set = s.tail_fit_lo != 0.0 || s.tail_fit_hi != 0.0;
    if (fit_set && !(s.tail_fit_lo > 0.0 && s.tail_fit_hi > s.tail_fit_lo))
      err(out, "survival.tail_fit_hi", "fit window needs 0 < tail_fit_lo < tail_fit_hi");
    if (std::isfinite(s.beta))
      err(out, "model.beta",
          "the survival pipeline describes a vacuum reservoir; set beta = vacuum");
  } else {
    if (s.occupation_stride < 1) err(out, "pipeline.occupation_stride", "must be >= 1");
    if (s.kind == PipelineKind::Equilibrium && !std::isfinite(s.beta))
      err(out, "model.beta",
          "the equilibrium pipeline compares against thermal values; set a finite beta");
  }
  if (s.kind == PipelineKind::Collapse) {
    if (!(s.collapse_lambda_scale > 0.0 && s.collapse_lambda_scale < 1.0))
      err(out, "pipeline.collapse_lambda_scale", "must lie in (0, 1)");
    if (!(s.collapse_time_scale > 0.0))
      err(out, "pipeline.collapse_time_scale", "must be > 0");
    if (!(s.lambda > 0.0))
      err(out, "model.lambda", "collapse comparison needs lambda > 0");
  }

  if (has_errors(out)) return out;

  // Truncation health for thermal engine runs, without any dynamics.
  if (uses_engine(s.kind) && std::isfinite(s.beta)) {
    bath::DiscretizedBath b;
    try {
      b = discretized_bath(s);
    } catch (const ConfigError& e) {
      err(out, "discretization", e.what());
      return out;
    }
    for (double w : b.omega)
      if (!(w > 0.0)) {
        err(out, "discretization.window_lo",
            "thermal occupation diverges at a nonpositive mode frequency; "
            "choose a window bounded away from 0");
        return out;
      }
    // The initial thermal ensemble occupies boson totals <= max_total - 1,
    // matching the health the engine itself reports.
    const auto health =
        exact::thermal_truncation_health(b, s.beta, s.max_total - 1);
    if (health.gibbs_weight < s.gibbs_weight_warn) {
      std::ostringstream os;
      os << "truncated Gibbs weight " << health.gibbs_weight << " at max_total = "
         << s.max_total << " is below " << s.gibbs_weight_warn
         << "; thermal averages carry the missing tail";
      warn(out, "truncation.max_total", os.str());
    }
    if (health.occupation_capture < s.occupation_capture_min) {
      std::ostringstream os;
      os << "occupation capture " << health.occupation_capture << " at max_total = "
         << s.max_total << " is below the configured minimum "
         << s.occupation_capture_min << "; run would abort";
      warn(out, "truncation.max_total", os.str());
    }
  }
  return out;
}

std::string canonical_config(const Scenario& s) {
  std::ostringstream os;
  auto kv = [&os](const char* key, const std::string& v) { os << key << '=' << v << '\n'; };
  kv("pipeline.kind", to_string(s.kind));
  kv("model.omega", fmt(s.omega));
  kv("model.beta", std::isfinite(s.beta) ? fmt(s.beta) : "vacuum");
  kv("model.lambda", fmt(s.lambda));
  kv("bath.family", to_string(s.family));
  switch (s.family) {
    case bath::SpectralFamily::Ohmic:
      kv("bath.scale", fmt(s.scale));
      kv("bath.exponent", fmt(s.exponent));
      kv("bath.omega_c", fmt(s.omega_c));
      kv("bath.cutoff_shape", to_string(s.cutoff));
      break;
    case bath::SpectralFamily::FlatBand:
      kv("bath.j0", fmt(s.j0));
      kv("bath.omega_lo", fmt(s.band_lo));
      kv("bath.omega_hi", fmt(s.band_hi));
      break;
    case bath::SpectralFamily::SingleMode:
      kv("bath.g2", fmt(s.g2));
      kv("bath.omega0", fmt(s.omega0));
      break;
  }
  if (s.kind == PipelineKind::Survival) {
    kv("grid.t_max", fmt(s.t_max));
    kv("survival.dt", fmt(s.survival_dt));
    kv("survival.store_stride", fmt(s.store_stride));
    kv("survival.track_norm", s.track_norm ? "true" : "false");
    kv("survival.tail_fit_lo", fmt(s.tail_fit_lo));
    kv("survival.tail_fit_hi", fmt(s.tail_fit_hi));
    return os.str();
  }
  if (s.family != bath::SpectralFamily::SingleMode) {
    kv("discretization.modes", fmt(s.modes));
    kv("discretization.scheme", to_string(s.scheme));
    kv("discretization.window_lo", fmt(s.window_lo));
    kv("discretization.window_hi", fmt(s.window_hi));
    if (s.modes2 > 0) {
      kv("discretization.modes2", fmt(s.modes2));
      kv("discretization.window2_lo", fmt(s.window2_lo));
      kv("discretization.window2_hi", fmt(s.window2_hi));
    }
  }
  kv("truncation.max_total", fmt(s.max_total));
  kv("truncation.check_convergence", s.check_convergence ? "true" : "false");
  kv("truncation.occupation_capture_min", fmt(s.occupation_capture_min));
  kv("truncation.gibbs_weight_warn", fmt(s.gibbs_weight_warn));
  kv("grid.t_max", fmt(s.t_max));
  kv("grid.steps", fmt(s.steps));
  kv("initial.state", to_string(s.initial));
  if (s.kind != PipelineKind::Map) {
    kv("rates.d_min", fmt(s.d_min));
    kv("rates.eta_min", fmt(s.eta_min));
  }
  if (s.kind == PipelineKind::Gkls) kv("rates.ode_d_min", fmt(s.ode_d_min));
  kv("pipeline.occupations", s.occupations ? "true" : "false");
  if (s.occupations) kv("pipeline.occupation_stride", fmt(s.occupation_stride));
  if (s.kind == PipelineKind::Collapse) {
    kv("pipeline.collapse_lambda_scale", fmt(s.collapse_lambda_scale));
    kv("pipeline.collapse_time_scale", fmt(s.collapse_time_scale));
  }
  return os.str();
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string config_hash(const Scenario& s) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_config(s))));
  return buf;
}

}  // namespace spinboson::cli
