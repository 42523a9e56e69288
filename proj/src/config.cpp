#include "spinboson/cli/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>

namespace spinboson::cli {

namespace {

std::string_view trim(std::string_view v) {
  while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
  while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.remove_suffix(1);
  return v;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  std::ostringstream os;
  os << origin << ':' << line << ": " << msg;
  throw ConfigError(os.str());
}

struct Parser {
  Scenario s;
  const std::string& origin;
  int line{0};
  std::string key;  // section.key of the entry being parsed

  double number(std::string_view v) {
    std::string tmp(v);
    char* end = nullptr;
    const double x = std::strtod(tmp.c_str(), &end);
    if (end != tmp.c_str() + tmp.size() || tmp.empty())
      fail(origin, line, key + ": expected a number, got '" + tmp + "'");
    return x;
  }

  int integer(std::string_view v) {
    const double x = number(v);
    if (x != std::floor(x) || std::fabs(x) > 1e9)
      fail(origin, line, key + ": expected an integer, got '" + std::string(v) + "'");
    return static_cast<int>(x);
  }

  bool boolean(std::string_view v) {
    if (v == "true") return true;
    if (v == "false") return false;
    fail(origin, line, key + ": expected true or false, got '" + std::string(v) + "'");
  }

  template <typename T>
  T choice(std::string_view v, std::initializer_list<std::pair<std::string_view, T>> options) {
    for (const auto& [name, value] : options)
      if (v == name) return value;
    std::string all;
    for (const auto& [name, value] : options) {
      if (!all.empty()) all += ", ";
      all += name;
    }
    fail(origin, line, key + ": expected one of {" + all + "}, got '" + std::string(v) + "'");
  }

  void assign(std::string_view v) {
    using SF = bath::SpectralFamily;
    using CS = bath::CutoffShape;
    using DS = bath::DiscretizationScheme;
    if (key == "model.omega") s.omega = number(v);
    else if (key == "model.beta")
      s.beta = (v == "vacuum") ? kVacuumBeta : number(v);
    else if (key == "model.lambda") s.lambda = number(v);
    else if (key == "bath.family")
      s.family = choice<SF>(v, {{"ohmic-family", SF::Ohmic},
                                {"flat-band", SF::FlatBand},
                                {"single-mode", SF::SingleMode}});
    else if (key == "bath.scale") s.scale = number(v);
    else if (key == "bath.exponent") s.exponent = number(v);
    else if (key == "bath.omega_c") s.omega_c = number(v);
    else if (key == "bath.cutoff_shape")
      s.cutoff = choice<CS>(v, {{"exponential", CS::Exponential}, {"hard", CS::Hard}});
    else if (key == "bath.j0") s.j0 = number(v);
    else if (key == "bath.omega_lo") s.band_lo = number(v);
    else if (key == "bath.omega_hi") s.band_hi = number(v);
    else if (key == "bath.g2") s.g2 = number(v);
    else if (key == "bath.omega0") s.omega0 = number(v);
    else if (key == "discretization.modes") s.modes = integer(v);
    else if (key == "discretization.scheme")
      s.scheme = choice<DS>(v, {{"midpoint", DS::Midpoint},
                                {"gauss-legendre", DS::GaussLegendre}});
    else if (key == "discretization.window_lo") s.window_lo = number(v);
    else if (key == "discretization.window_hi") s.window_hi = number(v);
    else if (key == "discretization.modes2") s.modes2 = integer(v);
    else if (key == "discretization.window2_lo") s.window2_lo = number(v);
    else if (key == "discretization.window2_hi") s.window2_hi = number(v);
    else if (key == "truncation.max_total") s.max_total = integer(v);
    else if (key == "truncation.check_convergence") s.check_convergence = boolean(v);
    else if (key == "truncation.occupation_capture_min") s.occupation_capture_min = number(v);
    else if (key == "truncation.gibbs_weight_warn") s.gibbs_weight_warn = number(v);
    else if (key == "grid.t_max") s.t_max = number(v);
    else if (key == "grid.steps") s.steps = integer(v);
    else if (key == "initial.state")
      s.initial = choice<InitialState>(v, {{"excited", InitialState::Excited},
                                           {"ground", InitialState::Ground},
                                           {"plus", InitialState::Plus},
                                           {"thermal", InitialState::Thermal}});
    else if (key == "rates.d_min") s.d_min = number(v);
    else if (key == "rates.eta_min") s.eta_min = number(v);
    else if (key == "rates.ode_d_min") s.ode_d_min = number(v);
    else if (key == "survival.dt") s.survival_dt = number(v);
    else if (key == "survival.store_stride") s.store_stride = integer(v);
    else if (key == "survival.track_norm") s.track_norm = boolean(v);
    else if (key == "survival.tail_fit_lo") s.tail_fit_lo = number(v);
    else if (key == "survival.tail_fit_hi") s.tail_fit_hi = number(v);
    else if (key == "pipeline.kind")
      s.kind = choice<PipelineKind>(v, {{"map", PipelineKind::Map},
                                        {"gkls", PipelineKind::Gkls},
                                        {"equilibrium", PipelineKind::Equilibrium},
                                        {"collapse", PipelineKind::Collapse},
                                        {"survival", PipelineKind::Survival}});
    else if (key == "pipeline.occupations") s.occupations = boolean(v);
    else if (key == "pipeline.occupation_stride") s.occupation_stride = integer(v);
    else if (key == "pipeline.collapse_lambda_scale") s.collapse_lambda_scale = number(v);
    else if (key == "pipeline.collapse_time_scale") s.collapse_time_scale = number(v);
    else
      fail(origin, line, "unknown key '" + key + "'");
  }
};

const std::set<std::string, std::less<>> kSections = {
    "model",      "bath",    "discretization", "truncation", "grid",
    "initial",    "rates",   "survival",       "pipeline"};

}  // namespace

Scenario parse_config_text(std::string_view text, const std::string& origin) {
  Parser p{Scenario{}, origin, 0, {}};
  std::string section;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++p.line;
    std::string_view sv(raw);
    if (const auto pos = sv.find_first_of("#;"); pos != std::string_view::npos)
      sv = sv.substr(0, pos);
    sv = trim(sv);
    if (sv.empty()) continue;
    if (sv.front() == '[') {
      if (sv.back() != ']') fail(origin, p.line, "malformed section header");
      section = std::string(trim(sv.substr(1, sv.size() - 2)));
      if (kSections.find(section) == kSections.end())
        fail(origin, p.line, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = sv.find('=');
    if (eq == std::string_view::npos)
      fail(origin, p.line, "expected key = value");
    if (section.empty())
      fail(origin, p.line, "key outside any [section]");
    const std::string name(trim(sv.substr(0, eq)));
    if (name.empty()) fail(origin, p.line, "empty key");
    p.key = section + "." + name;
    if (!seen.insert(p.key).second)
      fail(origin, p.line, "duplicate key '" + p.key + "'");
    p.assign(trim(sv.substr(eq + 1)));
  }
  return p.s;
}

Scenario parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  Scenario s = parse_config_text(buf.str(), path);
  s.name = std::filesystem::path(path).stem().string();
  return s;
}

}  // namespace spinboson::cli
