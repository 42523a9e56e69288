// runner.hpp — scenario orchestration: validate, compute the requested
// pipeline, and write its artifact files plus manifest.json.
#pragma once

#include <string>
#include <vector>

#include "spinboson/cli/scenario.hpp"
#include "spinboson/cli/serialize.hpp"

namespace spinboson::cli {

struct RunOptions {
  std::string out_dir{"out"};
  OutputFormat format{OutputFormat::Csv};
  int threads{1};
};

struct RunResult {
  std::vector<std::string> files;  // written file names, manifest.json last
  std::vector<Issue> warnings;
};

// Throws ConfigError, TruncationError, or SolverError; nothing is written
// unless the whole pipeline succeeded.
RunResult run_scenario(const Scenario& s, const RunOptions& opt);

}  // namespace spinboson::cli
