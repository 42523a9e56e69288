// config.hpp — strict INI-style scenario files: known sections and keys only,
// duplicate keys rejected, every diagnostic carrying file:line and the key.
#pragma once

#include <string>
#include <string_view>

#include "spinboson/cli/scenario.hpp"

namespace spinboson::cli {

// Parse a scenario from config text; `origin` labels diagnostics (file name).
Scenario parse_config_text(std::string_view text, const std::string& origin);

// Read and parse a config file; the scenario name is the file stem.
Scenario parse_config_file(const std::string& path);

}  // namespace spinboson::cli
