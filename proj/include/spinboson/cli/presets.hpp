// presets.hpp — named ready-to-run scenarios, including every scenario the
// acceptance suite exercises.
#pragma once

#include <string>
#include <vector>

#include "spinboson/cli/scenario.hpp"

namespace spinboson::cli {

std::vector<std::string> preset_names();

// One-line description for listings.
std::string preset_description(const std::string& name);

// Throws ConfigError for unknown names.
Scenario preset(const std::string& name);

}  // namespace spinboson::cli
