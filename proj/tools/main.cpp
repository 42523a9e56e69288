// spinboson command line tool.
//
// Subcommands:
//   run       execute a scenario from a config file or a named preset
//   validate  check a scenario and print diagnostics without running it
//   presets   list the named scenarios shipped with the tool
//
// Exit codes: 0 success, 2 configuration error, 3 truncation error,
// 4 solver error, 1 any other failure.

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "spinboson/cli/config.hpp"
#include "spinboson/cli/presets.hpp"
#include "spinboson/cli/runner.hpp"
#include "spinboson/cli/scenario.hpp"
#include "spinboson/types.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitTruncation = 3;
constexpr int kExitSolver = 4;

std::string default_out_dir() {
  if (const char* env = std::getenv("SPINBOSON_OUT"); env != nullptr && *env != '\0')
    return std::string(env);
  return "out";
}

struct SourceFlags {
  std::string config_path;
  std::string preset_name;
};

void add_source_flags(CLI::App& cmd, SourceFlags& src) {
  auto* cfg = cmd.add_option("--config", src.config_path, "path to a scenario config file");
  auto* pre = cmd.add_option("--preset", src.preset_name, "name of a built-in scenario");
  cfg->excludes(pre);
  pre->excludes(cfg);
}

spinboson::cli::Scenario load_scenario(const SourceFlags& src) {
  if (!src.config_path.empty()) return spinboson::cli::parse_config_file(src.config_path);
  if (!src.preset_name.empty()) return spinboson::cli::preset(src.preset_name);
  throw spinboson::ConfigError("one of --config or --preset is required");
}

void print_issues(const std::vector<spinboson::cli::Issue>& issues) {
  for (const auto& issue : issues) {
    const char* label =
        issue.severity == spinboson::cli::Issue::Severity::Error ? "error" : "warning";
    std::cerr << label << ": " << issue.key << ": " << issue.message << "\n";
  }
}

int run_command(const SourceFlags& src, const spinboson::cli::RunOptions& opt) {
  const spinboson::cli::Scenario scenario = load_scenario(src);
  const spinboson::cli::RunResult result = spinboson::cli::run_scenario(scenario, opt);
  print_issues(result.warnings);
  for (const auto& f : result.files) std::cout << f << "\n";
  return kExitOk;
}

int validate_command(const SourceFlags& src) {
  const spinboson::cli::Scenario scenario = load_scenario(src);
  const auto issues = spinboson::cli::validate_scenario(scenario);
  print_issues(issues);
  if (spinboson::cli::has_errors(issues)) return kExitConfig;
  std::cout << "ok: " << (scenario.name.empty() ? "scenario" : scenario.name)
            << " (config hash " << spinboson::cli::config_hash(scenario) << ")\n";
  return kExitOk;
}

int presets_command() {
  for (const auto& name : spinboson::cli::preset_names())
    std::cout << name << "\n    " << spinboson::cli::preset_description(name) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  // The tool is fully deterministic; --seedless is accepted only as a bare
  // flag so scripted pipelines that pass it everywhere keep working, and any
  // attempt to attach a value to it is rejected before normal parsing.
  for (int i = 1; i < argc; ++i) {
    if (std::strncmp(argv[i], "--seedless=", 11) == 0) {
      std::cerr << "error: --seedless takes no value (there is no random number "
                   "generator to seed)\n";
      return kExitConfig;
    }
  }

  CLI::App app{"spin-boson qubit dynamics toolkit"};
  app.require_subcommand(1);

  SourceFlags run_src;
  spinboson::cli::RunOptions run_opt;
  run_opt.out_dir = default_out_dir();
  std::string format_name = "csv";
  bool seedless = false;

  auto* run_cmd = app.add_subcommand("run", "execute a scenario and write its artifacts");
  add_source_flags(*run_cmd, run_src);
  run_cmd->add_option("--out", run_opt.out_dir,
                      "output directory (default: $SPINBOSON_OUT or ./out)");
  run_cmd->add_option("--format", format_name, "artifact format")
      ->check(CLI::IsMember({"csv", "json"}));
  run_cmd->add_option("--threads", run_opt.threads, "worker thread count")
      ->check(CLI::PositiveNumber);
  run_cmd->add_flag("--seedless", seedless,
                    "no-op compatibility flag; the tool never uses randomness");

  SourceFlags validate_src;
  auto* validate_cmd =
      app.add_subcommand("validate", "check a scenario and report problems");
  add_source_flags(*validate_cmd, validate_src);

  auto* presets_cmd = app.add_subcommand("presets", "list built-in scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (run_cmd->parsed()) {
      run_opt.format = format_name == "json" ? spinboson::cli::OutputFormat::Json
                                             : spinboson::cli::OutputFormat::Csv;
      return run_command(run_src, run_opt);
    }
    if (validate_cmd->parsed()) return validate_command(validate_src);
    if (presets_cmd->parsed()) return presets_command();
    std::cerr << "error: no subcommand selected\n";
    return kExitConfig;
  } catch (const spinboson::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const spinboson::TruncationError& e) {
    std::cerr << "truncation error: " << e.what() << "\n";
    return kExitTruncation;
  } catch (const spinboson::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
}
