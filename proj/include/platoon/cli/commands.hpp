#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "platoon/cli/config.hpp"

namespace platoon::cli {

enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,
  kInvalidConfig = 2,
  kInfeasible = 3,
};

struct RunOptions {
  std::filesystem::path out_dir = ".";
  unsigned workers = 1;
  /// Accepted for interface stability; every command is deterministic.
  std::optional<long long> seed;
};

// Each command writes its files under options.out_dir and a short summary to `log`.
int cmd_analyze(const AnalyzeConfig& config, const RunOptions& options, std::ostream& log);
int cmd_synth(const SynthConfig& config, const RunOptions& options, std::ostream& log);
int cmd_simulate(const SimulateConfig& config, const RunOptions& options, std::ostream& log);
int cmd_optimize(const OptimizeConfig& config, const RunOptions& options, std::ostream& log);

/// Loads the config, dispatches on `command` and maps errors to exit codes:
/// invalid config 2, infeasible or unstable 3, anything else 1.
int run(const std::string& command, const std::filesystem::path& config_path, const RunOptions& options,
        std::ostream& log, std::ostream& err);

}  // namespace platoon::cli
