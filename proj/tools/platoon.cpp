#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "platoon/cli/commands.hpp"
#include "platoon/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Platoon robustness analysis, controller synthesis, topology search and simulation"};
  app.require_subcommand(1);

  std::string config;
  platoon::cli::RunOptions options;
  options.workers = platoon::default_workers();
  long long seed = 0;

  const std::pair<const char*, const char*> commands[] = {
      {"analyze", "gamma-gain scaling sweep to CSV"},
      {"synth", "LMI controller synthesis to JSON"},
      {"simulate", "time-domain simulation to CSV plus summary"},
      {"optimize", "link-budgeted topology search to JSON"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", options.out_dir, "output directory")->capture_default_str();
    sub->add_option("--workers", options.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "accepted for reproducibility; all commands are deterministic");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : platoon::cli::kInvalidConfig;
  }
  const auto* chosen = app.get_subcommands().front();
  if (chosen->count("--seed") > 0) options.seed = seed;
  return platoon::cli::run(chosen->get_name(), config, options, std::cout, std::cerr);
}
