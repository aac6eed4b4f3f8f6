#include "platoon/cli/commands.hpp"

#include <fstream>

#include "platoon/errors.hpp"
#include "platoon/io.hpp"

namespace platoon::cli {

namespace {

std::ofstream open_output(const RunOptions& options, const std::string& name) {
  std::filesystem::create_directories(options.out_dir);
  const auto path = options.out_dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_json(const RunOptions& options, const std::string& name, const Json& value) {
  auto out = open_output(options, name);
  out << value.dump(2) << '\n';
}

}  // namespace

int cmd_analyze(const AnalyzeConfig& config, const RunOptions& options, std::ostream& log) {
  for (std::size_t f = 0; f < config.families.size(); ++f) {
    const auto& family = config.families[f];
    const auto rows = scaling_sweep(family, config.sizes, config.vehicle, config.gains, options.workers);
    const std::string name =
        config.multiple ? "sweep_" + std::to_string(f + 1) + "_" + family.name + ".csv" : "sweep.csv";
    auto out = open_output(options, name);
    io::write_sweep_csv(out, rows);
    int unstable = 0;
    for (const auto& r : rows) unstable += r.stable ? 0 : 1;
    log << family.name << ": " << rows.size() << " rows -> " << (options.out_dir / name).string();
    if (unstable > 0) log << " (" << unstable << " unstable)";
    log << '\n';
  }
  return kSuccess;
}

int cmd_synth(const SynthConfig& config, const RunOptions& options, std::ostream& log) {
  const SynthesisResult result = synthesize(config.problem, spectrum(assemble(config.topology)), config.solver);
  write_json(options, "synthesis.json", io::to_json(result));
  double worst = 0.0;
  for (double v : result.verified_modal_norms) worst = std::max(worst, v);
  log << "k = (" << io::format_number(result.gains.kp) << ", " << io::format_number(result.gains.kv) << ", "
      << io::format_number(result.gains.ka) << "), alpha = " << io::format_number(result.certificate.alpha)
      << ", c = " << io::format_number(result.gains.c) << '\n'
      << "largest modal norm " << io::format_number(worst) << " < gamma_d = " << io::format_number(config.problem.gamma_d)
      << '\n';
  return kSuccess;
}

int cmd_simulate(const SimulateConfig& config, const RunOptions& options, std::ostream& log) {
  SimResult result;
  if (config.model == SimModel::kLinear) {
    const auto model = make_linear_model(config.vehicle, config.gains, assemble(config.topology));
    result = simulate_linear(model, config.scenario, config.dt);
  } else {
    result = simulate_nonlinear(config.fleet, config.gains, config.topology, config.scenario, config.dt);
  }
  {
    auto out = open_output(options, "simulation.csv");
    io::write_simulation_csv(out, result);
  }
  const double max_error = result.spacing_errors.size() > 0 ? result.spacing_errors.cwiseAbs().maxCoeff() : 0.0;
  Json summary{{"model", config.model == SimModel::kLinear ? "linear" : "nonlinear"},
               {"stable", result.stable},
               {"samples", result.time.size()},
               {"dt", config.dt},
               {"c", config.gains.c},
               {"max_abs_spacing_error", max_error},
               {"events", result.events}};
  summary["empirical_gain"] = result.empirical_gain ? Json(*result.empirical_gain) : Json(nullptr);
  summary["energy_ratio"] = result.energy_ratio ? Json(*result.energy_ratio) : Json(nullptr);
  write_json(options, "summary.json", summary);

  log << "samples " << result.time.size() << ", max |spacing error| " << io::format_number(max_error) << '\n';
  if (result.empirical_gain)
    log << "empirical gain " << io::format_number(*result.empirical_gain) << ", energy ratio "
        << io::format_number(*result.energy_ratio) << '\n';
  for (const auto& e : result.events) log << "event: " << e << '\n';
  if (!result.stable) {
    log << "simulation diverged\n";
    return kInfeasible;
  }
  return kSuccess;
}

int cmd_optimize(const OptimizeConfig& config, const RunOptions& options, std::ostream& log) {
  const SearchMethod method = config.method.value_or(config.n <= 6 ? SearchMethod::kExhaustive : SearchMethod::kGreedy);
  const OptimizationResult result = method == SearchMethod::kExhaustive
                                        ? optimize_exhaustive(config.n, config.budget, options.workers)
                                        : optimize_greedy(config.n, config.budget, options.workers);
  write_json(options, "topology.json", io::to_json(result));
  log << to_string(result.method) << ": lambda_min " << io::format_number(result.lambda_min) << " with "
      << result.links_used << " links (upper bound " << io::format_number(result.upper_bound) << ")\n";
  return kSuccess;
}

int run(const std::string& command, const std::filesystem::path& config_path, const RunOptions& options,
        std::ostream& log, std::ostream& err) {
  try {
    const Json config = load_json(config_path);
    if (command == "analyze") return cmd_analyze(parse_analyze(config), options, log);
    if (command == "synth") return cmd_synth(parse_synth(config), options, log);
    if (command == "simulate") return cmd_simulate(parse_simulate(config), options, log);
    if (command == "optimize") return cmd_optimize(parse_optimize(config), options, log);
    err << "unknown command '" << command << "'\n";
    return kInvalidConfig;
  } catch (const InvalidArgument& e) {
    err << "invalid config: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const Infeasible& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const NumericalFailure& e) {
    err << "verification failed: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace platoon::cli
