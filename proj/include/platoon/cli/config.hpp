#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "platoon/io.hpp"
#include "platoon/lmi.hpp"
#include "platoon/modal.hpp"
#include "platoon/optimizer.hpp"
#include "platoon/simulator.hpp"
#include "platoon/topology.hpp"
#include "platoon/vehicle.hpp"

namespace platoon::cli {

using io::Json;

/// Reads and parses a JSON file. Throws InvalidArgument on I/O or syntax errors.
Json load_json(const std::filesystem::path& path);

/// Topology from any of
///   {n, edges, pinned}
///   {preset: "a" | "b" | "c" | "d"}
///   {builder: "bd" | "bdl" | "star", n}
///   {builder: "h_neighbor", n, h, pinned}
///   {builder: "mini_platoons", sizes, intra_h, link_adjacent_blocks}
Topology parse_topology(const Json& value);

/// {type: "bd" | "bdl" | "star"} or {type: "h_neighbor", h, pinned}.
TopologyFamily parse_family(const Json& value);

struct AnalyzeConfig {
  std::vector<TopologyFamily> families;
  /// True when the config listed several families; each then gets its own CSV.
  bool multiple = false;
  std::vector<int> sizes;
  VehicleParams vehicle;
  ControllerGains gains;
};
AnalyzeConfig parse_analyze(const Json& value);

struct SynthConfig {
  LmiProblem problem;
  Topology topology;
  LmiSolverOptions solver;
};
SynthConfig parse_synth(const Json& value);

enum class SimModel { kLinear, kNonlinear };

struct SimulateConfig {
  SimModel model = SimModel::kLinear;
  Topology topology;
  Scenario scenario;
  VehicleParams vehicle;
  std::vector<NonlinearVehicleParams> fleet;
  ControllerGains gains;
  double dt = 0.01;
};
SimulateConfig parse_simulate(const Json& value);

struct OptimizeConfig {
  int n = 0;
  LinkBudget budget;
  /// Empty selects exhaustive for n <= 6 and greedy otherwise.
  std::optional<SearchMethod> method;
};
OptimizeConfig parse_optimize(const Json& value);

}  // namespace platoon::cli
