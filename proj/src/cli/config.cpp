#include "platoon/cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "platoon/errors.hpp"
#include "platoon/presets.hpp"

namespace platoon::cli {

using io::read_int;
using io::read_number;
using io::read_string;
using io::require_keys;

namespace {

std::vector<int> int_list(const Json& object, std::string_view key, std::string_view context) {
  const auto it = object.find(key);
  if (it == object.end()) throw InvalidArgument("missing " + std::string(context) + "." + std::string(key));
  if (!it->is_array()) throw InvalidArgument(std::string(context) + "." + std::string(key) + " must be an array");
  std::vector<int> out;
  for (const auto& v : *it) {
    if (!v.is_number_integer())
      throw InvalidArgument(std::string(context) + "." + std::string(key) + " entries must be integers");
    out.push_back(v.get<int>());
  }
  return out;
}

std::set<int> pinned_set(const Json& object, std::string_view context) {
  if (!object.contains("pinned")) return {1};
  const auto list = int_list(object, "pinned", context);
  return {list.begin(), list.end()};
}

VehicleParams parse_vehicle(const Json& value) {
  require_keys(value, {"tau"}, "vehicle");
  VehicleParams p;
  if (value.contains("tau")) p.tau = read_number(value, "tau", "vehicle");
  validate(p);
  return p;
}

// Overrides the fields present in `value`; `c` is optional so callers can derive it.
ControllerGains parse_gains(const Json& value, ControllerGains base) {
  require_keys(value, {"kp", "kv", "ka", "c"}, "gains");
  if (value.contains("kp")) base.kp = read_number(value, "kp", "gains");
  if (value.contains("kv")) base.kv = read_number(value, "kv", "gains");
  if (value.contains("ka")) base.ka = read_number(value, "ka", "gains");
  if (value.contains("c")) base.c = read_number(value, "c", "gains");
  return base;
}

NonlinearVehicleParams parse_nonlinear_vehicle(const Json& value) {
  require_keys(value,
               {"mass", "drag_coeff", "inertial_delay", "drive_efficiency", "tire_radius", "rolling_coeff", "gravity"},
               "fleet");
  NonlinearVehicleParams p;
  auto set = [&](const char* key, double& target) {
    if (value.contains(key)) target = read_number(value, key, "fleet");
  };
  set("mass", p.mass);
  set("drag_coeff", p.drag_coeff);
  set("inertial_delay", p.inertial_delay);
  set("drive_efficiency", p.drive_efficiency);
  set("tire_radius", p.tire_radius);
  set("rolling_coeff", p.rolling_coeff);
  set("gravity", p.gravity);
  validate(p);
  return p;
}

std::vector<NonlinearVehicleParams> parse_fleet(const Json& value) {
  if (value.is_string()) {
    if (value.get<std::string>() == "heterogeneous") return presets::heterogeneous_fleet();
    throw InvalidArgument("unknown fleet preset '" + value.get<std::string>() + "'");
  }
  if (!value.is_array()) throw InvalidArgument("fleet must be \"heterogeneous\" or an array of vehicles");
  std::vector<NonlinearVehicleParams> fleet;
  for (const auto& v : value) fleet.push_back(parse_nonlinear_vehicle(v));
  return fleet;
}

SearchMethod parse_method(const std::string& name) {
  if (name == "exhaustive") return SearchMethod::kExhaustive;
  if (name == "greedy") return SearchMethod::kGreedy;
  throw InvalidArgument("optimize.method must be \"exhaustive\", \"greedy\" or \"auto\"");
}

}  // namespace

Json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const Json::parse_error& e) {
    throw InvalidArgument("config " + path.string() + " is not valid JSON: " + e.what());
  }
}

Topology parse_topology(const Json& value) {
  if (!value.is_object()) throw InvalidArgument("topology must be a JSON object");
  if (value.contains("preset")) {
    require_keys(value, {"preset"}, "topology");
    const std::string name = read_string(value, "preset", "topology");
    auto t = presets::benchmark_topology(name);
    if (!t) throw InvalidArgument("unknown topology preset '" + name + "'");
    return *t;
  }
  if (value.contains("builder")) {
    const std::string builder = read_string(value, "builder", "topology");
    if (builder == "bd" || builder == "bdl" || builder == "star") {
      require_keys(value, {"builder", "n"}, "topology");
      const int n = read_int(value, "n", "topology");
      return builder == "bd" ? build_bd(n) : builder == "bdl" ? build_bdl(n) : build_star(n);
    }
    if (builder == "h_neighbor") {
      require_keys(value, {"builder", "n", "h", "pinned"}, "topology");
      return build_h_neighbor(read_int(value, "n", "topology"), read_int(value, "h", "topology"),
                              pinned_set(value, "topology"));
    }
    if (builder == "mini_platoons") {
      require_keys(value, {"builder", "sizes", "intra_h", "link_adjacent_blocks"}, "topology");
      MiniPlatoonOptions options;
      if (value.contains("intra_h")) options.intra_h = read_int(value, "intra_h", "topology");
      if (value.contains("link_adjacent_blocks")) {
        if (!value.at("link_adjacent_blocks").is_boolean())
          throw InvalidArgument("topology.link_adjacent_blocks must be a boolean");
        options.link_adjacent_blocks = value.at("link_adjacent_blocks").get<bool>();
      }
      return build_mini_platoons(int_list(value, "sizes", "topology"), options);
    }
    throw InvalidArgument("unknown topology builder '" + builder + "'");
  }
  return io::topology_from_json(value);
}

TopologyFamily parse_family(const Json& value) {
  if (!value.is_object()) throw InvalidArgument("family must be a JSON object");
  const std::string type = read_string(value, "type", "family");
  if (type == "bd" || type == "bdl" || type == "star") {
    require_keys(value, {"type"}, "family");
    return type == "bd" ? bd_family() : type == "bdl" ? bdl_family() : star_family();
  }
  if (type == "h_neighbor") {
    require_keys(value, {"type", "h", "pinned"}, "family");
    return h_neighbor_family(read_int(value, "h", "family"), pinned_set(value, "family"));
  }
  throw InvalidArgument("unknown family type '" + type + "'");
}

AnalyzeConfig parse_analyze(const Json& value) {
  require_keys(value, {"family", "sizes", "range", "vehicle", "gains"}, "analyze");
  AnalyzeConfig cfg;
  if (!value.contains("family")) throw InvalidArgument("missing analyze.family");
  const Json& fam = value.at("family");
  if (fam.is_array()) {
    if (fam.empty()) throw InvalidArgument("analyze.family must not be empty");
    cfg.multiple = true;
    for (const auto& f : fam) cfg.families.push_back(parse_family(f));
  } else {
    cfg.families.push_back(parse_family(fam));
  }

  if (value.contains("sizes") == value.contains("range"))
    throw InvalidArgument("analyze needs exactly one of sizes or range");
  if (value.contains("sizes")) {
    cfg.sizes = int_list(value, "sizes", "analyze");
  } else {
    const Json& r = value.at("range");
    require_keys(r, {"from", "to", "step"}, "analyze.range");
    const int from = read_int(r, "from", "analyze.range");
    const int to = read_int(r, "to", "analyze.range");
    const int step = r.contains("step") ? read_int(r, "step", "analyze.range") : 1;
    if (step < 1 || to < from) throw InvalidArgument("analyze.range needs from <= to and step >= 1");
    for (int n = from; n <= to; n += step) cfg.sizes.push_back(n);
  }
  if (cfg.sizes.empty()) throw InvalidArgument("analyze needs at least one size");
  for (int n : cfg.sizes)
    if (n < 1) throw InvalidArgument("analyze sizes must be positive");

  if (value.contains("vehicle")) cfg.vehicle = parse_vehicle(value.at("vehicle"));
  if (value.contains("gains")) cfg.gains = parse_gains(value.at("gains"), cfg.gains);
  validate(cfg.gains);
  return cfg;
}

SynthConfig parse_synth(const Json& value) {
  require_keys(value, {"tau", "gamma_d", "topology", "solver"}, "synth");
  LmiProblem problem;
  if (value.contains("tau")) problem.tau = read_number(value, "tau", "synth");
  if (value.contains("gamma_d")) problem.gamma_d = read_number(value, "gamma_d", "synth");
  validate(problem);
  if (!value.contains("topology")) throw InvalidArgument("missing synth.topology");
  SynthConfig cfg{problem, parse_topology(value.at("topology")), {}};
  if (!is_leader_reachable(cfg.topology))
    throw InvalidArgument("synth.topology does not reach every follower from the leader");
  if (value.contains("solver")) {
    const Json& s = value.at("solver");
    require_keys(s, {"min_margin", "trace_cap", "alpha_cap", "margin_fraction"}, "synth.solver");
    if (s.contains("min_margin")) cfg.solver.min_margin = read_number(s, "min_margin", "synth.solver");
    if (s.contains("trace_cap")) cfg.solver.trace_cap = read_number(s, "trace_cap", "synth.solver");
    if (s.contains("alpha_cap")) cfg.solver.alpha_cap = read_number(s, "alpha_cap", "synth.solver");
    if (s.contains("margin_fraction")) cfg.solver.margin_fraction = read_number(s, "margin_fraction", "synth.solver");
    if (!(cfg.solver.min_margin > 0) || !(cfg.solver.trace_cap > 0) || !(cfg.solver.margin_fraction > 0) ||
        !(cfg.solver.margin_fraction <= 1))
      throw InvalidArgument("synth.solver values out of range");
  }
  return cfg;
}

SimulateConfig parse_simulate(const Json& value) {
  require_keys(value, {"preset", "model", "topology", "scenario", "vehicle", "fleet", "gains", "alpha", "dt"},
               "simulate");
  if (!value.contains("topology")) throw InvalidArgument("missing simulate.topology");
  SimulateConfig cfg{SimModel::kLinear, parse_topology(value.at("topology")), {}, {}, {}, {}, 0.01};
  if (!is_leader_reachable(cfg.topology))
    throw InvalidArgument("simulate.topology does not reach every follower from the leader");
  const double lmin = lambda_min(cfg.topology);

  // Preset defaults, each overridable below.
  std::optional<double> coupling;
  bool have_scenario = false;
  if (value.contains("preset")) {
    const std::string preset = read_string(value, "preset", "simulate");
    if (preset == "sine-disturbance") {
      cfg.model = SimModel::kLinear;
      cfg.scenario = presets::sine_disturbance_scenario();
      cfg.gains = presets::benchmark_gains(presets::kBenchmarkAlpha / lmin);
    } else if (preset == "leader-ramp") {
      cfg.model = SimModel::kNonlinear;
      cfg.scenario = presets::leader_ramp_scenario();
      cfg.gains = presets::benchmark_gains(presets::shared_benchmark_coupling());
      cfg.fleet = presets::heterogeneous_fleet();
    } else {
      throw InvalidArgument("unknown simulate.preset '" + preset + "'");
    }
    have_scenario = true;
  }

  if (value.contains("model")) {
    const std::string model = read_string(value, "model", "simulate");
    if (model == "linear") {
      cfg.model = SimModel::kLinear;
    } else if (model == "nonlinear") {
      cfg.model = SimModel::kNonlinear;
    } else {
      throw InvalidArgument("simulate.model must be \"linear\" or \"nonlinear\"");
    }
  }
  if (value.contains("scenario")) {
    const Json& s = value.at("scenario");
    if (s.is_string()) {
      auto named = presets::named_scenario(s.get<std::string>());
      if (!named) throw InvalidArgument("unknown scenario '" + s.get<std::string>() + "'");
      cfg.scenario = *named;
    } else {
      cfg.scenario = io::scenario_from_json(s);
    }
    have_scenario = true;
  }
  if (!have_scenario) throw InvalidArgument("simulate needs a scenario or a preset");
  if (value.contains("vehicle")) cfg.vehicle = parse_vehicle(value.at("vehicle"));
  if (value.contains("fleet")) cfg.fleet = parse_fleet(value.at("fleet"));
  if (value.contains("gains")) cfg.gains = parse_gains(value.at("gains"), cfg.gains);
  if (value.contains("alpha")) {
    if (value.contains("gains") && value.at("gains").contains("c"))
      throw InvalidArgument("simulate accepts either gains.c or alpha, not both");
    const double alpha = read_number(value, "alpha", "simulate");
    if (!(alpha > 0)) throw InvalidArgument("simulate.alpha must be positive");
    cfg.gains.c = alpha / lmin;
  }
  if (value.contains("dt")) cfg.dt = read_number(value, "dt", "simulate");
  validate(cfg.gains);
  validate(cfg.scenario, cfg.topology.size());
  if (!(cfg.dt > 0)) throw InvalidArgument("simulate.dt must be positive");

  if (cfg.model == SimModel::kNonlinear) {
    if (cfg.fleet.empty()) throw InvalidArgument("nonlinear simulation needs simulate.fleet");
    if (static_cast<int>(cfg.fleet.size()) != cfg.topology.size())
      throw InvalidArgument("simulate.fleet size must equal the number of followers");
  } else {
    const auto kind = cfg.scenario.leader_velocity.kind();
    if (kind != Profile::Kind::kConstant && kind != Profile::Kind::kZero)
      throw InvalidArgument("the linear model needs a constant leader velocity");
    if (cfg.dt > cfg.vehicle.tau / 10.0) throw InvalidArgument("simulate.dt must not exceed tau / 10");
  }
  return cfg;
}

OptimizeConfig parse_optimize(const Json& value) {
  require_keys(value, {"n", "max_links", "method"}, "optimize");
  OptimizeConfig cfg;
  cfg.n = read_int(value, "n", "optimize");
  cfg.budget.max_links = read_int(value, "max_links", "optimize");
  if (cfg.n < 1) throw InvalidArgument("optimize.n must be positive");
  if (cfg.budget.max_links < 1) throw InvalidArgument("optimize.max_links must be at least 1");
  if (value.contains("method")) {
    const std::string m = read_string(value, "method", "optimize");
    if (m != "auto") cfg.method = parse_method(m);
  }
  if (cfg.method == SearchMethod::kExhaustive && cfg.n > 6)
    throw InvalidArgument("exhaustive search supports at most 6 followers");
  return cfg;
}

}  // namespace platoon::cli
