#include "platoon/presets.hpp"

#include <algorithm>
#include <limits>

namespace platoon::presets {

Eigen::Matrix3d benchmark_q() {
  Eigen::Matrix3d q;
  q << 0.669, -0.419, 0.006,
      -0.419, 0.606, -0.474,
       0.006, -0.474, 1.044;
  return q;
}

ControllerGains benchmark_gains(double coupling) { return {2.122, 3.425, 2.501, coupling}; }

std::vector<NamedTopology> benchmark_topologies() {
  return {
      {"a", build_h_neighbor(10, 2, {1})},
      {"b", build_h_neighbor(10, 4, {1})},
      {"c", build_mini_platoons({5, 5})},
      {"d", build_mini_platoons({3, 4, 3})},
  };
}

std::optional<Topology> benchmark_topology(const std::string& name) {
  for (auto& t : benchmark_topologies())
    if (t.name == name) return t.topology;
  return std::nullopt;
}

std::vector<NonlinearVehicleParams> heterogeneous_fleet() {
  constexpr double kMass[] = {2.81, 2.90, 2.12, 2.91, 2.63, 2.09, 2.27, 2.54, 2.95, 2.96};
  constexpr double kLag[] = {0.58, 0.59, 0.51, 0.59, 0.56, 0.50, 0.52, 0.55, 0.60, 0.60};
  std::vector<NonlinearVehicleParams> fleet;
  for (int i = 0; i < 10; ++i) {
    NonlinearVehicleParams p;
    p.mass = kMass[i] * 1e3;
    p.inertial_delay = kLag[i];
    fleet.push_back(p);
  }
  return fleet;
}

Scenario sine_disturbance_scenario() {
  Scenario s;
  s.leader_velocity = Profile::constant(20.0);
  s.disturbances = {Profile::sine_window(1.0, 5.0, 5.0, 10.0)};
  s.desired_gap = 25.0;
  s.horizon = 30.0;
  return s;
}

Scenario leader_ramp_scenario() {
  Scenario s;
  s.leader_velocity = Profile::ramp(20.0, 30.0, 5.0, 10.0);
  s.disturbances = {Profile::zero()};
  s.desired_gap = 25.0;
  s.horizon = 40.0;
  return s;
}

double shared_benchmark_coupling() {
  double lmin = std::numeric_limits<double>::infinity();
  for (const auto& t : benchmark_topologies()) lmin = std::min(lmin, lambda_min(t.topology));
  return kBenchmarkAlpha / lmin;
}

std::optional<Scenario> named_scenario(const std::string& name) {
  if (name == "sine-disturbance") return sine_disturbance_scenario();
  if (name == "leader-ramp") return leader_ramp_scenario();
  return std::nullopt;
}

}  // namespace platoon::presets
