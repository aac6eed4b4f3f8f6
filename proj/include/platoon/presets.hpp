#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "platoon/simulator.hpp"
#include "platoon/topology.hpp"
#include "platoon/vehicle.hpp"

namespace platoon::presets {

/// Published LMI solution at tau = 0.5, gamma_d = 1.
inline constexpr double kBenchmarkAlpha = 1.968;
Eigen::Matrix3d benchmark_q();

/// Published feedback vector (kp, kv, ka) with the given coupling.
ControllerGains benchmark_gains(double coupling);

struct NamedTopology {
  std::string name;
  Topology topology;
};

/// Ten-follower benchmark set:
///   a  nearest-2 neighbours, follower 1 pinned
///   b  nearest-4 neighbours, follower 1 pinned
///   c  mini-platoons of sizes 5, 5
///   d  mini-platoons of sizes 3, 4, 3
std::vector<NamedTopology> benchmark_topologies();
/// Lookup by name ("a".."d"); empty when unknown.
std::optional<Topology> benchmark_topology(const std::string& name);

/// Heterogeneous ten-vehicle fleet (masses and lags per vehicle).
std::vector<NonlinearVehicleParams> heterogeneous_fleet();

/// Constant 20 m/s leader, every follower disturbed by sin(2 pi (t - 5) / 5)
/// on [5, 10), zero initial errors, 30 s horizon.
Scenario sine_disturbance_scenario();

/// Leader accelerates 20 -> 30 m/s over [5, 10] (2 m/s^2), 25 m gap, zero
/// initial errors, 40 s horizon.
Scenario leader_ramp_scenario();

/// Coupling alpha / min_i lambda_min over the benchmark set, so one gain
/// vector is certified on every benchmark topology at once.
double shared_benchmark_coupling();

/// Named scenario lookup ("sine-disturbance", "leader-ramp").
std::optional<Scenario> named_scenario(const std::string& name);

}  // namespace platoon::presets
