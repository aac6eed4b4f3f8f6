#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "platoon/lmi.hpp"
#include "platoon/modal.hpp"
#include "platoon/optimizer.hpp"
#include "platoon/simulator.hpp"
#include "platoon/topology.hpp"

namespace platoon::io {

using Json = nlohmann::json;

/// Throws InvalidArgument unless `value` is an object whose keys all appear in `allowed`.
void require_keys(const Json& value, std::initializer_list<std::string_view> allowed, std::string_view context);

/// Typed field readers that raise InvalidArgument naming `context.key`.
double read_number(const Json& object, std::string_view key, std::string_view context);
int read_int(const Json& object, std::string_view key, std::string_view context);
std::string read_string(const Json& object, std::string_view key, std::string_view context);

/// {n, edges: [[i, j], ...], pinned: [i, ...]} with 1-based followers.
Json to_json(const Topology& topology);
Topology topology_from_json(const Json& value);

/// {Q, alpha, margin, k: [kp, kv, ka], c, lambda_min, modal_norms, gamma_d, tau}.
Json to_json(const SynthesisResult& result);

/// Topology fields plus {lambda_min, links_used, method, upper_bound}.
Json to_json(const OptimizationResult& result);

/// {type: "zero"} | {type: "constant", value} |
/// {type: "ramp", from, to, t_start, t_end} |
/// {type: "sine_window", amplitude, period, t_start, t_end}
Json to_json(const Profile& profile);
Profile profile_from_json(const Json& value);

/// {leader_velocity, disturbance (profile or one per follower), desired_gap,
///  horizon, initial_errors: [[p, v, a], ...]}; every key optional.
Json to_json(const Scenario& scenario);
Scenario scenario_from_json(const Json& value);

/// 9 significant digits, "inf" / "-inf" / "nan" for non-finite values.
std::string format_number(double value);

/// Header N,gamma,lower_bound,lambda_min,stable.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Header t,err_p_1..N,err_v_1..N,u_1..N.
void write_simulation_csv(std::ostream& out, const SimResult& result);

}  // namespace platoon::io
