#include "platoon/io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "platoon/errors.hpp"

namespace platoon::io {

namespace {

std::string field(std::string_view context, std::string_view key) {
  return std::string(context) + "." + std::string(key);
}

const Json& member(const Json& object, std::string_view key, std::string_view context) {
  const auto it = object.find(key);
  if (it == object.end()) throw InvalidArgument("missing " + field(context, key));
  return *it;
}

double as_number(const Json& v, const std::string& name) {
  if (!v.is_number()) throw InvalidArgument(name + " must be a number");
  return v.get<double>();
}

int as_int(const Json& v, const std::string& name) {
  if (!v.is_number_integer()) throw InvalidArgument(name + " must be an integer");
  return v.get<int>();
}

double optional_number(const Json& object, std::string_view key, std::string_view context, double fallback) {
  return object.contains(key) ? read_number(object, key, context) : fallback;
}

}  // namespace

void require_keys(const Json& value, std::initializer_list<std::string_view> allowed, std::string_view context) {
  if (!value.is_object()) throw InvalidArgument(std::string(context) + " must be a JSON object");
  for (const auto& [key, _] : value.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw InvalidArgument("unknown key " + field(context, key));
  }
}

double read_number(const Json& object, std::string_view key, std::string_view context) {
  return as_number(member(object, key, context), field(context, key));
}

int read_int(const Json& object, std::string_view key, std::string_view context) {
  return as_int(member(object, key, context), field(context, key));
}

std::string read_string(const Json& object, std::string_view key, std::string_view context) {
  const Json& v = member(object, key, context);
  if (!v.is_string()) throw InvalidArgument(field(context, key) + " must be a string");
  return v.get<std::string>();
}

// ---------------------------------------------------------------- topology

Json to_json(const Topology& topology) {
  Json edges = Json::array();
  for (const auto& [i, j] : topology.edges()) edges.push_back({i, j});
  return Json{{"n", topology.size()}, {"edges", edges}, {"pinned", topology.pinned()}};
}

Topology topology_from_json(const Json& value) {
  require_keys(value, {"n", "edges", "pinned"}, "topology");
  const int n = read_int(value, "n", "topology");
  std::vector<std::pair<int, int>> edges;
  if (value.contains("edges")) {
    const Json& list = value.at("edges");
    if (!list.is_array()) throw InvalidArgument("topology.edges must be an array");
    for (const auto& e : list) {
      if (!e.is_array() || e.size() != 2) throw InvalidArgument("topology.edges entries must be [i, j] pairs");
      edges.emplace_back(as_int(e[0], "topology.edges"), as_int(e[1], "topology.edges"));
    }
  }
  const Json& pins = member(value, "pinned", "topology");
  if (!pins.is_array()) throw InvalidArgument("topology.pinned must be an array");
  std::vector<int> pinned;
  for (const auto& p : pins) pinned.push_back(as_int(p, "topology.pinned"));
  return Topology::from_edges(n, edges, pinned);
}

// ---------------------------------------------------------------- results

Json to_json(const SynthesisResult& r) {
  Json q = Json::array();
  for (int i = 0; i < 3; ++i) q.push_back({r.certificate.Q(i, 0), r.certificate.Q(i, 1), r.certificate.Q(i, 2)});
  return Json{{"Q", q},
              {"alpha", r.certificate.alpha},
              {"margin", r.certificate.margin},
              {"k", {r.gains.kp, r.gains.kv, r.gains.ka}},
              {"c", r.gains.c},
              {"lambda_min", r.lambda_min},
              {"modal_norms", r.verified_modal_norms},
              {"gamma_d", r.gamma_d},
              {"tau", r.tau}};
}

Json to_json(const OptimizationResult& r) {
  Json j = to_json(r.best);
  j["lambda_min"] = r.lambda_min;
  j["links_used"] = r.links_used;
  j["method"] = to_string(r.method);
  j["upper_bound"] = r.upper_bound;
  return j;
}

// ---------------------------------------------------------------- profiles

Json to_json(const Profile& profile) {
  const auto& p = profile.params();
  switch (profile.kind()) {
    case Profile::Kind::kZero:
      return Json{{"type", "zero"}};
    case Profile::Kind::kConstant:
      return Json{{"type", "constant"}, {"value", p[0]}};
    case Profile::Kind::kRamp:
      return Json{{"type", "ramp"}, {"from", p[0]}, {"to", p[1]}, {"t_start", p[2]}, {"t_end", p[3]}};
    case Profile::Kind::kSineWindow:
      return Json{{"type", "sine_window"}, {"amplitude", p[0]}, {"period", p[1]}, {"t_start", p[2]}, {"t_end", p[3]}};
  }
  return {};
}

Profile profile_from_json(const Json& value) {
  if (!value.is_object()) throw InvalidArgument("profile must be a JSON object");
  const std::string type = read_string(value, "type", "profile");
  if (type == "zero") {
    require_keys(value, {"type"}, "profile");
    return Profile::zero();
  }
  if (type == "constant") {
    require_keys(value, {"type", "value"}, "profile");
    return Profile::constant(read_number(value, "value", "profile"));
  }
  if (type == "ramp") {
    require_keys(value, {"type", "from", "to", "t_start", "t_end"}, "profile");
    return Profile::ramp(read_number(value, "from", "profile"), read_number(value, "to", "profile"),
                         read_number(value, "t_start", "profile"), read_number(value, "t_end", "profile"));
  }
  if (type == "sine_window") {
    require_keys(value, {"type", "amplitude", "period", "t_start", "t_end"}, "profile");
    return Profile::sine_window(read_number(value, "amplitude", "profile"), read_number(value, "period", "profile"),
                                read_number(value, "t_start", "profile"), read_number(value, "t_end", "profile"));
  }
  throw InvalidArgument("unknown profile type '" + type + "'");
}

// ---------------------------------------------------------------- scenario

Json to_json(const Scenario& s) {
  Json j;
  j["leader_velocity"] = to_json(s.leader_velocity);
  if (s.disturbances.size() == 1) {
    j["disturbance"] = to_json(s.disturbances.front());
  } else {
    Json list = Json::array();
    for (const auto& d : s.disturbances) list.push_back(to_json(d));
    j["disturbance"] = list;
  }
  j["desired_gap"] = s.desired_gap;
  j["horizon"] = s.horizon;
  Json errors = Json::array();
  for (const auto& e : s.initial_errors) errors.push_back({e(0), e(1), e(2)});
  j["initial_errors"] = errors;
  return j;
}

Scenario scenario_from_json(const Json& value) {
  require_keys(value, {"leader_velocity", "disturbance", "desired_gap", "horizon", "initial_errors"}, "scenario");
  Scenario s;
  if (value.contains("leader_velocity")) s.leader_velocity = profile_from_json(value.at("leader_velocity"));
  if (value.contains("disturbance")) {
    const Json& d = value.at("disturbance");
    if (d.is_array()) {
      if (d.empty()) throw InvalidArgument("scenario.disturbance must not be empty");
      s.disturbances.clear();
      for (const auto& p : d) s.disturbances.push_back(profile_from_json(p));
    } else {
      s.disturbances = {profile_from_json(d)};
    }
  }
  s.desired_gap = optional_number(value, "desired_gap", "scenario", s.desired_gap);
  s.horizon = optional_number(value, "horizon", "scenario", s.horizon);
  if (value.contains("initial_errors")) {
    const Json& list = value.at("initial_errors");
    if (!list.is_array()) throw InvalidArgument("scenario.initial_errors must be an array");
    for (const auto& e : list) {
      if (!e.is_array() || e.size() != 3) throw InvalidArgument("scenario.initial_errors entries must be [p, v, a]");
      s.initial_errors.emplace_back(as_number(e[0], "scenario.initial_errors"),
                                    as_number(e[1], "scenario.initial_errors"),
                                    as_number(e[2], "scenario.initial_errors"));
    }
  }
  if (!(s.horizon > 0)) throw InvalidArgument("scenario.horizon must be positive");
  if (!(s.desired_gap > 0)) throw InvalidArgument("scenario.desired_gap must be positive");
  return s;
}

// ---------------------------------------------------------------- CSV

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "N,gamma,lower_bound,lambda_min,stable\n";
  for (const auto& r : rows)
    out << r.n << ',' << format_number(r.stable ? r.gamma : std::numeric_limits<double>::infinity()) << ','
        << format_number(r.lower_bound) << ',' << format_number(r.lambda_min) << ',' << (r.stable ? 1 : 0) << '\n';
}

void write_simulation_csv(std::ostream& out, const SimResult& r) {
  const auto n = r.spacing_errors.rows();
  out << 't';
  for (Eigen::Index i = 1; i <= n; ++i) out << ",err_p_" << i;
  for (Eigen::Index i = 1; i <= n; ++i) out << ",err_v_" << i;
  for (Eigen::Index i = 1; i <= n; ++i) out << ",u_" << i;
  out << '\n';
  for (Eigen::Index k = 0; k < r.time.size(); ++k) {
    out << format_number(r.time(k));
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_number(r.spacing_errors(i, k));
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_number(r.velocity_errors(i, k));
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_number(r.controls(i, k));
    out << '\n';
  }
}

}  // namespace platoon::io
