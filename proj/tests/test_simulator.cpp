#include <doctest.h>

#include <numbers>
#include <vector>

#include "platoon/errors.hpp"
#include "platoon/presets.hpp"
#include "platoon/simulator.hpp"

using namespace platoon;

namespace {

// Composite trapezoid split at the profile breakpoints so jumps do not bias it.
double trapezoid(const Profile& p, double a, double b, const std::vector<double>& breaks, int n = 200000) {
  std::vector<double> knots{a};
  for (double x : breaks)
    if (x > a && x < b) knots.push_back(x);
  knots.push_back(b);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double lo = knots[i], hi = knots[i + 1], h = (hi - lo) / n;
    // One-sided limits at the knots.
    double s = 0.5 * (p.value(lo + 1e-12) + p.value(hi - 1e-12));
    for (int k = 1; k < n; ++k) s += p.value(lo + k * h);
    total += s * h;
  }
  return total;
}

LinearPlatoonModel benchmark_model(const Topology& t) {
  return make_linear_model({0.5}, presets::benchmark_gains(presets::kBenchmarkAlpha / lambda_min(t)), assemble(t));
}

}  // namespace

TEST_CASE("profile integrals match quadrature") {
  const std::pair<Profile, std::vector<double>> profiles[] = {
      {Profile::constant(20.0), {}},
      {Profile::ramp(20.0, 30.0, 5.0, 10.0), {5.0, 10.0}},
      {Profile::sine_window(1.0, 5.0, 5.0, 10.0), {5.0, 10.0}},
      {Profile::sine_window(2.0, 3.0, 1.0, 8.0), {1.0, 8.0}}};
  for (const auto& [p, breaks] : profiles)
    for (double t : {0.0, 3.0, 6.5, 10.0, 17.0})
      CHECK(p.integral(t) == doctest::Approx(trapezoid(p, 0.0, t, breaks)).epsilon(1e-7));
}

TEST_CASE("profile values and derivatives") {
  const Profile ramp = Profile::ramp(20.0, 30.0, 5.0, 10.0);
  CHECK(ramp.value(0.0) == 20.0);
  CHECK(ramp.value(7.5) == 25.0);
  CHECK(ramp.value(12.0) == 30.0);
  CHECK(ramp.derivative(7.0) == 2.0);
  CHECK(ramp.derivative(10.0) == 0.0);
  const Profile sine = Profile::sine_window(1.0, 5.0, 5.0, 10.0);
  CHECK(sine.value(4.999) == 0.0);
  CHECK(sine.value(6.25) == doctest::Approx(1.0));
  CHECK(sine.value(10.0) == 0.0);
  CHECK_THROWS_AS(Profile::ramp(0, 1, 2, 2), InvalidArgument);
  CHECK_THROWS_AS(Profile::sine_window(1, 0, 0, 1), InvalidArgument);
}

TEST_CASE("scenario validation") {
  Scenario s;
  CHECK_NOTHROW(validate(s, 4));
  s.disturbances = {Profile::zero(), Profile::zero()};
  CHECK_THROWS_AS(validate(s, 4), InvalidArgument);
  s.disturbances = {Profile::zero()};
  s.initial_errors = {Eigen::Vector3d::Zero()};
  CHECK_THROWS_AS(validate(s, 4), InvalidArgument);
  s.initial_errors.clear();
  s.horizon = 0;
  CHECK_THROWS_AS(validate(s, 4), InvalidArgument);
}

TEST_CASE("empirical gain of a scaled signal") {
  Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(101, 0.0, 1.0);
  Eigen::MatrixXd w = Eigen::MatrixXd::Ones(2, 101);
  CHECK(empirical_gain(t, 0.5 * w, w) == doctest::Approx(0.5));
  CHECK_THROWS_AS(empirical_gain(t, w, Eigen::MatrixXd::Zero(2, 101)), InvalidArgument);
}

TEST_CASE("equilibrium stays at rest") {
  const auto model = benchmark_model(build_bd(5));
  Scenario s;
  s.horizon = 5.0;
  const SimResult r = simulate_linear(model, s, 0.01);
  CHECK(r.stable);
  CHECK(r.time.size() == 501);
  CHECK(r.spacing_errors.cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.controls.cwiseAbs().maxCoeff() == 0.0);
  CHECK_FALSE(r.empirical_gain.has_value());
}

TEST_CASE("modal and full simulations coincide") {
  for (const auto& t : presets::benchmark_topologies()) {
    CAPTURE(t.name);
    const auto model = benchmark_model(t.topology);
    Scenario s = presets::sine_disturbance_scenario();
    s.horizon = 15.0;
    s.initial_errors.assign(10, Eigen::Vector3d(0.3, -0.1, 0.05));
    const SimResult full = simulate_linear(model, s, 0.01);
    const SimResult modal = simulate_linear_modal(model, spectrum(model.matrix), s, 0.01);
    CHECK((full.spacing_errors - modal.spacing_errors).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((full.controls - modal.controls).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("published amplifications are reproduced as energy ratios") {
  const double expected[] = {0.0226, 0.0234, 0.0166, 0.0187};
  const auto topologies = presets::benchmark_topologies();
  for (std::size_t i = 0; i < 4; ++i) {
    CAPTURE(topologies[i].name);
    const SimResult r = simulate_linear(benchmark_model(topologies[i].topology), presets::sine_disturbance_scenario(), 0.01);
    REQUIRE(r.energy_ratio.has_value());
    CHECK(*r.energy_ratio == doctest::Approx(expected[i]).epsilon(0.05));
    CHECK(*r.empirical_gain == doctest::Approx(std::sqrt(*r.energy_ratio)));
  }
}

TEST_CASE("energy ratio converges under step refinement") {
  const auto model = benchmark_model(presets::benchmark_topologies()[0].topology);
  const Scenario s = presets::sine_disturbance_scenario();
  const double coarse = *simulate_linear(model, s, 0.01).energy_ratio;
  const double fine = *simulate_linear(model, s, 0.005).energy_ratio;
  CHECK(std::abs(coarse - fine) < 1e-3 * fine);
}

TEST_CASE("substeps follow the fastest mode") {
  CHECK(rk4_substeps(0.01, 50.0) == 1);
  CHECK(rk4_substeps(0.01, 1000.0) == 10);
  CHECK(rk4_substeps(0.01, 1000.5) == 11);
  const Spectrum s = spectrum(assemble(build_star(3)));
  // Star with c = 1: every mode is the single-vehicle cubic.
  const double rate = fastest_mode_rate(0.5, {1.0, 2.0, 0.5, 1.0}, s.eigenvalues);
  CHECK(rate > 0);
}

TEST_CASE("linear simulation preconditions") {
  const auto model = benchmark_model(build_bd(4));
  Scenario s;
  CHECK_THROWS_AS(simulate_linear(model, s, 0.06), InvalidArgument);
  CHECK_THROWS_AS(simulate_linear(model, s, 0.0), InvalidArgument);
  s.leader_velocity = Profile::ramp(20, 30, 1, 2);
  CHECK_THROWS_AS(simulate_linear(model, s, 0.01), InvalidArgument);
}

TEST_CASE("divergent runs are truncated and flagged") {
  // Routh-Hurwitz fails for these gains on every mode.
  const auto model = make_linear_model({0.5}, {10.0, 0.1, 0.0, 1.0}, assemble(build_bdl(4)));
  Scenario s;
  s.horizon = 200.0;
  s.initial_errors.assign(4, Eigen::Vector3d(1.0, 0.0, 0.0));
  const SimResult r = simulate_linear(model, s, 0.01);
  CHECK_FALSE(r.stable);
  CHECK(r.time.size() < 20001);
  CHECK_FALSE(r.events.empty());
}

TEST_CASE("nonlinear platoon holds equilibrium at constant speed") {
  const Topology t = presets::benchmark_topologies()[3].topology;
  Scenario s;
  s.horizon = 10.0;
  const SimResult r =
      simulate_nonlinear(presets::heterogeneous_fleet(), presets::benchmark_gains(10.0), t, s, 0.01);
  CHECK(r.stable);
  CHECK(r.spacing_errors.cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("nonlinear leader ramp settles on every benchmark topology") {
  const double c = presets::shared_benchmark_coupling();
  double smallest = std::numeric_limits<double>::infinity();
  std::string best;
  for (const auto& t : presets::benchmark_topologies()) {
    CAPTURE(t.name);
    const SimResult r = simulate_nonlinear(presets::heterogeneous_fleet(), presets::benchmark_gains(c), t.topology,
                                           presets::leader_ramp_scenario(), 0.01);
    REQUIRE(r.stable);
    CHECK(r.spacing_errors.allFinite());
    const auto last = r.spacing_errors.rightCols(1001);  // t in [30, 40]
    CHECK(last.cwiseAbs().maxCoeff() < 0.1);
    const double peak = r.spacing_errors.cwiseAbs().maxCoeff();
    if (peak < smallest) {
      smallest = peak;
      best = t.name;
    }
  }
  CHECK(best == "d");
}

TEST_CASE("nonlinear preconditions") {
  const Topology t = build_bd(3);
  std::vector<NonlinearVehicleParams> fleet(3);
  CHECK_THROWS_AS(simulate_nonlinear(fleet, {}, build_bd(4), Scenario{}, 0.01), InvalidArgument);
  CHECK_THROWS_AS(simulate_nonlinear(fleet, {}, t, Scenario{}, 0.1), InvalidArgument);
  fleet[1].mass = -1.0;
  CHECK_THROWS_AS(simulate_nonlinear(fleet, {}, t, Scenario{}, 0.01), InvalidArgument);
}

TEST_CASE("hard braking clamps velocity at zero") {
  Scenario s;
  s.leader_velocity = Profile::ramp(5.0, 0.0, 1.0, 1.5);
  s.horizon = 6.0;
  s.initial_errors.assign(3, Eigen::Vector3d(0.0, -4.0, 0.0));
  const SimResult r = simulate_nonlinear(std::vector<NonlinearVehicleParams>(3), {1.0, 2.0, 0.5, 5.0},
                                         build_bdl(3), s, 0.01);
  CHECK(r.velocity_errors.allFinite());
  bool clamped = false;
  for (const auto& e : r.events) clamped = clamped || e.find("clamped") != std::string::npos;
  CHECK(clamped);
}
