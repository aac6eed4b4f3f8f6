#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "platoon/topology.hpp"
#include "platoon/vehicle.hpp"

namespace platoon {

/// Scalar function of time used for leader velocity and disturbance inputs.
class Profile {
 public:
  enum class Kind { kZero, kConstant, kRamp, kSineWindow };

  static Profile zero();
  static Profile constant(double value);
  /// `from` before t_start, linear to `to` at t_end, `to` afterwards.
  static Profile ramp(double from, double to, double t_start, double t_end);
  /// amplitude * sin(2 pi (t - t_start) / period) on [t_start, t_end), else 0.
  static Profile sine_window(double amplitude, double period, double t_start, double t_end);

  double value(double t) const;
  /// Integral from 0 to t, in closed form.
  double integral(double t) const;
  /// Piecewise derivative (right-continuous at the corners).
  double derivative(double t) const;

  Kind kind() const { return kind_; }
  /// Parameter values in the order of the factory arguments.
  const std::vector<double>& params() const { return params_; }

 private:
  Profile(Kind kind, std::vector<double> params) : kind_(kind), params_(std::move(params)) {}
  Kind kind_;
  std::vector<double> params_;
};

struct Scenario {
  Profile leader_velocity = Profile::constant(20.0);
  /// One profile per follower, or a single profile applied to every follower.
  std::vector<Profile> disturbances = {Profile::zero()};
  double desired_gap = 25.0;
  double horizon = 30.0;
  /// Per-follower (position, velocity, acceleration) errors; empty means zero.
  std::vector<Eigen::Vector3d> initial_errors;

  const Profile& disturbance(int follower) const;
};

void validate(const Scenario& scenario, int n_followers);

struct SimResult {
  Eigen::VectorXd time;
  Eigen::MatrixXd spacing_errors;   ///< N x T, m
  Eigen::MatrixXd velocity_errors;  ///< N x T, m/s
  Eigen::MatrixXd controls;         ///< N x T, desired acceleration m/s^2
  Eigen::MatrixXd disturbances;     ///< N x T, sampled W
  /// sqrt(int |Y|^2 dt / int |W|^2 dt); empty when W has no energy.
  std::optional<double> empirical_gain;
  /// int |Y|^2 dt / int |W|^2 dt, the squared gain.
  std::optional<double> energy_ratio;
  bool stable = true;
  std::vector<std::string> events;
};

/// Trapezoidal L2 ratio sqrt(int |Y|^2 / int |W|^2). Throws InvalidArgument
/// for a zero-energy disturbance.
double empirical_gain(const Eigen::VectorXd& time, const Eigen::MatrixXd& outputs, const Eigen::MatrixXd& disturbances);
double empirical_gain(const SimResult& result);

/// Closed-loop error dynamics X' = A_c X + (I (x) B2) W, Y = (I (x) C1) X.
struct LinearPlatoonModel {
  VehicleParams params;
  ControllerGains gains;
  TopologyMatrix matrix;
  Eigen::MatrixXd closed_loop;  ///< I (x) A - c (L+P) (x) B1 k^T
};

LinearPlatoonModel make_linear_model(const VehicleParams& params, const ControllerGains& gains,
                                     const TopologyMatrix& matrix);

/// Largest |root| over the modal characteristic cubics; drives the RK4 substep.
double fastest_mode_rate(double tau, const ControllerGains& gains, const Eigen::VectorXd& eigenvalues);

/// Number of RK4 substeps per output sample so that rate * h stays inside the
/// stability region with margin.
int rk4_substeps(double dt, double rate);

/// Fixed-step RK4 on the full 3N-state error system. Outputs are sampled every
/// dt; each sample interval is split into rk4_substeps() equal steps.
/// Requires a constant leader velocity (the error model assumes a0 = 0) and
/// dt <= tau / 10.
SimResult simulate_linear(const LinearPlatoonModel& model, const Scenario& scenario, double dt);

/// Same trajectory computed through the N decoupled modal subsystems and mapped
/// back through the eigenvectors of L + P.
SimResult simulate_linear_modal(const LinearPlatoonModel& model, const Spectrum& spectrum, const Scenario& scenario,
                                double dt);

struct NonlinearVehicleParams {
  double mass = 1500.0;          ///< kg
  double drag_coeff = 0.492;     ///< N s^2 / m^2
  double inertial_delay = 0.5;   ///< s
  double drive_efficiency = 0.9;
  double tire_radius = 0.3;      ///< m
  double rolling_coeff = 0.01;
  double gravity = 9.8;          ///< m/s^2
};

void validate(const NonlinearVehicleParams& vehicle);

/// Heterogeneous nonlinear platoon: each follower tracks the distributed
/// desired acceleration through an inverse torque model and a first-order
/// torque lag. Spacing error of follower i is measured against the leader
/// trajectory offset by i * desired_gap. Requires dt <= min(tau_i) / 10.
SimResult simulate_nonlinear(const std::vector<NonlinearVehicleParams>& fleet, const ControllerGains& gains,
                             const Topology& topology, const Scenario& scenario, double dt);

}  // namespace platoon
