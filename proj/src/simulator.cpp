#include "platoon/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "platoon/errors.hpp"
#include "platoon/modal.hpp"

namespace platoon {

// ---------------------------------------------------------------- Profile

Profile Profile::zero() { return Profile(Kind::kZero, {}); }

Profile Profile::constant(double value) {
  if (!std::isfinite(value)) throw InvalidArgument("constant profile value must be finite");
  return Profile(Kind::kConstant, {value});
}

Profile Profile::ramp(double from, double to, double t_start, double t_end) {
  if (!(t_end > t_start)) throw InvalidArgument("ramp requires t_end > t_start");
  if (!std::isfinite(from) || !std::isfinite(to)) throw InvalidArgument("ramp endpoints must be finite");
  return Profile(Kind::kRamp, {from, to, t_start, t_end});
}

Profile Profile::sine_window(double amplitude, double period, double t_start, double t_end) {
  if (!(period > 0)) throw InvalidArgument("sine window period must be positive");
  if (!(t_end > t_start)) throw InvalidArgument("sine window requires t_end > t_start");
  return Profile(Kind::kSineWindow, {amplitude, period, t_start, t_end});
}

double Profile::value(double t) const {
  switch (kind_) {
    case Kind::kZero:
      return 0.0;
    case Kind::kConstant:
      return params_[0];
    case Kind::kRamp: {
      const auto [from, to, t0, t1] = std::tie(params_[0], params_[1], params_[2], params_[3]);
      if (t < t0) return from;
      if (t > t1) return to;
      return from + (to - from) * (t - t0) / (t1 - t0);
    }
    case Kind::kSineWindow: {
      const auto [amp, period, t0, t1] = std::tie(params_[0], params_[1], params_[2], params_[3]);
      if (t < t0 || t >= t1) return 0.0;
      return amp * std::sin(2.0 * std::numbers::pi * (t - t0) / period);
    }
  }
  return 0.0;
}

double Profile::integral(double t) const {
  switch (kind_) {
    case Kind::kZero:
      return 0.0;
    case Kind::kConstant:
      return params_[0] * t;
    case Kind::kRamp: {
      const auto [from, to, t0, t1] = std::tie(params_[0], params_[1], params_[2], params_[3]);
      // Integral of the piecewise-linear function from 0 to t.
      auto prim = [&](double s) {
        if (s <= t0) return from * s;
        if (s <= t1) {
          const double slope = (to - from) / (t1 - t0);
          return from * s + 0.5 * slope * (s - t0) * (s - t0);
        }
        return from * t1 + 0.5 * (to - from) * (t1 - t0) + to * (s - t1);
      };
      return prim(t) - prim(0.0);
    }
    case Kind::kSineWindow: {
      const auto [amp, period, t0, t1] = std::tie(params_[0], params_[1], params_[2], params_[3]);
      const double w = 2.0 * std::numbers::pi / period;
      auto prim = [&](double s) {
        const double clipped = std::clamp(s, t0, t1);
        return amp * (1.0 - std::cos(w * (clipped - t0))) / w;
      };
      return prim(t) - prim(0.0);
    }
  }
  return 0.0;
}

double Profile::derivative(double t) const {
  switch (kind_) {
    case Kind::kZero:
    case Kind::kConstant:
      return 0.0;
    case Kind::kRamp: {
      const auto [from, to, t0, t1] = std::tie(params_[0], params_[1], params_[2], params_[3]);
      return (t >= t0 && t < t1) ? (to - from) / (t1 - t0) : 0.0;
    }
    case Kind::kSineWindow: {
      const auto [amp, period, t0, t1] = std::tie(params_[0], params_[1], params_[2], params_[3]);
      if (t < t0 || t >= t1) return 0.0;
      const double w = 2.0 * std::numbers::pi / period;
      return amp * w * std::cos(w * (t - t0));
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------- Scenario

const Profile& Scenario::disturbance(int follower) const {
  return disturbances.size() == 1 ? disturbances.front() : disturbances.at(follower);
}

void validate(const Scenario& scenario, int n_followers) {
  if (!(scenario.horizon > 0)) throw InvalidArgument("scenario horizon must be positive");
  if (!(scenario.desired_gap > 0)) throw InvalidArgument("desired gap must be positive");
  if (scenario.disturbances.size() != 1 && static_cast<int>(scenario.disturbances.size()) != n_followers)
    throw InvalidArgument("disturbances must list one profile or one per follower");
  if (!scenario.initial_errors.empty() && static_cast<int>(scenario.initial_errors.size()) != n_followers)
    throw InvalidArgument("initial errors must be empty or one per follower");
}

// ---------------------------------------------------------------- helpers

namespace {

constexpr double kDivergence = 1e9;

int sample_count(double horizon, double dt) { return static_cast<int>(std::floor(horizon / dt + 1e-9)) + 1; }

Eigen::VectorXd disturbance_vector(const Scenario& scenario, int n, double t) {
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w(i) = scenario.disturbance(i).value(t);
  return w;
}

void allocate(SimResult& r, int n, int samples) {
  r.time.resize(samples);
  r.spacing_errors.resize(n, samples);
  r.velocity_errors.resize(n, samples);
  r.controls.resize(n, samples);
  r.disturbances.resize(n, samples);
}

void truncate(SimResult& r, int samples) {
  r.time.conservativeResize(samples);
  r.spacing_errors.conservativeResize(Eigen::NoChange, samples);
  r.velocity_errors.conservativeResize(Eigen::NoChange, samples);
  r.controls.conservativeResize(Eigen::NoChange, samples);
  r.disturbances.conservativeResize(Eigen::NoChange, samples);
}

void finish_gain(SimResult& r) {
  double w_energy = 0.0;
  for (Eigen::Index k = 1; k < r.time.size(); ++k)
    w_energy += 0.5 * (r.time(k) - r.time(k - 1)) *
                (r.disturbances.col(k).squaredNorm() + r.disturbances.col(k - 1).squaredNorm());
  if (w_energy > 0 && r.stable) {
    const double g = empirical_gain(r.time, r.spacing_errors, r.disturbances);
    r.empirical_gain = g;
    r.energy_ratio = g * g;
  }
}

// Error-state record for sample k: positions, velocities, control -c (L+P)(x) k^T X.
void record_linear(SimResult& r, int k, double t, const Eigen::VectorXd& x, const LinearPlatoonModel& model,
                   const Eigen::VectorXd& w) {
  const auto n = model.matrix.lp.rows();
  Eigen::VectorXd feedback(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    r.spacing_errors(i, k) = x(3 * i);
    r.velocity_errors(i, k) = x(3 * i + 1);
    feedback(i) = model.gains.k().dot(x.segment<3>(3 * i));
  }
  r.controls.col(k) = -model.gains.c * model.matrix.lp * feedback;
  r.disturbances.col(k) = w;
  r.time(k) = t;
}

Eigen::VectorXd initial_state(const Scenario& scenario, int n) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(3 * n);
  for (std::size_t i = 0; i < scenario.initial_errors.size(); ++i)
    x.segment<3>(3 * static_cast<Eigen::Index>(i)) = scenario.initial_errors[i];
  return x;
}

template <typename Deriv>
Eigen::VectorXd rk4_step(const Deriv& f, double t, const Eigen::VectorXd& x, double h) {
  const Eigen::VectorXd k1 = f(t, x);
  const Eigen::VectorXd k2 = f(t + 0.5 * h, x + 0.5 * h * k1);
  const Eigen::VectorXd k3 = f(t + 0.5 * h, x + 0.5 * h * k2);
  const Eigen::VectorXd k4 = f(t + h, x + h * k3);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void check_linear_preconditions(const LinearPlatoonModel& model, const Scenario& scenario, double dt) {
  const int n = static_cast<int>(model.matrix.lp.rows());
  validate(scenario, n);
  if (!(dt > 0)) throw InvalidArgument("dt must be positive");
  if (dt > model.params.tau / 10.0 + 1e-15) throw InvalidArgument("dt must not exceed tau / 10");
  if (scenario.leader_velocity.kind() == Profile::Kind::kRamp ||
      scenario.leader_velocity.kind() == Profile::Kind::kSineWindow)
    throw InvalidArgument("the linear error model requires a constant leader velocity");
}

}  // namespace

double empirical_gain(const Eigen::VectorXd& time, const Eigen::MatrixXd& outputs, const Eigen::MatrixXd& disturbances) {
  double y_energy = 0.0;
  double w_energy = 0.0;
  for (Eigen::Index k = 1; k < time.size(); ++k) {
    const double h = time(k) - time(k - 1);
    y_energy += 0.5 * h * (outputs.col(k).squaredNorm() + outputs.col(k - 1).squaredNorm());
    w_energy += 0.5 * h * (disturbances.col(k).squaredNorm() + disturbances.col(k - 1).squaredNorm());
  }
  if (!(w_energy > 0)) throw InvalidArgument("empirical gain needs a disturbance with positive energy");
  return std::sqrt(y_energy / w_energy);
}

double empirical_gain(const SimResult& result) {
  return empirical_gain(result.time, result.spacing_errors, result.disturbances);
}

LinearPlatoonModel make_linear_model(const VehicleParams& params, const ControllerGains& gains,
                                     const TopologyMatrix& matrix) {
  validate(params);
  validate(gains);
  const auto n = matrix.lp.rows();
  const Eigen::Matrix3d a = drift_matrix(params.tau);
  const Eigen::Matrix3d bk = input_matrix(params.tau) * gains.k().transpose();
  Eigen::MatrixXd ac = Eigen::MatrixXd::Zero(3 * n, 3 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    ac.block<3, 3>(3 * i, 3 * i) += a;
    for (Eigen::Index j = 0; j < n; ++j)
      if (matrix.lp(i, j) != 0.0) ac.block<3, 3>(3 * i, 3 * j) -= gains.c * matrix.lp(i, j) * bk;
  }
  return {params, gains, matrix, std::move(ac)};
}

double fastest_mode_rate(double tau, const ControllerGains& gains, const Eigen::VectorXd& eigenvalues) {
  double rate = 0.0;
  for (double lambda : eigenvalues) {
    const auto m = make_modal_system(tau, gains.kp, gains.kv, gains.ka, gains.c, lambda);
    Eigen::Matrix3d companion = Eigen::Matrix3d::Zero();
    companion(0, 1) = 1.0;
    companion(1, 2) = 1.0;
    companion.row(2) << -m.a0 / m.a3, -m.a1 / m.a3, -m.a2 / m.a3;
    rate = std::max(rate, Eigen::EigenSolver<Eigen::Matrix3d>(companion, false).eigenvalues().cwiseAbs().maxCoeff());
  }
  return rate;
}

int rk4_substeps(double dt, double rate) {
  // Keep |lambda| h <= 1, well inside the RK4 stability region.
  return std::max(1, static_cast<int>(std::ceil(dt * rate - 1e-12)));
}

SimResult simulate_linear(const LinearPlatoonModel& model, const Scenario& scenario, double dt) {
  check_linear_preconditions(model, scenario, dt);
  const int n = static_cast<int>(model.matrix.lp.rows());
  const int samples = sample_count(scenario.horizon, dt);
  const Eigen::VectorXd eig = spectrum(model.matrix).eigenvalues;
  const int substeps = rk4_substeps(dt, fastest_mode_rate(model.params.tau, model.gains, eig));
  const double h = dt / substeps;
  const double inv_tau = 1.0 / model.params.tau;

  auto deriv = [&](double t, const Eigen::VectorXd& x) {
    Eigen::VectorXd dx = model.closed_loop * x;
    for (int i = 0; i < n; ++i) dx(3 * i + 2) += inv_tau * scenario.disturbance(i).value(t);
    return dx;
  };

  SimResult r;
  allocate(r, n, samples);
  Eigen::VectorXd x = initial_state(scenario, n);
  record_linear(r, 0, 0.0, x, model, disturbance_vector(scenario, n, 0.0));
  for (int k = 1; k < samples; ++k) {
    const double t0 = (k - 1) * dt;
    for (int s = 0; s < substeps; ++s) x = rk4_step(deriv, t0 + s * h, x, h);
    const double t = k * dt;
    if (!x.allFinite() || x.norm() > kDivergence) {
      r.stable = false;
      r.events.push_back("diverged at t=" + std::to_string(t));
      truncate(r, k);
      return r;
    }
    record_linear(r, k, t, x, model, disturbance_vector(scenario, n, t));
  }
  finish_gain(r);
  return r;
}

SimResult simulate_linear_modal(const LinearPlatoonModel& model, const Spectrum& spec, const Scenario& scenario,
                                double dt) {
  check_linear_preconditions(model, scenario, dt);
  const int n = static_cast<int>(model.matrix.lp.rows());
  if (spec.eigenvalues.size() != n) throw InvalidArgument("spectrum size does not match the model");
  const int samples = sample_count(scenario.horizon, dt);
  const Eigen::VectorXd eig = spectrum(model.matrix).eigenvalues;
  const int substeps = rk4_substeps(dt, fastest_mode_rate(model.params.tau, model.gains, eig));
  const double h = dt / substeps;
  const Eigen::MatrixXd& v = spec.eigenvectors;

  // Per-mode closed-loop matrices A - c lambda_i B1 k^T.
  const Eigen::Matrix3d a = drift_matrix(model.params.tau);
  const Eigen::Matrix3d bk = input_matrix(model.params.tau) * model.gains.k().transpose();
  std::vector<Eigen::Matrix3d> modes;
  for (int i = 0; i < n; ++i) modes.push_back(a - model.gains.c * spec.eigenvalues(i) * bk);
  const double inv_tau = 1.0 / model.params.tau;

  auto deriv = [&](double t, const Eigen::VectorXd& z) {
    const Eigen::VectorXd w_modal = v.transpose() * disturbance_vector(scenario, n, t);
    Eigen::VectorXd dz(3 * n);
    for (int i = 0; i < n; ++i) {
      dz.segment<3>(3 * i) = modes[i] * z.segment<3>(3 * i);
      dz(3 * i + 2) += inv_tau * w_modal(i);
    }
    return dz;
  };
  // X = (V (x) I3) Z, i.e. for each state component the follower vector is V times the modal vector.
  auto to_physical = [&](const Eigen::VectorXd& z) {
    const Eigen::Map<const Eigen::MatrixXd> zm(z.data(), 3, n);
    Eigen::MatrixXd xm = zm * v.transpose();
    return Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(xm.data(), 3 * n));
  };
  auto to_modal = [&](const Eigen::VectorXd& x) {
    const Eigen::Map<const Eigen::MatrixXd> xm(x.data(), 3, n);
    Eigen::MatrixXd zm = xm * v;
    return Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(zm.data(), 3 * n));
  };

  SimResult r;
  allocate(r, n, samples);
  Eigen::VectorXd z = to_modal(initial_state(scenario, n));
  record_linear(r, 0, 0.0, to_physical(z), model, disturbance_vector(scenario, n, 0.0));
  for (int k = 1; k < samples; ++k) {
    const double t0 = (k - 1) * dt;
    for (int s = 0; s < substeps; ++s) z = rk4_step(deriv, t0 + s * h, z, h);
    const double t = k * dt;
    if (!z.allFinite() || z.norm() > kDivergence) {
      r.stable = false;
      r.events.push_back("diverged at t=" + std::to_string(t));
      truncate(r, k);
      return r;
    }
    record_linear(r, k, t, to_physical(z), model, disturbance_vector(scenario, n, t));
  }
  finish_gain(r);
  return r;
}

void validate(const NonlinearVehicleParams& p) {
  for (double v : {p.mass, p.drag_coeff, p.inertial_delay, p.drive_efficiency, p.tire_radius, p.rolling_coeff,
                   p.gravity})
    if (!(v > 0) || !std::isfinite(v)) throw InvalidArgument("nonlinear vehicle parameters must be positive");
}

SimResult simulate_nonlinear(const std::vector<NonlinearVehicleParams>& fleet, const ControllerGains& gains,
                             const Topology& topology, const Scenario& scenario, double dt) {
  const int n = topology.size();
  if (static_cast<int>(fleet.size()) != n) throw InvalidArgument("fleet size must equal the number of followers");
  for (const auto& p : fleet) validate(p);
  validate(gains);
  validate(scenario, n);
  double tau_min = fleet.front().inertial_delay;
  for (const auto& p : fleet) tau_min = std::min(tau_min, p.inertial_delay);
  if (!(dt > 0)) throw InvalidArgument("dt must be positive");
  if (dt > tau_min / 10.0 + 1e-15) throw InvalidArgument("dt must not exceed min(tau_i) / 10");

  const Eigen::MatrixXd lp = assemble(topology).lp;
  const Eigen::VectorXd eig = spectrum(lp).eigenvalues;
  // Heterogeneous lags and drag shift the fast modes slightly; pad the estimate.
  const int substeps = rk4_substeps(dt, 1.25 * fastest_mode_rate(tau_min, gains, eig));
  const double h = dt / substeps;
  const double d0 = scenario.desired_gap;
  const Profile& leader = scenario.leader_velocity;

  Eigen::VectorXd mass(n), drag(n), delay(n), eff(n), radius(n), resist(n), offset(n);
  for (int i = 0; i < n; ++i) {
    const auto& p = fleet[i];
    mass(i) = p.mass;
    drag(i) = p.drag_coeff;
    delay(i) = p.inertial_delay;
    eff(i) = p.drive_efficiency;
    radius(i) = p.tire_radius;
    resist(i) = p.mass * p.gravity * p.rolling_coeff;
    offset(i) = (i + 1) * d0;
  }

  // State layout: [p (n), v (n), T (n)].
  auto acceleration = [&](const Eigen::VectorXd& v, const Eigen::VectorXd& torque, const Eigen::VectorXd& w) {
    return ((eff.array() * torque.array() / radius.array() - drag.array() * v.array().square() - resist.array()) /
                mass.array() +
            w.array())
        .matrix();
  };
  struct Signals {
    Eigen::VectorXd ep, ev, a_des, w;
  };
  auto signals = [&](double t, const Eigen::VectorXd& x) {
    Signals s;
    s.w = disturbance_vector(scenario, n, t);
    const Eigen::VectorXd a = acceleration(x.segment(n, n), x.segment(2 * n, n), s.w);
    s.ep = x.head(n).array() - (leader.integral(t) - offset.array());
    s.ev = x.segment(n, n).array() - leader.value(t);
    const Eigen::VectorXd ea = a.array() - leader.derivative(t);
    s.a_des = -gains.c * lp * (gains.kp * s.ep + gains.kv * s.ev + gains.ka * ea);
    return s;
  };
  auto deriv = [&](double t, const Eigen::VectorXd& x) {
    const Signals s = signals(t, x);
    const Eigen::VectorXd v = x.segment(n, n);
    const Eigen::VectorXd torque = x.segment(2 * n, n);
    const Eigen::VectorXd t_des = ((mass.array() * s.a_des.array() + drag.array() * v.array().square() +
                                    resist.array()) *
                                   radius.array() / eff.array())
                                      .matrix();
    Eigen::VectorXd dx(3 * n);
    dx.head(n) = v;
    dx.segment(n, n) = acceleration(v, torque, s.w);
    dx.segment(2 * n, n) = ((t_des - torque).array() / delay.array()).matrix();
    return dx;
  };

  Eigen::VectorXd x(3 * n);
  {
    const Eigen::VectorXd w0 = disturbance_vector(scenario, n, 0.0);
    for (int i = 0; i < n; ++i) {
      const Eigen::Vector3d e = scenario.initial_errors.empty() ? Eigen::Vector3d::Zero() : scenario.initial_errors[i];
      const double p = leader.integral(0.0) - offset(i) + e(0);
      const double v = leader.value(0.0) + e(1);
      const double a = leader.derivative(0.0) + e(2);
      x(i) = p;
      x(n + i) = v;
      x(2 * n + i) = (mass(i) * (a - w0(i)) + drag(i) * v * v + resist(i)) * radius(i) / eff(i);
    }
  }

  const int samples = sample_count(scenario.horizon, dt);
  SimResult r;
  allocate(r, n, samples);
  std::vector<char> clamped(n, 0);
  auto record = [&](int k, double t) {
    const Signals s = signals(t, x);
    r.time(k) = t;
    r.spacing_errors.col(k) = s.ep;
    r.velocity_errors.col(k) = s.ev;
    r.controls.col(k) = s.a_des;
    r.disturbances.col(k) = s.w;
  };
  record(0, 0.0);
  for (int k = 1; k < samples; ++k) {
    const double t0 = (k - 1) * dt;
    for (int s = 0; s < substeps; ++s) {
      x = rk4_step(deriv, t0 + s * h, x, h);
      for (int i = 0; i < n; ++i) {
        if (x(n + i) < 0.0) {
          x(n + i) = 0.0;
          if (!clamped[i]) {
            clamped[i] = 1;
            std::ostringstream msg;
            msg << "follower " << i + 1 << " velocity clamped at 0 (t=" << t0 + (s + 1) * h << ")";
            r.events.push_back(msg.str());
          }
        }
      }
    }
    const double t = k * dt;
    const Eigen::VectorXd ep = x.head(n).array() - (leader.integral(t) - offset.array());
    if (!x.allFinite() || ep.cwiseAbs().maxCoeff() > kDivergence) {
      r.stable = false;
      r.events.push_back("diverged at t=" + std::to_string(t));
      truncate(r, k);
      return r;
    }
    record(k, t);
  }
  finish_gain(r);
  return r;
}

}  // namespace platoon
