#pragma once

#include <Eigen/Dense>

namespace platoon {

/// First-order powertrain lag: tau * da/dt + a = u + w.
struct VehicleParams {
  double tau = 0.5;
};

/// Shared feedback vector k = (kp, kv, ka) scaled by the coupling strength c.
struct ControllerGains {
  double kp = 1.0;
  double kv = 2.0;
  double ka = 0.5;
  double c = 1.0;

  Eigen::Vector3d k() const { return {kp, kv, ka}; }
};

void validate(const VehicleParams& params);
void validate(const ControllerGains& gains);

// Single-vehicle state-space model over x = (p, v, a). B1 == B2.

template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> drift_matrix(Scalar tau) {
  Eigen::Matrix<Scalar, 3, 3> a = Eigen::Matrix<Scalar, 3, 3>::Zero();
  a(0, 1) = Scalar(1);
  a(1, 2) = Scalar(1);
  a(2, 2) = Scalar(-1) / tau;
  return a;
}

template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> input_matrix(Scalar tau) {
  return {Scalar(0), Scalar(0), Scalar(1) / tau};
}

template <typename Scalar>
Eigen::Matrix<Scalar, 1, 3> output_matrix() {
  return {Scalar(1), Scalar(0), Scalar(0)};
}

}  // namespace platoon
