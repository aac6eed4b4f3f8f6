#pragma once

#include <Eigen/Dense>

#include <vector>

namespace platoon::sdp {

/// Affine matrix function G(x) = constant + sum_i x_i * coeffs[i], required
/// to be positive definite.
struct AffineLmi {
  Eigen::MatrixXd constant;
  std::vector<Eigen::MatrixXd> coeffs;

  Eigen::MatrixXd evaluate(const Eigen::VectorXd& x) const;
};

struct BarrierOptions {
  double initial_weight = 1.0;
  double weight_growth = 10.0;
  /// Stop once (total barrier dimension) / weight falls below this, scaled by
  /// 1 + |objective|.
  double gap_tolerance = 1e-10;
  int max_newton_per_stage = 200;
  int max_stages = 80;
};

struct BarrierResult {
  Eigen::VectorXd x;
  double objective;
  int newton_steps;
};

/// Minimises c^T x subject to G_j(x) > 0 for every block, by a log-det barrier
/// path-following method with damped Newton centering.
///
/// `x0` must be strictly feasible. Throws InvalidArgument if it is not, and
/// NumericalFailure if centering stalls or the iteration budget runs out.
BarrierResult minimize(const Eigen::VectorXd& c, const std::vector<AffineLmi>& blocks, const Eigen::VectorXd& x0,
                       const BarrierOptions& options = {});

/// True when every block is positive definite at x (Cholesky succeeds).
bool strictly_feasible(const std::vector<AffineLmi>& blocks, const Eigen::VectorXd& x);

}  // namespace platoon::sdp
