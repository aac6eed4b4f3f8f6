#include "platoon/sdp.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "platoon/errors.hpp"

namespace platoon::sdp {

Eigen::MatrixXd AffineLmi::evaluate(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd g = constant;
  for (std::size_t i = 0; i < coeffs.size(); ++i) g += x(static_cast<Eigen::Index>(i)) * coeffs[i];
  return g;
}

bool strictly_feasible(const std::vector<AffineLmi>& blocks, const Eigen::VectorXd& x) {
  for (const auto& b : blocks) {
    Eigen::LLT<Eigen::MatrixXd> llt(b.evaluate(x));
    if (llt.info() != Eigen::Success) return false;
  }
  return true;
}

namespace {

// Barrier value -sum log det G_j(x); +inf outside the interior.
double barrier_value(const std::vector<AffineLmi>& blocks, const Eigen::VectorXd& x) {
  double value = 0.0;
  for (const auto& b : blocks) {
    Eigen::LLT<Eigen::MatrixXd> llt(b.evaluate(x));
    if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    const auto diag = llt.matrixLLT().diagonal();
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
      if (!(diag(i) > 0)) return std::numeric_limits<double>::infinity();
      value -= 2.0 * std::log(diag(i));
    }
  }
  return value;
}

// Gradient and Hessian of the barrier:
//   g_i = -sum_j tr(G_j^{-1} F_ji),  H_ik = sum_j tr(G_j^{-1} F_ji G_j^{-1} F_jk)
void barrier_derivatives(const std::vector<AffineLmi>& blocks, const Eigen::VectorXd& x, Eigen::VectorXd& grad,
                         Eigen::MatrixXd& hess) {
  const auto n = x.size();
  grad.setZero(n);
  hess.setZero(n, n);
  for (const auto& b : blocks) {
    const Eigen::MatrixXd g = b.evaluate(x);
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    const Eigen::MatrixXd g_inv = llt.solve(Eigen::MatrixXd::Identity(g.rows(), g.cols()));
    std::vector<Eigen::MatrixXd> scaled(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      scaled[i] = g_inv * b.coeffs[i];
      grad(i) -= scaled[i].trace();
    }
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index k = i; k < n; ++k) {
        const double v = (scaled[i].array() * scaled[k].transpose().array()).sum();
        hess(i, k) += v;
        if (k != i) hess(k, i) += v;
      }
  }
}

}  // namespace

BarrierResult minimize(const Eigen::VectorXd& c, const std::vector<AffineLmi>& blocks, const Eigen::VectorXd& x0,
                       const BarrierOptions& options) {
  const auto n = x0.size();
  if (c.size() != n) throw InvalidArgument("objective and start point differ in size");
  Eigen::Index total_dim = 0;
  for (const auto& b : blocks) {
    if (static_cast<Eigen::Index>(b.coeffs.size()) != n) throw InvalidArgument("block coefficient count mismatch");
    total_dim += b.constant.rows();
  }
  if (!strictly_feasible(blocks, x0)) throw InvalidArgument("barrier start point is not strictly feasible");

  Eigen::VectorXd x = x0;
  double weight = options.initial_weight;
  int newton_steps = 0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;

  for (int stage = 0; stage < options.max_stages; ++stage) {
    // Centering: minimise weight * c^T x + barrier(x).
    bool centered = false;
    for (int it = 0; it < options.max_newton_per_stage; ++it) {
      barrier_derivatives(blocks, x, grad, hess);
      grad += weight * c;
      const Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
      if (ldlt.info() != Eigen::Success) throw NumericalFailure("barrier Hessian factorisation failed");
      const Eigen::VectorXd step = -ldlt.solve(grad);
      const double decrement_sq = -grad.dot(step);
      ++newton_steps;
      if (!std::isfinite(decrement_sq)) throw NumericalFailure("barrier Newton step is not finite");
      // Newton decrement lambda^2 / 2 below 1e-10 is centred well enough for
      // the gap bound total_dim / weight to hold.
      if (decrement_sq < 2e-10) {
        centered = true;
        break;
      }

      const double f0 = weight * c.dot(x) + barrier_value(blocks, x);
      double t = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
        const Eigen::VectorXd trial = x + t * step;
        const double f1 = weight * c.dot(trial) + barrier_value(blocks, trial);
        if (std::isfinite(f1) && f1 < f0 && f1 <= f0 - 0.25 * t * decrement_sq) {
          x = trial;
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        // No further progress at working precision: treat as centred.
        centered = true;
        break;
      }
    }
    if (!centered) throw NumericalFailure("barrier centering did not converge at stage " + std::to_string(stage));

    const double objective = c.dot(x);
    if (double(total_dim) / weight < options.gap_tolerance * (1.0 + std::abs(objective)))
      return {x, objective, newton_steps};
    weight *= options.weight_growth;
  }
  throw NumericalFailure("barrier method exhausted its stage budget");
}

}  // namespace platoon::sdp
