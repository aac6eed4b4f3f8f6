#pragma once

#include <Eigen/Dense>

#include <vector>

#include "platoon/topology.hpp"
#include "platoon/vehicle.hpp"

namespace platoon {

/// Bounded-real synthesis request for a single vehicle model.
struct LmiProblem {
  double tau = 0.5;
  double gamma_d = 1.0;
};

void validate(const LmiProblem& problem);

struct LmiCertificate {
  Eigen::Matrix3d Q;
  double alpha;
  /// -lambda_max of the assembled 5x5 block.
  double margin;
};

struct LmiSolverOptions {
  /// Required -lambda_max of the assembled block.
  double min_margin = 1e-6;
  double trace_cap = 100.0;
  /// Upper bound on alpha; <= 0 selects 1e3 * (1 + 1 / gamma_d^2).
  double alpha_cap = 0.0;
  /// After the margin-maximising phase, alpha is minimised at this fraction of
  /// the best margin found (never below min_margin).
  double margin_fraction = 0.5;
};

/// The 5x5 symmetric block
///   [ A Q + Q A^T - alpha B1 B1^T   B2         Q C1^T ]
///   [ B2^T                          -gd^2      0      ]
///   [ C1 Q                          0          -1     ]
template <typename Scalar>
Eigen::Matrix<Scalar, 5, 5> assemble_lmi(Scalar tau, Scalar gamma_d, const Eigen::Matrix<Scalar, 3, 3>& Q,
                                         Scalar alpha) {
  const auto a = drift_matrix<Scalar>(tau);
  const auto b = input_matrix<Scalar>(tau);
  const auto c = output_matrix<Scalar>();
  Eigen::Matrix<Scalar, 5, 5> m = Eigen::Matrix<Scalar, 5, 5>::Zero();
  m.template topLeftCorner<3, 3>() = a * Q + Q * a.transpose() - alpha * b * b.transpose();
  m.template block<3, 1>(0, 3) = b;
  m.template block<1, 3>(3, 0) = b.transpose();
  m.template block<3, 1>(0, 4) = Q * c.transpose();
  m.template block<1, 3>(4, 0) = c * Q;
  m(3, 3) = -gamma_d * gamma_d;
  m(4, 4) = Scalar(-1);
  return m;
}

inline Eigen::Matrix<double, 5, 5> assemble_lmi(const LmiProblem& problem, const Eigen::Matrix3d& Q, double alpha) {
  return assemble_lmi<double>(problem.tau, problem.gamma_d, Q, alpha);
}

/// Finds (Q, alpha) with Q > 0 and the assembled block negative definite with
/// at least `min_margin` to spare.
///
/// Two barrier phases: maximise the margin t (block <= -tI, Q >= tI,
/// trace Q <= cap), then minimise alpha at a fixed fraction of that margin.
/// The result is re-verified by direct eigenvalue evaluation; NumericalFailure
/// is thrown rather than returning an unverified certificate.
LmiCertificate solve_lmi(const LmiProblem& problem, const LmiSolverOptions& options = {});

/// Independent check of a certificate: Q > 0 and assembled block <= -min_margin.
bool verify_certificate(const LmiProblem& problem, const LmiCertificate& certificate, double min_margin);

/// k^T = 1/2 B1^T Q^{-1}, i.e. the third row of Q^{-1} divided by 2 tau.
Eigen::Vector3d extract_gains(const LmiCertificate& certificate, const LmiProblem& problem);

/// Minimal admissible coupling alpha / lambda_min.
double coupling_strength(const LmiCertificate& certificate, double lambda_min);

struct SynthesisResult {
  ControllerGains gains;
  LmiCertificate certificate;
  double lambda_min;
  double gamma_d;
  double tau;
  std::vector<double> verified_modal_norms;
};

/// Solve, extract gains and coupling, then check every closed-loop mode of the
/// given spectrum is Hurwitz with H-infinity norm below gamma_d. A failed check
/// triggers one re-solve at margin 1e-4 before NumericalFailure is thrown.
SynthesisResult synthesize(const LmiProblem& problem, const Spectrum& spectrum, const LmiSolverOptions& options = {});

/// Modal norms of (tau, gains) on a spectrum; +inf marks non-Hurwitz modes.
std::vector<double> closed_loop_modal_norms(double tau, const ControllerGains& gains, const Spectrum& spectrum);

}  // namespace platoon
