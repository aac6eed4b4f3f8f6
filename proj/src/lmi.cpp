#include "platoon/lmi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "platoon/errors.hpp"
#include "platoon/modal.hpp"
#include "platoon/sdp.hpp"

namespace platoon {

namespace {

// Upper-triangular basis of symmetric 3x3 matrices: (0,0) (0,1) (0,2) (1,1) (1,2) (2,2).
constexpr int kSymIndex[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};

Eigen::Matrix3d sym_basis(int k) {
  Eigen::Matrix3d e = Eigen::Matrix3d::Zero();
  e(kSymIndex[k][0], kSymIndex[k][1]) = 1.0;
  e(kSymIndex[k][1], kSymIndex[k][0]) = 1.0;
  return e;
}

Eigen::Matrix3d unpack_q(const Eigen::VectorXd& x) {
  Eigen::Matrix3d q = Eigen::Matrix3d::Zero();
  for (int k = 0; k < 6; ++k) q += x(k) * sym_basis(k);
  return q;
}

double max_eigenvalue(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

sdp::AffineLmi scalar_block(double constant, Eigen::VectorXd coeffs) {
  sdp::AffineLmi b;
  b.constant = Eigen::MatrixXd::Constant(1, 1, constant);
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) b.coeffs.push_back(Eigen::MatrixXd::Constant(1, 1, coeffs(i)));
  return b;
}

// Variables x = (q11, q12, q13, q22, q23, q33, alpha[, t]). When `free_margin`
// is false the margin is the fixed value `margin` and t is not a variable.
std::vector<sdp::AffineLmi> lmi_blocks(const LmiProblem& problem, const LmiSolverOptions& options, double alpha_cap,
                                       bool free_margin, double margin) {
  const int nvars = free_margin ? 8 : 7;
  const Eigen::Matrix<double, 5, 5> f0 = assemble_lmi(problem, Eigen::Matrix3d::Zero(), 0.0);

  // -F(Q, alpha) - t I > 0
  sdp::AffineLmi neg;
  neg.constant = -f0;
  if (!free_margin) neg.constant -= margin * Eigen::MatrixXd::Identity(5, 5);
  for (int k = 0; k < 6; ++k) neg.coeffs.push_back(-(assemble_lmi(problem, sym_basis(k), 0.0) - f0));
  neg.coeffs.push_back(-(assemble_lmi(problem, Eigen::Matrix3d::Zero(), 1.0) - f0));
  if (free_margin) neg.coeffs.push_back(-Eigen::MatrixXd::Identity(5, 5));

  // Q - t I > 0
  sdp::AffineLmi pos;
  pos.constant = Eigen::MatrixXd::Zero(3, 3);
  if (!free_margin) pos.constant -= margin * Eigen::MatrixXd::Identity(3, 3);
  for (int k = 0; k < 6; ++k) pos.coeffs.push_back(sym_basis(k));
  pos.coeffs.push_back(Eigen::MatrixXd::Zero(3, 3));
  if (free_margin) pos.coeffs.push_back(-Eigen::MatrixXd::Identity(3, 3));

  Eigen::VectorXd trace_row = Eigen::VectorXd::Zero(nvars);
  trace_row(0) = trace_row(3) = trace_row(5) = -1.0;
  Eigen::VectorXd alpha_row = Eigen::VectorXd::Zero(nvars);
  alpha_row(6) = 1.0;

  return {neg, pos, scalar_block(options.trace_cap, trace_row), scalar_block(0.0, alpha_row),
          scalar_block(alpha_cap, -alpha_row)};
}

LmiCertificate make_certificate(const LmiProblem& problem, const Eigen::Matrix3d& q, double alpha) {
  const double margin = -max_eigenvalue(assemble_lmi(problem, q, alpha));
  return {q, alpha, margin};
}

}  // namespace

void validate(const LmiProblem& problem) {
  if (!(problem.tau > 0) || !std::isfinite(problem.tau)) throw InvalidArgument("tau must be positive");
  if (!(problem.gamma_d > 0) || !std::isfinite(problem.gamma_d)) throw InvalidArgument("gamma_d must be positive");
}

LmiCertificate solve_lmi(const LmiProblem& problem, const LmiSolverOptions& options) {
  validate(problem);
  if (!(options.trace_cap > 0)) throw InvalidArgument("trace cap must be positive");
  if (!(options.min_margin > 0)) throw InvalidArgument("min margin must be positive");
  const double alpha_cap =
      options.alpha_cap > 0 ? options.alpha_cap : 1e3 * (1.0 + 1.0 / (problem.gamma_d * problem.gamma_d));

  // Phase 1: maximise the margin t from Q = I, alpha mid-range, t well below zero.
  const Eigen::Matrix3d q0 = Eigen::Matrix3d::Identity() * std::min(1.0, options.trace_cap / 6.0);
  const double alpha0 = std::min(alpha_cap / 2.0, 2.0 * (1.0 + 1.0 / (problem.gamma_d * problem.gamma_d)));
  const double t0 = std::min(-max_eigenvalue(assemble_lmi(problem, q0, alpha0)), min_eigenvalue(q0)) - 1.0;

  Eigen::VectorXd x(8);
  x << q0(0, 0), q0(0, 1), q0(0, 2), q0(1, 1), q0(1, 2), q0(2, 2), alpha0, t0;
  Eigen::VectorXd objective = Eigen::VectorXd::Zero(8);
  objective(7) = -1.0;
  const auto phase1 = sdp::minimize(objective, lmi_blocks(problem, options, alpha_cap, true, 0.0), x);
  const double best_margin = phase1.x(7);
  if (!(best_margin > options.min_margin))
    throw NumericalFailure("LMI margin " + std::to_string(best_margin) + " below required " +
                           std::to_string(options.min_margin));

  // Phase 2: smallest alpha that keeps a fixed share of the margin.
  const double margin = std::max(options.min_margin, options.margin_fraction * best_margin);
  LmiCertificate cert = make_certificate(problem, unpack_q(phase1.x), phase1.x(6));
  if (margin < best_margin) {
    Eigen::VectorXd objective2 = Eigen::VectorXd::Zero(7);
    objective2(6) = 1.0;
    const auto blocks = lmi_blocks(problem, options, alpha_cap, false, margin);
    const Eigen::VectorXd start = phase1.x.head(7);
    if (sdp::strictly_feasible(blocks, start)) {
      const auto phase2 = sdp::minimize(objective2, blocks, start);
      cert = make_certificate(problem, unpack_q(phase2.x), phase2.x(6));
    }
  }

  if (!verify_certificate(problem, cert, options.min_margin))
    throw NumericalFailure("LMI certificate failed independent verification");
  return cert;
}

bool verify_certificate(const LmiProblem& problem, const LmiCertificate& certificate, double min_margin) {
  if (!(certificate.alpha > 0)) return false;
  if (!(min_eigenvalue(certificate.Q) > 0)) return false;
  const double lmax = max_eigenvalue(assemble_lmi(problem, certificate.Q, certificate.alpha));
  return lmax <= -min_margin;
}

Eigen::Vector3d extract_gains(const LmiCertificate& certificate, const LmiProblem& problem) {
  validate(problem);
  const Eigen::Matrix3d q_inv = certificate.Q.inverse();
  return q_inv.row(2).transpose() / (2.0 * problem.tau);
}

double coupling_strength(const LmiCertificate& certificate, double lambda_min) {
  if (!(lambda_min > 0)) throw InvalidArgument("lambda_min must be positive (leader must reach every follower)");
  return certificate.alpha / lambda_min;
}

std::vector<double> closed_loop_modal_norms(double tau, const ControllerGains& gains, const Spectrum& spectrum) {
  std::vector<double> norms;
  for (double lambda : spectrum.eigenvalues) {
    const auto mode = make_modal_system(tau, gains.kp, gains.kv, gains.ka, gains.c, lambda);
    norms.push_back(is_hurwitz(mode) ? modal_hinf_norm(mode).norm : std::numeric_limits<double>::infinity());
  }
  return norms;
}

SynthesisResult synthesize(const LmiProblem& problem, const Spectrum& spectrum, const LmiSolverOptions& options) {
  validate(problem);
  const double lmin = spectrum.lambda_min();
  if (!(lmin > 0)) throw InvalidArgument("synthesis requires lambda_min(L+P) > 0");

  auto attempt = [&](const LmiSolverOptions& opts) {
    SynthesisResult r;
    r.certificate = solve_lmi(problem, opts);
    const Eigen::Vector3d k = extract_gains(r.certificate, problem);
    r.gains = {k(0), k(1), k(2), coupling_strength(r.certificate, lmin)};
    r.lambda_min = lmin;
    r.gamma_d = problem.gamma_d;
    r.tau = problem.tau;
    r.verified_modal_norms = closed_loop_modal_norms(problem.tau, r.gains, spectrum);
    return r;
  };
  auto verified = [&](const SynthesisResult& r) {
    return std::all_of(r.verified_modal_norms.begin(), r.verified_modal_norms.end(),
                       [&](double v) { return v < problem.gamma_d; });
  };

  SynthesisResult result = attempt(options);
  if (verified(result)) return result;
  LmiSolverOptions retry = options;
  retry.min_margin = std::max(options.min_margin, 1e-4);
  result = attempt(retry);
  if (verified(result)) return result;
  throw NumericalFailure("synthesised controller failed closed-loop verification");
}

}  // namespace platoon
