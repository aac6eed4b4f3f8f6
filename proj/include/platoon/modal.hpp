#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "platoon/errors.hpp"
#include "platoon/topology.hpp"
#include "platoon/vehicle.hpp"

namespace platoon {

/// One decoupled closed-loop mode
///   G(s) = 1 / (a3 s^3 + a2 s^2 + a1 s + a0)
/// with (a3, a2, a1, a0) = (tau, 1 + c*lambda*ka, c*lambda*kv, c*lambda*kp).
template <typename Scalar>
struct ModalSystem {
  Scalar lambda_eff;
  Scalar a3, a2, a1, a0;
};

template <typename Scalar>
ModalSystem<Scalar> make_modal_system(Scalar tau, Scalar kp, Scalar kv, Scalar ka, Scalar c,
                                      Scalar lambda) {
  const Scalar le = c * lambda;
  return {le, tau, Scalar(1) + le * ka, le * kv, le * kp};
}

inline ModalSystem<double> make_modal_system(const VehicleParams& params, const ControllerGains& gains,
                                             double lambda) {
  return make_modal_system(params.tau, gains.kp, gains.kv, gains.ka, gains.c, lambda);
}

/// Routh-Hurwitz for a cubic.
template <typename Scalar>
bool is_hurwitz(const ModalSystem<Scalar>& m) {
  return m.a3 > 0 && m.a2 > 0 && m.a1 > 0 && m.a0 > 0 && m.a2 * m.a1 > m.a3 * m.a0;
}

/// |D(jw)|^2 written as a cubic in x = w^2.
template <typename Scalar>
Scalar magnitude_denominator(const ModalSystem<Scalar>& m, Scalar x) {
  const Scalar c6 = m.a3 * m.a3;
  const Scalar c4 = m.a2 * m.a2 - Scalar(2) * m.a1 * m.a3;
  const Scalar c2 = m.a1 * m.a1 - Scalar(2) * m.a0 * m.a2;
  const Scalar c0 = m.a0 * m.a0;
  return ((c6 * x + c4) * x + c2) * x + c0;
}

template <typename Scalar>
struct HinfNorm {
  Scalar norm;
  Scalar peak_frequency;
};

/// Exact H-infinity norm of a Hurwitz mode.
///
/// The peak of |G(jw)| is the minimum of the magnitude cubic over x = w^2 >= 0,
/// attained either at x = 0 or at a positive stationary point. Throws
/// InvalidArgument for non-Hurwitz input.
template <typename Scalar>
HinfNorm<Scalar> modal_hinf_norm(const ModalSystem<Scalar>& m) {
  using std::sqrt;
  if (!is_hurwitz(m)) throw InvalidArgument("modal H-infinity norm requires a Hurwitz mode");

  // d/dx: 3 c6 x^2 + 2 c4 x + c2
  const Scalar qa = Scalar(3) * m.a3 * m.a3;
  const Scalar qb = Scalar(2) * (m.a2 * m.a2 - Scalar(2) * m.a1 * m.a3);
  const Scalar qc = m.a1 * m.a1 - Scalar(2) * m.a0 * m.a2;

  Scalar best_x = Scalar(0);
  Scalar best_val = magnitude_denominator(m, Scalar(0));
  auto consider = [&](Scalar x) {
    if (!(x > Scalar(0))) return;
    const Scalar v = magnitude_denominator(m, x);
    if (v < best_val) {
      best_val = v;
      best_x = x;
    }
  };

  const Scalar disc = qb * qb - Scalar(4) * qa * qc;
  if (disc >= Scalar(0)) {
    const Scalar root = sqrt(disc);
    const Scalar q = -(qb + (qb >= Scalar(0) ? root : -root)) / Scalar(2);
    if (q != Scalar(0)) {
      consider(q / qa);
      consider(qc / q);
    } else {
      // qb == 0 and disc == 0: double root at the origin.
      consider(Scalar(0));
    }
  }
  return {Scalar(1) / sqrt(best_val), sqrt(best_x)};
}

std::vector<ModalSystem<double>> modal_systems(const VehicleParams& params, const ControllerGains& gains,
                                               const Spectrum& spectrum);

struct ModeNorm {
  double lambda;
  double norm;  ///< +inf for a non-Hurwitz mode
  double peak_frequency;
};

struct GammaReport {
  double gamma;        ///< +inf when unstable
  std::vector<ModeNorm> per_mode;
  double lower_bound;  ///< 1 / (c * lambda_min * kp)
  bool stable;
};

/// Platoon gamma-gain as the largest modal H-infinity norm.
GammaReport gamma_gain(const VehicleParams& params, const ControllerGains& gains, const Spectrum& spectrum);

/// 4096 log-spaced points on [1e-3, 1e3] rad/s, plus w = 0 and any extra
/// frequencies, sorted and deduplicated.
std::vector<double> default_frequency_grid(const std::vector<double>& extra = {});

/// Max over the grid of sigma_max of
///   [I (tau s^3 + s^2) + c (L+P)(kp + kv s + ka s^2)]^{-1},  s = j w.
/// Returns +inf if the matrix is singular at some grid point.
double gamma_gain_full_system(const VehicleParams& params, const ControllerGains& gains,
                              const TopologyMatrix& matrix, const std::vector<double>& freq_grid);

/// A topology parametrised by platoon size.
struct TopologyFamily {
  enum class Bound { kChain, kPinningRatio };

  std::string name;
  std::function<Topology(int)> build;
  /// kChain: N^2 / (c kp pi^2); kPinningRatio: N / (c kp Omega).
  Bound bound = Bound::kPinningRatio;
};

TopologyFamily bd_family();
TopologyFamily bdl_family();
TopologyFamily star_family();
/// Nearest-h neighbours (saturating at N - 1) with the given followers pinned.
TopologyFamily h_neighbor_family(int h, std::set<int> pinned = {1});

struct SweepRow {
  int n;
  double gamma;
  double lower_bound;
  double lambda_min;
  bool stable;
};

/// Rows are returned in the order of `sizes`, regardless of `workers`.
std::vector<SweepRow> scaling_sweep(const TopologyFamily& family, const std::vector<int>& sizes,
                                    const VehicleParams& params, const ControllerGains& gains,
                                    unsigned workers = 1);

}  // namespace platoon
