#pragma once

// Reference implementations used only by the tests. Each one takes a different
// route from the library code it checks.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "platoon/topology.hpp"

namespace oracle {

/// Cyclic Jacobi rotations; returns ascending eigenvalues.
inline Eigen::VectorXd jacobi_eigenvalues(Eigen::MatrixXd a, int max_sweeps = 100) {
  const auto n = a.rows();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30 * (1.0 + a.squaredNorm())) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  Eigen::VectorXd d = a.diagonal();
  std::sort(d.data(), d.data() + d.size());
  return d;
}

/// L + P built entry by entry from the edge and pin lists.
inline Eigen::MatrixXd laplacian_plus_pinning(const platoon::Topology& t) {
  const int n = t.size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [i, j] : t.edges()) {
    m(i - 1, j - 1) -= 1;
    m(j - 1, i - 1) -= 1;
    m(i - 1, i - 1) += 1;
    m(j - 1, j - 1) += 1;
  }
  for (int i : t.pinned()) m(i - 1, i - 1) += 1;
  return m;
}

/// Roots of a3 s^3 + a2 s^2 + a1 s + a0 from the companion matrix.
inline Eigen::Vector3cd cubic_roots(double a3, double a2, double a1, double a0) {
  Eigen::Matrix3d c = Eigen::Matrix3d::Zero();
  c(0, 1) = 1;
  c(1, 2) = 1;
  c.row(2) << -a0 / a3, -a1 / a3, -a2 / a3;
  return Eigen::EigenSolver<Eigen::Matrix3d>(c, false).eigenvalues();
}

inline bool roots_in_left_half_plane(double a3, double a2, double a1, double a0) {
  const auto r = cubic_roots(a3, a2, a1, a0);
  return (r.real().array() < 0).all();
}

/// |1 / D(jw)| for D(s) = a3 s^3 + a2 s^2 + a1 s + a0, evaluated in complex arithmetic.
inline double cubic_gain(double a3, double a2, double a1, double a0, double w) {
  const std::complex<double> s(0.0, w);
  return 1.0 / std::abs(((a3 * s + a2) * s + a1) * s + a0);
}

struct SweepPeak {
  double gain;
  double frequency;
};

/// Dense log sweep over [w_lo, w_hi] plus w = 0, followed by golden-section
/// refinement around the best grid point.
inline SweepPeak sweep_peak(double a3, double a2, double a1, double a0, int points, double w_lo = 1e-4,
                            double w_hi = 1e4) {
  SweepPeak best{cubic_gain(a3, a2, a1, a0, 0.0), 0.0};
  const double step = std::log(w_hi / w_lo) / (points - 1);
  int best_k = -1;
  for (int k = 0; k < points; ++k) {
    const double w = w_lo * std::exp(step * k);
    const double g = cubic_gain(a3, a2, a1, a0, w);
    if (g > best.gain) {
      best = {g, w};
      best_k = k;
    }
  }
  if (best_k < 0) return best;
  double lo = w_lo * std::exp(step * std::max(0, best_k - 1));
  double hi = w_lo * std::exp(step * std::min(points - 1, best_k + 1));
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double x1 = hi - phi * (hi - lo);
    const double x2 = lo + phi * (hi - lo);
    if (cubic_gain(a3, a2, a1, a0, x1) > cubic_gain(a3, a2, a1, a0, x2)) {
      hi = x2;
    } else {
      lo = x1;
    }
  }
  const double w = 0.5 * (lo + hi);
  const double g = cubic_gain(a3, a2, a1, a0, w);
  if (g > best.gain) best = {g, w};
  return best;
}

/// Random connected-to-leader topology: random edges with probability p, at
/// least one pin, then extra pins until every component is reached.
inline platoon::Topology random_reachable_topology(int n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::uniform_int_distribution<int> pick(1, n);
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      if (coin(rng)) edges.emplace_back(i, j);
  std::vector<int> pins{pick(rng)};
  platoon::Topology t = platoon::Topology::from_edges(n, edges, pins);
  while (!platoon::is_leader_reachable(t)) t = t.with_pin(pick(rng));
  return t;
}

}  // namespace oracle
