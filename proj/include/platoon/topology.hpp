#pragma once

#include <Eigen/Dense>

#include <set>
#include <utility>
#include <vector>

namespace platoon {

/// Undirected follower communication graph plus leader pinning.
///
/// Followers are indexed 1..N in every public interface (the leader is the
/// implicit node 0); internally matrices are 0-based. Instances are validated
/// on construction and immutable afterwards.
class Topology {
 public:
  /// Validates symmetry, zero diagonal and 0/1 entries. Throws InvalidArgument.
  Topology(Eigen::MatrixXi adjacency, Eigen::VectorXi pinning);

  /// Builds from 1-based follower edges and pinned indices.
  static Topology from_edges(int n, const std::vector<std::pair<int, int>>& edges,
                             const std::vector<int>& pinned);

  int size() const { return static_cast<int>(pinning_.size()); }
  const Eigen::MatrixXi& adjacency() const { return adjacency_; }
  const Eigen::VectorXi& pinning() const { return pinning_; }

  /// Sorted 1-based (i, j) pairs with i < j.
  std::vector<std::pair<int, int>> edges() const;
  /// Sorted 1-based pinned follower indices.
  std::vector<int> pinned() const;

  int edge_count() const;
  int pin_count() const;
  /// Follower edges plus pins, each counted once.
  int link_count() const { return edge_count() + pin_count(); }

  bool has_edge(int i, int j) const { return adjacency_(i - 1, j - 1) != 0; }
  bool is_pinned(int i) const { return pinning_(i - 1) != 0; }

  Topology with_edge(int i, int j) const;
  Topology with_pin(int i) const;

  friend bool operator==(const Topology& a, const Topology& b) {
    return a.adjacency_ == b.adjacency_ && a.pinning_ == b.pinning_;
  }

 private:
  Eigen::MatrixXi adjacency_;
  Eigen::VectorXi pinning_;
};

/// L + P together with the in-degree vector.
struct TopologyMatrix {
  Eigen::MatrixXd lp;
  Eigen::VectorXd degree;
};

/// Ascending eigenvalues and orthonormal eigenvectors (columns) of L + P.
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;

  double lambda_min() const { return eigenvalues(0); }
  double lambda_max() const { return eigenvalues(eigenvalues.size() - 1); }
};

// Builders. `pinned` uses 1-based follower indices.

/// Every follower talks to all peers within index distance h. h saturates at
/// n - 1 (fully connected followers).
Topology build_h_neighbor(int n, int h, const std::set<int>& pinned);

/// Bidirectional chain pinned at follower 1.
Topology build_bd(int n);
/// Bidirectional chain with every follower pinned.
Topology build_bdl(int n);

/// No follower links, every follower pinned (L = 0, P = I).
Topology build_star(int n);

struct MiniPlatoonOptions {
  int intra_h = 1;
  /// Keep the nearest-neighbour link between the tail of one block and the
  /// head of the next. The published mini-platoon spectra are reproduced only
  /// with these links present.
  bool link_adjacent_blocks = true;
};

/// Consecutive blocks of followers, each an h-neighbour chain whose first
/// vehicle is the only one pinned to the leader.
Topology build_mini_platoons(const std::vector<int>& sizes, MiniPlatoonOptions options = {});

TopologyMatrix assemble(const Topology& topology);

/// Every follower reachable from the leader through pins and follower edges.
bool is_leader_reachable(const Topology& topology);

/// Symmetric eigendecomposition. Rejects inputs whose asymmetry exceeds
/// 1e-12 * (1 + ||M||_inf).
Spectrum spectrum(const Eigen::MatrixXd& symmetric);
inline Spectrum spectrum(const TopologyMatrix& matrix) { return spectrum(matrix.lp); }

/// Smallest eigenvalue of L + P.
double lambda_min(const Topology& topology);

}  // namespace platoon
