#include "platoon/topology.hpp"

#include <algorithm>
#include <queue>
#include <string>

#include "platoon/errors.hpp"

namespace platoon {

Topology::Topology(Eigen::MatrixXi adjacency, Eigen::VectorXi pinning)
    : adjacency_(std::move(adjacency)), pinning_(std::move(pinning)) {
  const auto n = pinning_.size();
  if (n < 1) throw InvalidArgument("topology needs at least one follower");
  if (adjacency_.rows() != n || adjacency_.cols() != n)
    throw InvalidArgument("adjacency must be " + std::to_string(n) + "x" + std::to_string(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (pinning_(i) != 0 && pinning_(i) != 1) throw InvalidArgument("pinning entries must be 0 or 1");
    if (adjacency_(i, i) != 0) throw InvalidArgument("self-loops are not allowed");
    for (Eigen::Index j = 0; j < n; ++j) {
      const int a = adjacency_(i, j);
      if (a != 0 && a != 1) throw InvalidArgument("adjacency entries must be 0 or 1");
      if (a != adjacency_(j, i)) throw InvalidArgument("adjacency must be symmetric");
    }
  }
}

Topology Topology::from_edges(int n, const std::vector<std::pair<int, int>>& edges,
                              const std::vector<int>& pinned) {
  if (n < 1) throw InvalidArgument("n must be positive");
  Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(n, n);
  Eigen::VectorXi pin = Eigen::VectorXi::Zero(n);
  for (auto [i, j] : edges) {
    if (i < 1 || i > n || j < 1 || j > n)
      throw InvalidArgument("edge endpoint out of range 1.." + std::to_string(n));
    if (i == j) throw InvalidArgument("self-loops are not allowed");
    adj(i - 1, j - 1) = 1;
    adj(j - 1, i - 1) = 1;
  }
  for (int p : pinned) {
    if (p < 1 || p > n) throw InvalidArgument("pinned index out of range 1.." + std::to_string(n));
    pin(p - 1) = 1;
  }
  return Topology(std::move(adj), std::move(pin));
}

std::vector<std::pair<int, int>> Topology::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j)
      if (adjacency_(i, j)) out.emplace_back(i + 1, j + 1);
  return out;
}

std::vector<int> Topology::pinned() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (pinning_(i)) out.push_back(i + 1);
  return out;
}

int Topology::edge_count() const { return adjacency_.sum() / 2; }
int Topology::pin_count() const { return pinning_.sum(); }

Topology Topology::with_edge(int i, int j) const {
  if (i < 1 || j < 1 || i > size() || j > size() || i == j) throw InvalidArgument("invalid edge");
  Eigen::MatrixXi adj = adjacency_;
  adj(i - 1, j - 1) = adj(j - 1, i - 1) = 1;
  return Topology(std::move(adj), pinning_);
}

Topology Topology::with_pin(int i) const {
  if (i < 1 || i > size()) throw InvalidArgument("invalid pin index");
  Eigen::VectorXi pin = pinning_;
  pin(i - 1) = 1;
  return Topology(adjacency_, std::move(pin));
}

Topology build_h_neighbor(int n, int h, const std::set<int>& pinned) {
  if (n < 1) throw InvalidArgument("n must be positive");
  if (h < 1) throw InvalidArgument("h must be at least 1");
  if (pinned.empty()) throw InvalidArgument("at least one follower must be pinned");
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= std::min(n, i + h); ++j) edges.emplace_back(i, j);
  return Topology::from_edges(n, edges, {pinned.begin(), pinned.end()});
}

Topology build_bd(int n) { return build_h_neighbor(n, 1, {1}); }

Topology build_bdl(int n) {
  if (n < 1) throw InvalidArgument("n must be positive");
  std::set<int> all;
  for (int i = 1; i <= n; ++i) all.insert(i);
  return build_h_neighbor(n, 1, all);
}

Topology build_star(int n) {
  if (n < 1) throw InvalidArgument("n must be positive");
  return Topology(Eigen::MatrixXi::Zero(n, n), Eigen::VectorXi::Ones(n));
}

Topology build_mini_platoons(const std::vector<int>& sizes, MiniPlatoonOptions options) {
  if (sizes.empty()) throw InvalidArgument("at least one mini-platoon is required");
  if (options.intra_h < 1) throw InvalidArgument("intra_h must be at least 1");
  int n = 0;
  for (int s : sizes) {
    if (s < 1) throw InvalidArgument("mini-platoon sizes must be positive");
    n += s;
  }
  std::vector<std::pair<int, int>> edges;
  std::vector<int> pinned;
  int head = 1;
  for (int s : sizes) {
    const int tail = head + s - 1;
    pinned.push_back(head);
    for (int i = head; i <= tail; ++i)
      for (int j = i + 1; j <= std::min(tail, i + options.intra_h); ++j) edges.emplace_back(i, j);
    if (options.link_adjacent_blocks && tail < n) edges.emplace_back(tail, tail + 1);
    head = tail + 1;
  }
  return Topology::from_edges(n, edges, pinned);
}

TopologyMatrix assemble(const Topology& topology) {
  const Eigen::MatrixXd adj = topology.adjacency().cast<double>();
  TopologyMatrix m;
  m.degree = adj.rowwise().sum();
  m.lp = -adj;
  m.lp.diagonal() += m.degree + topology.pinning().cast<double>();
  return m;
}

bool is_leader_reachable(const Topology& topology) {
  const int n = topology.size();
  std::vector<char> seen(n, 0);
  std::queue<int> frontier;
  for (int i = 0; i < n; ++i) {
    if (topology.pinning()(i)) {
      seen[i] = 1;
      frontier.push(i);
    }
  }
  while (!frontier.empty()) {
    const int i = frontier.front();
    frontier.pop();
    for (int j = 0; j < n; ++j) {
      if (topology.adjacency()(i, j) && !seen[j]) {
        seen[j] = 1;
        frontier.push(j);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](char s) { return s != 0; });
}

Spectrum spectrum(const Eigen::MatrixXd& symmetric) {
  if (symmetric.rows() != symmetric.cols() || symmetric.rows() == 0)
    throw InvalidArgument("spectrum requires a non-empty square matrix");
  const double norm_inf = symmetric.cwiseAbs().rowwise().sum().maxCoeff();
  const double asym = (symmetric - symmetric.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * (1.0 + norm_inf)) throw InvalidArgument("matrix is not symmetric");

  // Tridiagonalisation followed by implicit symmetric QR; eigenvalues ascend.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric);
  if (solver.info() != Eigen::Success) throw NumericalFailure("symmetric eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double lambda_min(const Topology& topology) {
  const Eigen::MatrixXd lp = assemble(topology).lp;
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(lp, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

}  // namespace platoon
