#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "platoon/errors.hpp"
#include "platoon/presets.hpp"
#include "platoon/topology.hpp"

using namespace platoon;

TEST_CASE("h-neighbour builder links peers within distance h") {
  const Topology t = build_h_neighbor(6, 2, {1});
  CHECK(t.has_edge(1, 2));
  CHECK(t.has_edge(1, 3));
  CHECK_FALSE(t.has_edge(1, 4));
  CHECK(t.edge_count() == 5 + 4);
  CHECK(t.pinned() == std::vector<int>{1});
  CHECK(t.link_count() == 10);
}

TEST_CASE("h saturates at n - 1") {
  CHECK(build_h_neighbor(5, 4, {1}) == build_h_neighbor(5, 100, {1}));
  CHECK(build_h_neighbor(5, 100, {1}).edge_count() == 10);
}

TEST_CASE("builders reject invalid input") {
  CHECK_THROWS_AS(build_h_neighbor(5, 1, {}), InvalidArgument);
  CHECK_THROWS_AS(build_h_neighbor(5, 0, {1}), InvalidArgument);
  CHECK_THROWS_AS(build_h_neighbor(0, 1, {1}), InvalidArgument);
  CHECK_THROWS_AS(build_mini_platoons({}), InvalidArgument);
  CHECK_THROWS_AS(build_mini_platoons({3, 0}), InvalidArgument);
  CHECK_THROWS_AS(Topology::from_edges(3, {{1, 1}}, {1}), InvalidArgument);
  CHECK_THROWS_AS(Topology::from_edges(3, {{1, 4}}, {1}), InvalidArgument);
  CHECK_THROWS_AS(Topology::from_edges(3, {}, {0}), InvalidArgument);
}

TEST_CASE("adjacency must be symmetric 0/1 with empty diagonal") {
  Eigen::MatrixXi a = Eigen::MatrixXi::Zero(3, 3);
  a(0, 1) = 1;
  CHECK_THROWS_AS(Topology(a, Eigen::VectorXi::Ones(3)), InvalidArgument);
  a(1, 0) = 1;
  CHECK_NOTHROW(Topology(a, Eigen::VectorXi::Ones(3)));
  a(2, 2) = 1;
  CHECK_THROWS_AS(Topology(a, Eigen::VectorXi::Ones(3)), InvalidArgument);
  CHECK_THROWS_AS(Topology(Eigen::MatrixXi::Zero(3, 3), Eigen::VectorXi::Constant(3, 2)), InvalidArgument);
}

TEST_CASE("L + P rows sum to the pinning vector") {
  const Topology t = build_mini_platoons({3, 4, 3});
  const TopologyMatrix m = assemble(t);
  CHECK(m.lp.isApprox(m.lp.transpose()));
  const Eigen::VectorXd rows = m.lp.rowwise().sum();
  CHECK(rows.isApprox(t.pinning().cast<double>()));
  CHECK(m.lp.isApprox(oracle::laplacian_plus_pinning(t)));
}

TEST_CASE("chain and star spectra") {
  // BDL: L_chain + I, smallest eigenvalue 1.
  CHECK(lambda_min(build_bdl(8)) == doctest::Approx(1.0).epsilon(1e-12));
  // Star: L = 0, P = I.
  const Spectrum s = spectrum(assemble(build_star(7)));
  CHECK((s.eigenvalues.array() - 1.0).abs().maxCoeff() < 1e-14);
  // Single follower pinned to the leader.
  CHECK(lambda_min(build_bd(1)) == doctest::Approx(1.0));
  // Chain pinned at one end: lambda_min = 2 - 2 cos(pi / (2N + 1)).
  const int n = 12;
  CHECK(lambda_min(build_bd(n)) == doctest::Approx(2.0 - 2.0 * std::cos(M_PI / (2 * n + 1))).epsilon(1e-12));
}

TEST_CASE("isolated unit mini-platoons give the identity") {
  const Topology t = build_mini_platoons({1, 1}, {1, false});
  CHECK(assemble(t).lp.isApprox(Eigen::MatrixXd::Identity(2, 2)));
  CHECK(lambda_min(build_mini_platoons({1, 1})) == doctest::Approx(1.0));
}

TEST_CASE("benchmark topologies reproduce the published smallest eigenvalues") {
  const double expected[] = {0.0557, 0.0806, 0.0810, 0.1790};
  const auto topologies = presets::benchmark_topologies();
  REQUIRE(topologies.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CAPTURE(topologies[i].name);
    CHECK(std::abs(lambda_min(topologies[i].topology) - expected[i]) < 5e-5);
  }
}

TEST_CASE("mini-platoons without boundary links fall short of the published value") {
  CHECK(lambda_min(build_mini_platoons({3, 4, 3}, {1, false})) == doctest::Approx(0.1206).epsilon(1e-3));
}

TEST_CASE("leader reachability") {
  CHECK(is_leader_reachable(build_bd(10)));
  CHECK_FALSE(is_leader_reachable(Topology::from_edges(3, {{1, 2}}, {1})));
  CHECK(is_leader_reachable(Topology::from_edges(3, {{1, 2}}, {1, 3})));
  CHECK_FALSE(is_leader_reachable(Topology::from_edges(2, {{1, 2}}, {})));
}

TEST_CASE("unreachable followers give a zero eigenvalue") {
  CHECK(std::abs(lambda_min(Topology::from_edges(3, {{1, 2}}, {1}))) < 1e-12);
}

TEST_CASE("spectrum matches the Jacobi oracle on random symmetric matrices") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 11;
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
    a = 0.5 * (a + a.transpose()).eval();
    const Spectrum s = spectrum(a);
    const Eigen::VectorXd ref = oracle::jacobi_eigenvalues(a);
    CHECK((s.eigenvalues - ref).cwiseAbs().maxCoeff() < 1e-11 * (1.0 + ref.cwiseAbs().maxCoeff()));
    // Orthonormal eigenvectors reconstruct the matrix.
    const Eigen::MatrixXd rebuilt = s.eigenvectors * s.eigenvalues.asDiagonal() * s.eigenvectors.transpose();
    CHECK((rebuilt - a).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("spectrum rejects asymmetric input") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
  a(0, 2) = 1e-6;
  CHECK_THROWS_AS(spectrum(a), InvalidArgument);
}

TEST_CASE("random reachable topologies are positive definite") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Topology t = oracle::random_reachable_topology(2 + trial % 10, 0.3, rng);
    const Spectrum s = spectrum(assemble(t));
    CHECK(s.lambda_min() > 0);
    CHECK(s.lambda_min() <= 1.0 + 1e-12);
  }
}

TEST_CASE("edges and pins list in canonical order") {
  const Topology t = Topology::from_edges(4, {{3, 1}, {2, 4}, {1, 2}}, {4, 2});
  CHECK(t.edges() == std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 4}});
  CHECK(t.pinned() == std::vector<int>{2, 4});
  CHECK(t.with_edge(3, 4).edge_count() == 4);
  CHECK(t.with_pin(1).pin_count() == 3);
  CHECK(t.with_pin(2) == t);
}
