#pragma once

#include <string>

#include "platoon/topology.hpp"

namespace platoon {

/// Global cap on communication links: follower edges plus pins, each counted once.
struct LinkBudget {
  int max_links = 1;
};

enum class SearchMethod { kExhaustive, kGreedy };

std::string to_string(SearchMethod method);

struct OptimizationResult {
  Topology best;
  double lambda_min;
  int links_used;
  SearchMethod method;
  /// min(1, pins / N).
  double upper_bound;
};

/// Globally optimal topology over every follower graph and pinning set with at
/// most budget.max_links links that keeps the leader reachable. Ties in
/// lambda_min (within 1e-12) go to fewer links, then to the lexicographically
/// smallest link list, with a pin on follower i written as (0, i).
/// Requires n <= 6. Throws InvalidArgument for budget < 1 and Infeasible when
/// no admissible topology exists.
OptimizationResult optimize_exhaustive(int n, LinkBudget budget, unsigned workers = 1);

/// Starts from the pinned chain (n links) and repeatedly adds the link that
/// most increases lambda_min. Pins win ties, then the smallest index. Stops
/// when the budget is spent or no candidate improves lambda_min.
/// Throws Infeasible when budget < n.
OptimizationResult optimize_greedy(int n, LinkBudget budget, unsigned workers = 1);

struct LambdaBounds {
  double lambda_min;
  double unit_cap = 1.0;
  /// pins / N
  double pinning_ratio_cap;
};

/// lambda_min(L+P) alongside its two upper bounds. Requires leader reachability.
LambdaBounds lambda_min_bounds(const Topology& topology);

}  // namespace platoon
