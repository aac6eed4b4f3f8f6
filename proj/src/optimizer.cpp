#include "platoon/optimizer.hpp"

#include <bit>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "platoon/errors.hpp"
#include "platoon/parallel.hpp"

namespace platoon {

namespace {

constexpr double kTieTolerance = 1e-12;
constexpr int kMaxExhaustive = 6;
constexpr std::size_t kChunks = 64;

using Link = std::pair<int, int>;
using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxExhaustive, kMaxExhaustive>;

// Bit layout for the exhaustive search: follower edges (i < j, row-major),
// then one bit per pin.
struct Layout {
  int n;
  std::vector<Link> edges;  // 0-based
  int bits() const { return static_cast<int>(edges.size()) + n; }
};

Layout make_layout(int n) {
  Layout layout{n, {}};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) layout.edges.emplace_back(i, j);
  return layout;
}

bool reachable(const Layout& layout, std::uint32_t mask) {
  const int e = static_cast<int>(layout.edges.size());
  std::uint32_t seen = (mask >> e) & ((1u << layout.n) - 1u);
  if (seen == 0) return false;
  const std::uint32_t all = (1u << layout.n) - 1u;
  bool grew = true;
  while (grew && seen != all) {
    grew = false;
    for (int k = 0; k < e; ++k) {
      if (!(mask & (1u << k))) continue;
      const auto [i, j] = layout.edges[k];
      const std::uint32_t bi = 1u << i;
      const std::uint32_t bj = 1u << j;
      if (((seen & bi) != 0) != ((seen & bj) != 0)) {
        seen |= bi | bj;
        grew = true;
      }
    }
  }
  return seen == all;
}

double mask_lambda_min(const Layout& layout, std::uint32_t mask) {
  SmallMatrix lp = SmallMatrix::Zero(layout.n, layout.n);
  const int e = static_cast<int>(layout.edges.size());
  for (int k = 0; k < e; ++k) {
    if (!(mask & (1u << k))) continue;
    const auto [i, j] = layout.edges[k];
    lp(i, j) -= 1.0;
    lp(j, i) -= 1.0;
    lp(i, i) += 1.0;
    lp(j, j) += 1.0;
  }
  for (int i = 0; i < layout.n; ++i)
    if (mask & (1u << (e + i))) lp(i, i) += 1.0;
  return Eigen::SelfAdjointEigenSolver<SmallMatrix>(lp, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

// Sorted 1-based links with pins written as (0, i).
std::vector<Link> canonical_links(const Layout& layout, std::uint32_t mask) {
  std::vector<Link> links;
  const int e = static_cast<int>(layout.edges.size());
  for (int i = 0; i < layout.n; ++i)
    if (mask & (1u << (e + i))) links.emplace_back(0, i + 1);
  std::vector<Link> edges;
  for (int k = 0; k < e; ++k)
    if (mask & (1u << k)) edges.emplace_back(layout.edges[k].first + 1, layout.edges[k].second + 1);
  links.insert(links.end(), edges.begin(), edges.end());
  return links;
}

struct Candidate {
  std::uint32_t mask;
  double lambda;
  int links;
};

// True if a should be preferred over b.
bool better(const Layout& layout, const Candidate& a, const Candidate& b) {
  if (a.lambda > b.lambda + kTieTolerance) return true;
  if (b.lambda > a.lambda + kTieTolerance) return false;
  if (a.links != b.links) return a.links < b.links;
  return canonical_links(layout, a.mask) < canonical_links(layout, b.mask);
}

Topology mask_topology(const Layout& layout, std::uint32_t mask) {
  std::vector<Link> edges;
  std::vector<int> pins;
  const int e = static_cast<int>(layout.edges.size());
  for (int k = 0; k < e; ++k)
    if (mask & (1u << k)) edges.emplace_back(layout.edges[k].first + 1, layout.edges[k].second + 1);
  for (int i = 0; i < layout.n; ++i)
    if (mask & (1u << (e + i))) pins.push_back(i + 1);
  return Topology::from_edges(layout.n, edges, pins);
}

double pinning_ratio(const Topology& t) { return static_cast<double>(t.pin_count()) / t.size(); }

}  // namespace

std::string to_string(SearchMethod method) { return method == SearchMethod::kExhaustive ? "exhaustive" : "greedy"; }

OptimizationResult optimize_exhaustive(int n, LinkBudget budget, unsigned workers) {
  if (n < 1) throw InvalidArgument("platoon size must be positive");
  if (n > kMaxExhaustive) throw InvalidArgument("exhaustive search supports at most 6 followers");
  if (budget.max_links < 1) throw InvalidArgument("link budget must be at least 1");

  const Layout layout = make_layout(n);
  const std::uint64_t total = std::uint64_t{1} << layout.bits();
  const std::uint64_t chunk = (total + kChunks - 1) / kChunks;

  // Fixed chunking keeps the reduction order independent of the worker count.
  const auto partial = parallel_map(kChunks, workers, [&](std::size_t c) -> std::optional<Candidate> {
    std::optional<Candidate> best;
    const std::uint64_t lo = c * chunk;
    const std::uint64_t hi = std::min(total, lo + chunk);
    for (std::uint64_t m = lo; m < hi; ++m) {
      const auto mask = static_cast<std::uint32_t>(m);
      const int links = std::popcount(mask);
      if (links > budget.max_links || !reachable(layout, mask)) continue;
      const Candidate cand{mask, mask_lambda_min(layout, mask), links};
      if (!best || better(layout, cand, *best)) best = cand;
    }
    return best;
  });

  std::optional<Candidate> best;
  for (const auto& p : partial)
    if (p && (!best || better(layout, *p, *best))) best = p;
  if (!best) throw Infeasible("no topology with " + std::to_string(budget.max_links) + " links reaches every follower");

  Topology topo = mask_topology(layout, best->mask);
  const double ratio = pinning_ratio(topo);
  return {std::move(topo), best->lambda, best->links, SearchMethod::kExhaustive, std::min(1.0, ratio)};
}

OptimizationResult optimize_greedy(int n, LinkBudget budget, unsigned workers) {
  if (n < 1) throw InvalidArgument("platoon size must be positive");
  if (budget.max_links < 1) throw InvalidArgument("link budget must be at least 1");
  if (budget.max_links < n)
    throw Infeasible("a budget of " + std::to_string(budget.max_links) + " links cannot reach " + std::to_string(n) +
                     " followers");

  Topology current = build_bd(n);
  double current_lambda = lambda_min(current);
  while (current.link_count() < budget.max_links) {
    // Candidate order encodes the tie-break: pins by index, then edges (i, j).
    std::vector<Link> candidates;
    for (int i = 1; i <= n; ++i)
      if (!current.is_pinned(i)) candidates.emplace_back(0, i);
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        if (!current.has_edge(i, j)) candidates.emplace_back(i, j);
    if (candidates.empty()) break;

    const auto values = parallel_map(candidates.size(), workers, [&](std::size_t k) {
      const auto [i, j] = candidates[k];
      return lambda_min(i == 0 ? current.with_pin(j) : current.with_edge(i, j));
    });
    std::size_t pick = 0;
    for (std::size_t k = 1; k < values.size(); ++k)
      if (values[k] > values[pick] + kTieTolerance) pick = k;
    if (!(values[pick] > current_lambda + kTieTolerance)) break;

    const auto [i, j] = candidates[pick];
    current = i == 0 ? current.with_pin(j) : current.with_edge(i, j);
    current_lambda = values[pick];
  }
  const double ratio = pinning_ratio(current);
  const int links = current.link_count();
  return {std::move(current), current_lambda, links, SearchMethod::kGreedy, std::min(1.0, ratio)};
}

LambdaBounds lambda_min_bounds(const Topology& topology) {
  if (!is_leader_reachable(topology)) throw InvalidArgument("topology does not reach every follower from the leader");
  return {lambda_min(topology), 1.0, pinning_ratio(topology)};
}

}  // namespace platoon
