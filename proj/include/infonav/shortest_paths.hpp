#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <utility>

#include "infonav/policy.hpp"

namespace infonav {

/// Relative tolerance used to decide that two path lengths tie.
inline constexpr double kShortestPathTieTolerance = 1e-9;

/// Single-target shortest-path data under edge lengths 1/A_uv.
template <typename Scalar>
struct BasicDistanceField {
  Index target = -1;
  /// Weighted distance to the target.
  VectorX<Scalar> dist;
  /// Breadth-first hop count on the unweighted topology.
  Eigen::VectorX<Index> hops;
  /// Fewest hops among the weighted shortest paths. Equals `hops` on
  /// unit-weight graphs.
  Eigen::VectorX<Index> path_hops;
  /// Neighbors v of u with dist(u) = 1/A_uv + dist(v); empty at the target.
  std::vector<std::vector<Index>> next_hops;
};

using DistanceField = BasicDistanceField<double>;

/// Breadth-first hop counts to `target`; -1 for unreachable nodes.
template <typename Scalar>
Eigen::VectorX<Index> hop_counts(const BasicGraph<Scalar>& g, Index target) {
  Eigen::VectorX<Index> hops = Eigen::VectorX<Index>::Constant(g.size(), -1);
  std::queue<Index> frontier;
  hops(target) = 0;
  frontier.push(target);
  while (!frontier.empty()) {
    const Index u = frontier.front();
    frontier.pop();
    for (typename BasicGraph<Scalar>::Adjacency::InnerIterator it(g.adjacency(), u); it; ++it) {
      if (hops(it.col()) < 0) {
        hops(it.col()) = hops(u) + 1;
        frontier.push(it.col());
      }
    }
  }
  return hops;
}

/// Dijkstra from the target with lengths S_uv = 1/A_uv, plus hop counts and
/// shortest-path next-hop sets. Throws SolverError if some node cannot
/// reach the target.
template <typename Scalar>
BasicDistanceField<Scalar> shortest_paths(const BasicGraph<Scalar>& g, Index target) {
  using Adjacency = typename BasicGraph<Scalar>::Adjacency;
  const Index n = g.size();
  const Scalar inf = std::numeric_limits<Scalar>::infinity();

  BasicDistanceField<Scalar> field;
  field.target = target;
  field.dist = VectorX<Scalar>::Constant(n, inf);
  field.dist(target) = Scalar(0);

  using Entry = std::pair<Scalar, Index>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
  std::vector<char> done(static_cast<std::size_t>(n), 0);
  queue.emplace(Scalar(0), target);
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (done[u]) continue;
    done[u] = 1;
    for (typename Adjacency::InnerIterator it(g.adjacency(), u); it; ++it) {
      const Scalar candidate = d + Scalar(1) / it.value();
      if (candidate < field.dist(it.col())) {
        field.dist(it.col()) = candidate;
        queue.emplace(candidate, it.col());
      }
    }
  }
  for (Index u = 0; u < n; ++u)
    if (!done[u]) throw SolverError("node '" + g.label(u) + "' cannot reach target '" + g.label(target) + "'");

  field.next_hops.assign(static_cast<std::size_t>(n), {});
  for (Index u = 0; u < n; ++u) {
    if (u == target) continue;
    const Scalar du = field.dist(u);
    for (typename Adjacency::InnerIterator it(g.adjacency(), u); it; ++it) {
      const Scalar via = Scalar(1) / it.value() + field.dist(it.col());
      if (std::abs(du - via) <= Scalar(kShortestPathTieTolerance) * std::max(du, via))
        field.next_hops[u].push_back(it.col());
    }
    if (field.next_hops[u].empty())
      throw SolverError("no shortest-path successor at node '" + g.label(u) + "'");
  }

  field.hops = hop_counts(g, target);

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return field.dist(a) < field.dist(b); });
  field.path_hops = Eigen::VectorX<Index>::Zero(n);
  for (Index u : order) {
    if (u == target) continue;
    Index best = std::numeric_limits<Index>::max();
    for (Index v : field.next_hops[u]) best = std::min(best, field.path_hops(v));
    field.path_hops(u) = best + 1;
  }
  return field;
}

/// Shortest-path routing: uniform over the next-hop set, absorbing at the
/// target.
template <typename Scalar>
BasicPolicy<Scalar> sp_policy(const BasicGraph<Scalar>& g, const BasicDistanceField<Scalar>& field) {
  std::vector<Eigen::Triplet<Scalar>> triplets;
  for (Index u = 0; u < g.size(); ++u) {
    if (u == field.target) {
      triplets.emplace_back(u, u, Scalar(1));
      continue;
    }
    const auto& next = field.next_hops[u];
    if (next.empty()) throw SolverError("empty shortest-path successor set at node '" + g.label(u) + "'");
    const Scalar share = Scalar(1) / static_cast<Scalar>(next.size());
    for (Index v : next) triplets.emplace_back(u, v, share);
  }
  BasicPolicy<Scalar> p;
  p.target = field.target;
  p.kernel.resize(g.size(), g.size());
  p.kernel.setFromTriplets(triplets.begin(), triplets.end());
  p.kernel.makeCompressed();
  return p;
}

template <typename Scalar>
BasicPolicy<Scalar> sp_policy(const BasicGraph<Scalar>& g, Index target) {
  return sp_policy(g, shortest_paths(g, target));
}

}  // namespace infonav
