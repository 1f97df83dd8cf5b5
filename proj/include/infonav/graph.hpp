#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <algorithm>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "infonav/error.hpp"

namespace infonav {

using Index = Eigen::Index;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using SparseRowMatrix = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

/// One undirected edge record, endpoints given as dense node indices.
template <typename Scalar>
struct WeightedEdge {
  Index source;
  Index target;
  Scalar weight;
};

struct BuildStats {
  Index dropped_isolated = 0;
  Index dropped_zero_weight = 0;
};

/// Weighted undirected graph over labeled nodes.
///
/// The adjacency is stored row-major and exactly symmetric, with no
/// self-loops and no zero entries. Every node has positive degree:
/// nodes left isolated after aggregation are removed at construction.
/// Immutable once built.
template <typename Scalar>
class BasicGraph {
 public:
  using Adjacency = SparseRowMatrix<Scalar>;
  using Vector = VectorX<Scalar>;

  BasicGraph() = default;

  /// Duplicate records are summed. Throws InputError on self-loops,
  /// negative weights, out-of-range endpoints or an empty result.
  static BasicGraph from_edges(std::vector<std::string> labels,
                               std::span<const WeightedEdge<Scalar>> edges,
                               BuildStats* stats = nullptr) {
    const auto n = static_cast<Index>(labels.size());
    std::vector<Eigen::Triplet<Scalar>> triplets;
    triplets.reserve(2 * edges.size());
    for (const auto& e : edges) {
      if (e.source < 0 || e.source >= n || e.target < 0 || e.target >= n)
        throw InputError("edge endpoint out of range");
      if (e.source == e.target)
        throw InputError("self-loop on node '" + labels[e.source] + "'");
      if (!(e.weight >= Scalar(0)))
        throw InputError("negative weight on edge '" + labels[e.source] + "' - '" +
                         labels[e.target] + "'");
      triplets.emplace_back(e.source, e.target, e.weight);
      triplets.emplace_back(e.target, e.source, e.weight);
    }
    Adjacency full(n, n);
    full.setFromTriplets(triplets.begin(), triplets.end());
    const Index stored = full.nonZeros();
    full.prune(Scalar(0), Scalar(0));
    full.makeCompressed();

    Vector degree = full * Vector::Ones(n);
    std::vector<Index> kept;
    kept.reserve(n);
    for (Index u = 0; u < n; ++u)
      if (degree(u) > Scalar(0)) kept.push_back(u);

    if (stats) {
      stats->dropped_isolated = n - static_cast<Index>(kept.size());
      stats->dropped_zero_weight = (stored - full.nonZeros()) / 2;
    }
    if (kept.empty()) throw InputError("no edges");

    BasicGraph g;
    if (static_cast<Index>(kept.size()) == n) {
      g.labels_ = std::move(labels);
      g.adjacency_ = std::move(full);
    } else {
      g.labels_.reserve(kept.size());
      for (Index u : kept) g.labels_.push_back(std::move(labels[u]));
      g.adjacency_ = select(full, kept);
    }
    g.finish();
    return g;
  }

  Index size() const { return adjacency_.rows(); }
  /// Number of undirected edges, m.
  Index edge_count() const { return adjacency_.nonZeros() / 2; }

  const Adjacency& adjacency() const { return adjacency_; }
  const Vector& degree() const { return degree_; }
  Scalar degree(Index u) const { return degree_(u); }
  /// Weighted total degree, the sum of all degrees.
  Scalar total_degree() const { return degree_.sum(); }

  /// |δ(u)|, the number of distinct neighbors.
  Index neighbor_count(Index u) const {
    return adjacency_.outerIndexPtr()[u + 1] - adjacency_.outerIndexPtr()[u];
  }
  /// Sum of neighbor counts, 2m.
  Index total_neighbor_count() const { return adjacency_.nonZeros(); }

  Scalar weight(Index u, Index v) const { return adjacency_.coeff(u, v); }

  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(Index u) const { return labels_[static_cast<std::size_t>(u)]; }

  std::optional<Index> find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Like find(), but throws InputError naming the label.
  Index index_of(std::string_view label) const {
    if (auto u = find(label)) return *u;
    throw InputError("unknown node label '" + std::string(label) + "'");
  }

  /// Edges with source < target, in row order.
  std::vector<WeightedEdge<Scalar>> edges() const {
    std::vector<WeightedEdge<Scalar>> out;
    out.reserve(static_cast<std::size_t>(edge_count()));
    for (Index u = 0; u < size(); ++u)
      for (typename Adjacency::InnerIterator it(adjacency_, u); it; ++it)
        if (u < it.col()) out.push_back({u, it.col(), it.value()});
    return out;
  }

  /// Induced subgraph on `nodes` (strictly increasing indices).
  BasicGraph subgraph(std::span<const Index> nodes) const {
    BasicGraph g;
    g.labels_.reserve(nodes.size());
    for (Index u : nodes) g.labels_.push_back(label(u));
    g.adjacency_ = select(adjacency_, nodes);
    g.finish();
    return g;
  }

 private:
  static Adjacency select(const Adjacency& a, std::span<const Index> nodes) {
    std::vector<Index> remap(static_cast<std::size_t>(a.rows()), -1);
    for (std::size_t i = 0; i < nodes.size(); ++i) remap[nodes[i]] = static_cast<Index>(i);
    std::vector<Eigen::Triplet<Scalar>> triplets;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (typename Adjacency::InnerIterator it(a, nodes[i]); it; ++it)
        if (remap[it.col()] >= 0) triplets.emplace_back(static_cast<Index>(i), remap[it.col()], it.value());
    const auto k = static_cast<Index>(nodes.size());
    Adjacency out(k, k);
    out.setFromTriplets(triplets.begin(), triplets.end());
    out.makeCompressed();
    return out;
  }

  void finish() {
    degree_ = adjacency_ * Vector::Ones(adjacency_.rows());
    index_.clear();
    for (std::size_t i = 0; i < labels_.size(); ++i) index_.emplace(labels_[i], static_cast<Index>(i));
  }

  std::vector<std::string> labels_;
  Adjacency adjacency_;
  Vector degree_;
  std::unordered_map<std::string, Index> index_;
};

using Graph = BasicGraph<double>;

/// Nodes of the connected component containing `anchor`, sorted.
template <typename Scalar>
std::vector<Index> connected_component(const BasicGraph<Scalar>& g, Index anchor) {
  std::vector<char> seen(static_cast<std::size_t>(g.size()), 0);
  std::vector<Index> out;
  std::queue<Index> frontier;
  seen[anchor] = 1;
  frontier.push(anchor);
  while (!frontier.empty()) {
    const Index u = frontier.front();
    frontier.pop();
    out.push_back(u);
    for (typename BasicGraph<Scalar>::Adjacency::InnerIterator it(g.adjacency(), u); it; ++it) {
      if (!seen[it.col()]) {
        seen[it.col()] = 1;
        frontier.push(it.col());
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Subgraph induced on the component of `anchor`. Labels are carried over,
/// so callers re-resolve nodes by label.
template <typename Scalar>
BasicGraph<Scalar> restrict_to_component(const BasicGraph<Scalar>& g, Index anchor) {
  if (anchor < 0 || anchor >= g.size()) throw InputError("anchor node out of range");
  const auto nodes = connected_component(g, anchor);
  if (static_cast<Index>(nodes.size()) == g.size()) return g;
  return g.subgraph(nodes);
}

}  // namespace infonav
