#pragma once

#include <cmath>

#include "infonav/graph.hpp"

namespace infonav {

/// Row-stochastic transition kernel with an absorbing target.
///
/// Non-target rows are supported on graph edges; the target row is the
/// self-loop P(t|t) = 1.
template <typename Scalar>
struct BasicPolicy {
  SparseRowMatrix<Scalar> kernel;
  Index target = -1;

  Index size() const { return kernel.rows(); }
  Scalar operator()(Index u, Index v) const { return kernel.coeff(u, v); }

  /// Dense copy of row u.
  VectorX<Scalar> row(Index u) const { return kernel.row(u).transpose(); }
};

using Policy = BasicPolicy<double>;

/// Unbiased random walk P0(v|u) = A_uv / D_u, absorbing at `target`.
template <typename Scalar>
BasicPolicy<Scalar> urw_kernel(const BasicGraph<Scalar>& g, Index target) {
  using Adjacency = typename BasicGraph<Scalar>::Adjacency;
  std::vector<Eigen::Triplet<Scalar>> triplets;
  triplets.reserve(static_cast<std::size_t>(g.total_neighbor_count() + 1));
  for (Index u = 0; u < g.size(); ++u) {
    if (u == target) {
      triplets.emplace_back(u, u, Scalar(1));
      continue;
    }
    const Scalar d = g.degree(u);
    if (!(d > Scalar(0))) throw SolverError("zero-degree row at node '" + g.label(u) + "'");
    for (typename Adjacency::InnerIterator it(g.adjacency(), u); it; ++it)
      triplets.emplace_back(u, it.col(), it.value() / d);
  }
  BasicPolicy<Scalar> p;
  p.target = target;
  p.kernel.resize(g.size(), g.size());
  p.kernel.setFromTriplets(triplets.begin(), triplets.end());
  p.kernel.makeCompressed();
  return p;
}

/// Largest |row sum - 1| over all rows.
template <typename Scalar>
Scalar max_row_sum_error(const BasicPolicy<Scalar>& p) {
  const VectorX<Scalar> sums = p.kernel * VectorX<Scalar>::Ones(p.size());
  return (sums.array() - Scalar(1)).abs().maxCoeff();
}

/// True when every positive entry of `p` sits on a graph edge or on the
/// absorbing self-loop, all entries lie in [0,1], and rows sum to one
/// within `tol`.
template <typename Scalar>
bool is_valid_policy(const BasicPolicy<Scalar>& p, const BasicGraph<Scalar>& g, Scalar tol = Scalar(1e-12)) {
  if (p.size() != g.size() || p.target < 0 || p.target >= p.size()) return false;
  for (Index u = 0; u < p.size(); ++u) {
    for (typename SparseRowMatrix<Scalar>::InnerIterator it(p.kernel, u); it; ++it) {
      const Scalar x = it.value();
      if (x < Scalar(0) || x > Scalar(1)) return false;
      if (x == Scalar(0)) continue;
      if (u == p.target) {
        if (it.col() != u) return false;
      } else if (g.weight(u, it.col()) <= Scalar(0)) {
        return false;
      }
    }
  }
  return max_row_sum_error(p) <= tol;
}

}  // namespace infonav
