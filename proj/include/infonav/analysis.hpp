#pragma once

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "infonav/cost.hpp"
#include "infonav/solver.hpp"

namespace infonav {

/// Largest system solved directly; beyond it MFPT uses BiCGSTAB.
inline constexpr Index kDirectSolveLimit = 10000;

template <typename Scalar>
struct BasicMfptField {
  Index target = -1;
  /// Expected accumulated transition cost (hops, for unit costs) to reach
  /// the target. Zero at the target.
  VectorX<Scalar> mfpt;
  /// mfpt rounded half away from zero.
  Eigen::VectorX<Index> rounded;
  /// ||m - c - Q m||_inf over the non-target nodes.
  Scalar residual = Scalar(0);
};

using MfptField = BasicMfptField<double>;

/// Nodes that cannot reach the target along positive-probability moves.
template <typename Scalar>
std::vector<Index> nodes_not_reaching_target(const BasicPolicy<Scalar>& policy) {
  const Index n = policy.size();
  std::vector<std::vector<Index>> incoming(static_cast<std::size_t>(n));
  for (Index u = 0; u < n; ++u)
    for (typename SparseRowMatrix<Scalar>::InnerIterator it(policy.kernel, u); it; ++it)
      if (it.value() > Scalar(0) && it.col() != u) incoming[it.col()].push_back(u);
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<Index> stack{policy.target};
  seen[policy.target] = 1;
  while (!stack.empty()) {
    const Index v = stack.back();
    stack.pop_back();
    for (Index u : incoming[v])
      if (!seen[u]) {
        seen[u] = 1;
        stack.push_back(u);
      }
  }
  std::vector<Index> out;
  for (Index u = 0; u < n; ++u)
    if (!seen[u]) out.push_back(u);
  return out;
}

/// Mean first passage time to the policy's absorbing target: solves
/// (I - Q) m = c on the non-target nodes, Q being the policy restricted to
/// them. `labels` only feeds error messages.
template <typename Scalar>
BasicMfptField<Scalar> mfpt(const BasicPolicy<Scalar>& policy, const VectorX<Scalar>& cost,
                            std::span<const std::string> labels = {}) {
  const Index n = policy.size();
  const Index t = policy.target;
  if (cost.size() != n) throw InputError("mfpt: cost vector has the wrong length");
  if (const auto stuck = nodes_not_reaching_target(policy); !stuck.empty()) {
    const Index w = stuck.front();
    const std::string name = static_cast<Index>(labels.size()) == n ? labels[w] : std::to_string(w);
    throw SolverError("mfpt: node '" + name + "' never reaches the target under this policy");
  }

  auto reduced = [t](Index u) { return u < t ? u : u - 1; };
  const Index k = n - 1;
  std::vector<Eigen::Triplet<Scalar>> triplets;
  triplets.reserve(static_cast<std::size_t>(policy.kernel.nonZeros() + k));
  VectorX<Scalar> rhs(k);
  for (Index u = 0; u < n; ++u) {
    if (u == t) continue;
    triplets.emplace_back(reduced(u), reduced(u), Scalar(1));
    for (typename SparseRowMatrix<Scalar>::InnerIterator it(policy.kernel, u); it; ++it)
      if (it.col() != t && it.value() != Scalar(0)) triplets.emplace_back(reduced(u), reduced(it.col()), -it.value());
    rhs(reduced(u)) = cost(u);
  }
  Eigen::SparseMatrix<Scalar> system(k, k);
  system.setFromTriplets(triplets.begin(), triplets.end());
  system.makeCompressed();

  VectorX<Scalar> m(k);
  if (k == 0) {
    // Single-node graph: nothing to solve.
  } else if (k <= kDirectSolveLimit) {
    Eigen::SparseLU<Eigen::SparseMatrix<Scalar>> lu;
    lu.compute(system);
    if (lu.info() != Eigen::Success) throw SolverError("mfpt: singular absorbing-chain system");
    m = lu.solve(rhs);
  } else {
    Eigen::BiCGSTAB<Eigen::SparseMatrix<Scalar>, Eigen::IncompleteLUT<Scalar>> it;
    it.setTolerance(Scalar(1e-10));
    it.compute(system);
    m = it.solve(rhs);
    if (it.info() != Eigen::Success) throw SolverError("mfpt: iterative solve did not converge");
  }

  BasicMfptField<Scalar> field;
  field.target = t;
  field.mfpt = VectorX<Scalar>::Zero(n);
  for (Index u = 0; u < n; ++u)
    if (u != t) field.mfpt(u) = m(reduced(u));
  field.residual = k ? (system * m - rhs).cwiseAbs().maxCoeff() : Scalar(0);
  field.rounded = field.mfpt.array().round().template cast<Index>().matrix();
  return field;
}

/// Unit cost everywhere except the target.
template <typename Scalar>
BasicMfptField<Scalar> mfpt(const BasicPolicy<Scalar>& policy) {
  VectorX<Scalar> cost = VectorX<Scalar>::Ones(policy.size());
  cost(policy.target) = Scalar(0);
  return mfpt(policy, cost);
}

struct MonteCarloEstimate {
  VectorX<double> mean;
  VectorX<double> std_error;
  /// Walks per source that hit the step cap before absorption.
  Eigen::VectorX<Index> truncated;
  Index walkers = 0;
  Index step_cap = 0;
  /// False when more than 1% of the walks from some source were truncated.
  bool valid = true;
};

/// Simulates `walkers` walks from every non-target node, accumulating the
/// per-step cost until absorption. Each source draws from its own engine
/// seeded from (seed, source), so results do not depend on visiting order.
template <typename Scalar>
MonteCarloEstimate monte_carlo_mfpt(const BasicPolicy<Scalar>& policy, const VectorX<Scalar>& cost, Index walkers,
                                    std::uint64_t seed, Index step_cap) {
  const Index n = policy.size();
  if (walkers < 2) throw InputError("monte carlo needs at least two walkers per source");

  // Cumulative rows for inverse-CDF sampling.
  std::vector<Index> offsets(static_cast<std::size_t>(n + 1), 0);
  std::vector<double> cumulative;
  std::vector<Index> columns;
  for (Index u = 0; u < n; ++u) {
    double acc = 0.0;
    for (typename SparseRowMatrix<Scalar>::InnerIterator it(policy.kernel, u); it; ++it) {
      if (!(it.value() > Scalar(0))) continue;
      acc += static_cast<double>(it.value());
      cumulative.push_back(acc);
      columns.push_back(it.col());
    }
    offsets[u + 1] = static_cast<Index>(cumulative.size());
    // Rows sum to one only up to rounding; make the last bucket catch u = 1.
    if (offsets[u + 1] > offsets[u]) cumulative.back() = 1.0;
  }

  MonteCarloEstimate est;
  est.walkers = walkers;
  est.step_cap = step_cap;
  est.mean = VectorX<double>::Zero(n);
  est.std_error = VectorX<double>::Zero(n);
  est.truncated = Eigen::VectorX<Index>::Zero(n);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Index source = 0; source < n; ++source) {
    if (source == policy.target) continue;
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(source)};
    std::mt19937_64 rng(seq);
    double sum = 0.0, sum_sq = 0.0;
    Index completed = 0;
    for (Index w = 0; w < walkers; ++w) {
      Index u = source;
      double acc = 0.0;
      Index steps = 0;
      while (u != policy.target && steps < step_cap) {
        acc += static_cast<double>(cost(u));
        const auto first = cumulative.begin() + offsets[u];
        const auto last = cumulative.begin() + offsets[u + 1];
        const auto pick = std::upper_bound(first, last, unit(rng));
        u = columns[static_cast<std::size_t>(std::min(pick, last - 1) - cumulative.begin())];
        ++steps;
      }
      if (u != policy.target) {
        ++est.truncated(source);
        continue;
      }
      sum += acc;
      sum_sq += acc * acc;
      ++completed;
    }
    if (completed > 1) {
      const double mean = sum / static_cast<double>(completed);
      const double var = std::max(0.0, (sum_sq - completed * mean * mean) / static_cast<double>(completed - 1));
      est.mean(source) = mean;
      est.std_error(source) = std::sqrt(var / static_cast<double>(completed));
    }
    if (static_cast<double>(est.truncated(source)) > 0.01 * static_cast<double>(walkers)) est.valid = false;
  }
  return est;
}

/// Largest |estimate - analytic| / std_error over non-target nodes. A zero
/// standard error counts as agreement only on an exact match.
template <typename Derived>
double max_standard_score(const MonteCarloEstimate& est, const Eigen::MatrixBase<Derived>& analytic, Index target) {
  double worst = 0.0;
  for (Index u = 0; u < analytic.size(); ++u) {
    if (u == target) continue;
    const double diff = std::abs(est.mean(u) - static_cast<double>(analytic(u)));
    if (est.std_error(u) > 0.0)
      worst = std::max(worst, diff / est.std_error(u));
    else if (diff > 1e-12)
      return std::numeric_limits<double>::infinity();
  }
  return worst;
}

struct Histogram {
  /// bins + 1 edges over [0, max].
  std::vector<double> edges;
  std::vector<Index> counts;
};

/// Equal-width bins anchored at zero. The last bin is closed on the right.
template <typename Derived>
Histogram histogram(const Eigen::MatrixBase<Derived>& values, Index bins = 20) {
  if (values.size() == 0) throw InputError("histogram of an empty vector");
  if (bins < 1) throw InputError("histogram needs at least one bin");
  const double top = static_cast<double>(values.maxCoeff());
  if (static_cast<double>(values.minCoeff()) < 0.0) throw InputError("histogram values must be nonnegative");
  const double width = top > 0.0 ? top / static_cast<double>(bins) : 1.0;
  Histogram h;
  h.edges.resize(static_cast<std::size_t>(bins + 1));
  for (Index i = 0; i <= bins; ++i) h.edges[i] = width * static_cast<double>(i);
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (Index i = 0; i < values.size(); ++i) {
    auto b = static_cast<Index>(std::floor(static_cast<double>(values(i)) / width));
    ++h.counts[static_cast<std::size_t>(std::clamp<Index>(b, 0, bins - 1))];
  }
  return h;
}

/// Everything computed for one (target, gamma) solve.
struct NavigationResult {
  DesirabilitySolution solution;
  Policy reference;
  Policy optimal;
  MfptField mfpt;
  CostReport cost;
  /// Linear-domain residual of e = T P0 e, when e is representable.
  std::optional<double> linear_residual;
};

NavigationResult run_navigation(const NavigationProblem& problem, const CodingModel& model,
                                const SolverOptions& options = {});

struct ComparisonRow {
  double gamma = 0.0;
  double mean_mfpt = 0.0;
  double max_mfpt = 0.0;
  double max_kl = 0.0;
  double trajectory_bound = 0.0;
  double full_table_bits = 0.0;
  CodingDecision coding_decision = CodingDecision::incremental;
};

ComparisonRow comparison_row(const NavigationResult& result);

struct SweepOptions {
  SolverOptions solver;
  /// Prepend a gamma = 0 (pure random walk) row.
  bool include_baseline = false;
};

struct SweepEntry {
  ComparisonRow row;
  NavigationResult result;
};

/// Solves `problem` at each gamma in ascending order, warm-starting each
/// solve from the previous one. Duplicate gammas are dropped.
std::vector<SweepEntry> gamma_sweep(const NavigationProblem& problem, std::vector<double> gammas,
                                    const CodingModel& model, const SweepOptions& options = {});

/// Sorted, duplicate-free copy of `gammas`; `duplicates` receives the count removed.
std::vector<double> normalize_gammas(std::vector<double> gammas, std::size_t* duplicates = nullptr);

}  // namespace infonav
