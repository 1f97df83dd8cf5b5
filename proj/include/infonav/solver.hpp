#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include "infonav/policy.hpp"

namespace infonav {

/// Navigation task for a single target: penalize each step from u by
/// gamma * trans_cost(u) on top of the KL information cost relative to
/// the unbiased walk. Gamma is in nats.
template <typename Scalar>
struct BasicNavigationProblem {
  std::shared_ptr<const BasicGraph<Scalar>> graph;
  Index target = -1;
  Scalar gamma = Scalar(0);
  /// Per-step transition cost, zero at the target.
  VectorX<Scalar> trans_cost;

  /// Throws InputError when the problem is malformed.
  void validate() const {
    if (!graph) throw InputError("navigation problem without a graph");
    if (target < 0 || target >= graph->size()) throw InputError("target out of range");
    if (!(gamma >= Scalar(0)) || !std::isfinite(static_cast<double>(gamma)))
      throw InputError("gamma must be a finite nonnegative number");
    if (trans_cost.size() != graph->size()) throw InputError("transition cost vector has the wrong length");
    if ((trans_cost.array() < Scalar(0)).any()) throw InputError("transition costs must be nonnegative");
    if (trans_cost(target) != Scalar(0))
      throw InputError("transition cost at target '" + graph->label(target) + "' must be zero");
  }
};

using NavigationProblem = BasicNavigationProblem<double>;

/// Problem with unit transition cost at every non-target node.
template <typename Scalar>
BasicNavigationProblem<Scalar> make_problem(std::shared_ptr<const BasicGraph<Scalar>> graph, Index target,
                                            Scalar gamma) {
  BasicNavigationProblem<Scalar> p;
  p.trans_cost = VectorX<Scalar>::Ones(graph->size());
  p.trans_cost(target) = Scalar(0);
  p.graph = std::move(graph);
  p.target = target;
  p.gamma = gamma;
  return p;
}

/// Per-node discount exp(-gamma * C(u)); one at the target.
template <typename Scalar>
VectorX<Scalar> transition_discount(const BasicNavigationProblem<Scalar>& p) {
  VectorX<Scalar> d = (-p.gamma * p.trans_cost.array()).exp().matrix();
  d(p.target) = Scalar(1);
  return d;
}

/// The linear operator T P0 whose fixed point (with e_t = 1) is the
/// desirability vector. Row u of P0 is scaled by exp(-gamma C(u)).
template <typename Scalar>
SparseRowMatrix<Scalar> build_operator(const BasicNavigationProblem<Scalar>& p) {
  p.validate();
  SparseRowMatrix<Scalar> op = urw_kernel(*p.graph, p.target).kernel;
  op = transition_discount(p).asDiagonal() * op;
  op.makeCompressed();
  return op;
}

template <typename Scalar>
struct BasicDesirabilitySolution {
  Index target = -1;
  Scalar gamma = Scalar(0);
  /// Optimal cost-to-go L(u) in nats; L(t) = 0.
  VectorX<Scalar> loss;
  /// e_u = exp(-L(u)). May underflow to zero at large gamma; use `loss`.
  VectorX<Scalar> desirability;
  /// max_u |L_new(u) - L(u)| at the last sweep.
  Scalar residual = std::numeric_limits<Scalar>::infinity();
  long iterations = 0;
};

using DesirabilitySolution = BasicDesirabilitySolution<double>;

template <typename Scalar>
struct BasicSolverOptions {
  Scalar tol = Scalar(1e-12);
  /// Defaults to default_max_iterations().
  std::optional<long> max_iter;
  /// Initial L; must lie below the fixed point (e.g. the solution for a
  /// smaller gamma) for monotone convergence.
  std::optional<VectorX<Scalar>> warm_start;
};

using SolverOptions = BasicSolverOptions<double>;

/// max(10 n (1 + gamma), 10^4).
inline long default_max_iterations(Index n, double gamma) {
  const double scaled = 10.0 * static_cast<double>(n) * (1.0 + gamma);
  return static_cast<long>(std::max(scaled, 1e4));
}

namespace detail {

/// Log-domain P0 rows: log P0(v|u) for each stored (u, v).
template <typename Scalar>
SparseRowMatrix<Scalar> log_kernel(const BasicPolicy<Scalar>& p0) {
  SparseRowMatrix<Scalar> out = p0.kernel;
  for (Index u = 0; u < out.outerSize(); ++u)
    for (typename SparseRowMatrix<Scalar>::InnerIterator it(out, u); it; ++it) it.valueRef() = std::log(it.value());
  return out;
}

/// log sum_v P0(v|u) exp(-L(v)), evaluated stably.
template <typename Scalar>
Scalar log_partition_row(const SparseRowMatrix<Scalar>& log_p0, Index u, const VectorX<Scalar>& loss) {
  Scalar peak = -std::numeric_limits<Scalar>::infinity();
  for (typename SparseRowMatrix<Scalar>::InnerIterator it(log_p0, u); it; ++it)
    peak = std::max(peak, it.value() - loss(it.col()));
  Scalar sum = Scalar(0);
  for (typename SparseRowMatrix<Scalar>::InnerIterator it(log_p0, u); it; ++it)
    sum += std::exp(it.value() - loss(it.col()) - peak);
  return peak + std::log(sum);
}

}  // namespace detail

/// Solves L(u) = gamma C(u) - log sum_v P0(v|u) exp(-L(v)), L(t) = 0, by
/// Jacobi sweeps in the log domain. This is the iteration e <- T P0 e with
/// e_t pinned to one, carried out on L = -log e so that large gamma does
/// not underflow.
///
/// Throws ConvergenceError when max_iter sweeps do not bring the residual
/// below tol.
template <typename Scalar>
BasicDesirabilitySolution<Scalar> solve_desirability(const BasicNavigationProblem<Scalar>& p,
                                                     const BasicSolverOptions<Scalar>& options = {}) {
  p.validate();
  if (!(options.tol > Scalar(0))) throw InputError("tolerance must be positive");
  const auto& g = *p.graph;
  const Index n = g.size();
  const long max_iter = options.max_iter.value_or(default_max_iterations(n, static_cast<double>(p.gamma)));

  const auto log_p0 = detail::log_kernel(urw_kernel(g, p.target));

  VectorX<Scalar> loss = VectorX<Scalar>::Zero(n);
  if (options.warm_start) {
    if (options.warm_start->size() != n) throw InputError("warm start has the wrong length");
    loss = *options.warm_start;
    loss(p.target) = Scalar(0);
  }
  VectorX<Scalar> next(n);

  BasicDesirabilitySolution<Scalar> sol;
  sol.target = p.target;
  sol.gamma = p.gamma;
  for (long iter = 1; iter <= max_iter; ++iter) {
    for (Index u = 0; u < n; ++u)
      next(u) = u == p.target ? Scalar(0)
                              : p.gamma * p.trans_cost(u) - detail::log_partition_row(log_p0, u, loss);
    sol.residual = (next - loss).cwiseAbs().maxCoeff();
    loss.swap(next);
    sol.iterations = iter;
    if (sol.residual < options.tol) break;
  }
  if (!(sol.residual < options.tol)) {
    std::ostringstream msg;
    msg << "desirability iteration for target '" << g.label(p.target) << "' at gamma " << p.gamma
        << " did not converge after " << sol.iterations << " sweeps (residual " << sol.residual << ")";
    throw ConvergenceError(msg.str(), static_cast<double>(sol.residual), sol.iterations);
  }
  sol.loss = std::move(loss);
  sol.desirability = (-sol.loss.array()).exp().matrix();
  return sol;
}

/// log Z_L(u) = log sum_v P0(v|u) e_v for each non-target row; zero at the
/// target.
template <typename Scalar>
VectorX<Scalar> log_partition(const BasicDesirabilitySolution<Scalar>& sol, const BasicPolicy<Scalar>& p0) {
  const auto log_p0 = detail::log_kernel(p0);
  VectorX<Scalar> out = VectorX<Scalar>::Zero(p0.size());
  for (Index u = 0; u < p0.size(); ++u)
    if (u != p0.target) out(u) = detail::log_partition_row(log_p0, u, sol.loss);
  return out;
}

/// P*(v|u) = P0(v|u) e_v / Z_L(u), computed from L in the log domain.
/// Shares the sparsity pattern of `p0`.
template <typename Scalar>
BasicPolicy<Scalar> optimal_policy(const BasicDesirabilitySolution<Scalar>& sol, const BasicPolicy<Scalar>& p0) {
  if (sol.loss.size() != p0.size() || sol.target != p0.target)
    throw SolverError("solution and reference kernel disagree on size or target");
  const auto log_z = log_partition(sol, p0);
  BasicPolicy<Scalar> out = p0;
  for (Index u = 0; u < out.size(); ++u) {
    if (u == out.target) continue;
    for (typename SparseRowMatrix<Scalar>::InnerIterator it(out.kernel, u); it; ++it)
      it.valueRef() = std::exp(std::log(it.value()) - sol.loss(it.col()) - log_z(u));
  }
  return out;
}

/// Relative fixed-point residual ||e - T P0 e||_inf / ||e||_inf, or nullopt
/// when some e_u is not a normal floating-point number.
template <typename Scalar>
std::optional<Scalar> linear_residual(const BasicNavigationProblem<Scalar>& p,
                                      const BasicDesirabilitySolution<Scalar>& sol) {
  const auto& e = sol.desirability;
  if ((e.array() < std::numeric_limits<Scalar>::min()).any()) return std::nullopt;
  const VectorX<Scalar> image = build_operator(p) * e;
  return (image - e).cwiseAbs().maxCoeff() / e.cwiseAbs().maxCoeff();
}

/// KL(Q(.|u) || P0(.|u)) in nats. Throws SolverError on support violation.
template <typename Scalar>
Scalar kl_row_nats(const BasicPolicy<Scalar>& q, const BasicPolicy<Scalar>& p0, Index u) {
  Scalar kl = Scalar(0);
  for (typename SparseRowMatrix<Scalar>::InnerIterator it(q.kernel, u); it; ++it) {
    if (it.value() <= Scalar(0)) continue;
    const Scalar ref = p0.kernel.coeff(u, it.col());
    if (!(ref > Scalar(0))) throw SolverError("policy puts mass outside the reference support");
    kl += it.value() * std::log(it.value() / ref);
  }
  return kl;
}

/// Bellman slack of an arbitrary policy Q against the solution:
/// gamma C(u) + KL(Q(u) || P0(u)) + sum_v Q(v|u) L(v) - L(u).
/// Nonnegative everywhere when L is optimal; zero at the target.
template <typename Scalar>
VectorX<Scalar> bellman_slack(const BasicNavigationProblem<Scalar>& p, const BasicDesirabilitySolution<Scalar>& sol,
                              const BasicPolicy<Scalar>& p0, const BasicPolicy<Scalar>& q) {
  VectorX<Scalar> slack = VectorX<Scalar>::Zero(p0.size());
  for (Index u = 0; u < p0.size(); ++u) {
    if (u == p.target) continue;
    Scalar expected = Scalar(0);
    for (typename SparseRowMatrix<Scalar>::InnerIterator it(q.kernel, u); it; ++it)
      expected += it.value() * sol.loss(it.col());
    slack(u) = p.gamma * p.trans_cost(u) + kl_row_nats(q, p0, u) + expected - sol.loss(u);
  }
  return slack;
}

struct BellmanReport {
  int trials = 0;
  /// Largest amount by which a perturbed policy beat L (0 when none did).
  double max_violation = 0.0;
  /// Smallest slack over all non-target nodes and trials.
  double min_slack = std::numeric_limits<double>::infinity();
};

/// Randomized optimality check. Each trial mixes P* with a random tilt of
/// P0, Q = (1 - s) P* + s R with s ~ U(0, magnitude), so Q stays on the P0
/// support; no such Q may achieve a lower one-step Bellman value than L.
template <typename Scalar>
BellmanReport bellman_check(const BasicNavigationProblem<Scalar>& p, const BasicDesirabilitySolution<Scalar>& sol,
                            const BasicPolicy<Scalar>& optimal, int trials, std::uint64_t seed,
                            Scalar magnitude = Scalar(1)) {
  const auto p0 = urw_kernel(*p.graph, p.target);
  std::mt19937_64 rng(seed);
  std::normal_distribution<Scalar> tilt(Scalar(0), Scalar(1));
  std::uniform_real_distribution<Scalar> share(Scalar(0), Scalar(1));

  BellmanReport report;
  report.trials = trials;
  for (int trial = 0; trial < trials; ++trial) {
    BasicPolicy<Scalar> q = p0;
    for (Index u = 0; u < q.size(); ++u) {
      if (u == q.target) continue;
      const Scalar s = magnitude * share(rng);
      Scalar total = Scalar(0);
      for (typename SparseRowMatrix<Scalar>::InnerIterator it(q.kernel, u); it; ++it) {
        it.valueRef() *= std::exp(tilt(rng));
        total += it.value();
      }
      for (typename SparseRowMatrix<Scalar>::InnerIterator it(q.kernel, u); it; ++it)
        it.valueRef() = (Scalar(1) - s) * optimal(u, it.col()) + s * it.value() / total;
    }
    const auto slack = bellman_slack(p, sol, p0, q);
    for (Index u = 0; u < slack.size(); ++u) {
      if (u == p.target) continue;
      report.min_slack = std::min(report.min_slack, static_cast<double>(slack(u)));
      report.max_violation = std::max(report.max_violation, -static_cast<double>(slack(u)));
    }
  }
  return report;
}

}  // namespace infonav
