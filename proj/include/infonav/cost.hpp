#pragma once

#include <cmath>
#include <string_view>

#include "infonav/policy.hpp"

namespace infonav {

// Information quantities below are in bits. The solver works in nats.

enum class CodingDecision { incremental, full_table };

inline std::string_view to_string(CodingDecision d) {
  return d == CodingDecision::incremental ? "incremental" : "full_table";
}

/// Two-part code parameters.
struct CodingModel {
  /// Amortization constant for the one-time reference table.
  double beta = 1.0;
  /// |T|, the number of targets that would each need a full table.
  Index target_count = 1;
  Index node_count = 1;

  /// log2 n, the bits needed to index a node.
  double bits_per_index() const { return std::log2(static_cast<double>(node_count)); }
};

template <typename Scalar>
CodingModel make_coding_model(const BasicGraph<Scalar>& g, Index target_count = 1, double beta = 1.0) {
  if (target_count < 1) throw InputError("target count must be at least one");
  if (!(beta > 0.0)) throw InputError("beta must be positive");
  return CodingModel{beta, target_count, g.size()};
}

/// Shannon entropy of a distribution, in bits.
template <typename Derived>
typename Derived::Scalar entropy_bits(const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  Scalar h = Scalar(0);
  for (Index i = 0; i < p.size(); ++i)
    if (p(i) > Scalar(0)) h -= p(i) * std::log2(p(i));
  return h;
}

/// KL(p || q) in bits; zero-probability terms of p contribute nothing.
/// Throws SolverError if p has mass where q has none.
template <typename DerivedP, typename DerivedQ>
typename DerivedP::Scalar kl_bits(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedQ>& q) {
  using Scalar = typename DerivedP::Scalar;
  Scalar kl = Scalar(0);
  for (Index i = 0; i < p.size(); ++i) {
    if (!(p(i) > Scalar(0))) continue;
    if (!(q(i) > Scalar(0))) throw SolverError("KL divergence: support violation");
    kl += p(i) * std::log2(p(i) / q(i));
  }
  return kl;
}

/// Per-step code length -sum_v p(v) log2 q(v) of outcomes drawn from p,
/// coded against reference q. Equals entropy_bits(p) + kl_bits(p, q).
template <typename DerivedP, typename DerivedQ>
typename DerivedP::Scalar mdl_step_cross_entropy(const Eigen::MatrixBase<DerivedP>& p,
                                                 const Eigen::MatrixBase<DerivedQ>& q) {
  using Scalar = typename DerivedP::Scalar;
  Scalar h = Scalar(0);
  for (Index i = 0; i < p.size(); ++i) {
    if (!(p(i) > Scalar(0))) continue;
    if (!(q(i) > Scalar(0))) throw SolverError("cross entropy: support violation");
    h -= p(i) * std::log2(q(i));
  }
  return h;
}

/// D_KL(P*(.|u) || P0(.|u)) in bits for every node; zero at the target.
/// Throws SolverError if P* leaves the support of P0.
template <typename Scalar>
VectorX<Scalar> kl_per_node(const BasicPolicy<Scalar>& p_star, const BasicPolicy<Scalar>& p0) {
  if (p_star.size() != p0.size()) throw SolverError("kl_per_node: size mismatch");
  VectorX<Scalar> kl = VectorX<Scalar>::Zero(p0.size());
  for (Index u = 0; u < p0.size(); ++u) {
    if (u == p0.target) continue;
    Scalar sum = Scalar(0);
    for (typename SparseRowMatrix<Scalar>::InnerIterator it(p_star.kernel, u); it; ++it) {
      if (!(it.value() > Scalar(0))) continue;
      const Scalar ref = p0.kernel.coeff(u, it.col());
      if (!(ref > Scalar(0)))
        throw SolverError("optimal policy leaves the reference support at row " + std::to_string(u));
      sum += it.value() * std::log2(it.value() / ref);
    }
    // Rounding can leave -1e-17 on rows where P* == P0.
    kl(u) = std::max(sum, Scalar(0));
  }
  return kl;
}

/// MDL_1(u) = beta |delta(u)| log2 n, the per-step share of the reference table.
template <typename Scalar>
VectorX<double> mdl1_bits(const CodingModel& model, const BasicGraph<Scalar>& g) {
  VectorX<double> out(g.size());
  for (Index u = 0; u < g.size(); ++u)
    out(u) = model.beta * static_cast<double>(g.neighbor_count(u)) * model.bits_per_index();
  return out;
}

/// (|T| + 1) beta |delta(u)| log2 n, the table read per step when every
/// target keeps its own routing table next to the reference one.
template <typename Scalar>
VectorX<double> full_table_step_bits(const CodingModel& model, const BasicGraph<Scalar>& g) {
  return static_cast<double>(model.target_count + 1) * mdl1_bits(model, g);
}

/// |T| |D| log2 n, the extra cost of storing full target-specific routing
/// tables. |D| counts table entries, i.e. the sum of neighbor counts (2m).
template <typename Scalar>
double full_table_bits(const CodingModel& model, const BasicGraph<Scalar>& g) {
  return static_cast<double>(model.target_count) * static_cast<double>(g.total_neighbor_count()) *
         model.bits_per_index();
}

/// |Gamma| * max_u KL with |Gamma| = the largest MFPT, rounded half away
/// from zero.
template <typename DerivedK, typename DerivedM>
double trajectory_bound(const Eigen::MatrixBase<DerivedK>& kl, const Eigen::MatrixBase<DerivedM>& mfpt) {
  if (kl.size() != mfpt.size()) throw SolverError("trajectory_bound: size mismatch");
  if (kl.size() == 0) return 0.0;
  return std::round(static_cast<double>(mfpt.maxCoeff())) * static_cast<double>(kl.maxCoeff());
}

/// Per-source variant: round(mfpt(u)) * max KL.
template <typename DerivedK, typename DerivedM>
VectorX<double> per_node_bound(const Eigen::MatrixBase<DerivedK>& kl, const Eigen::MatrixBase<DerivedM>& mfpt) {
  if (kl.size() != mfpt.size()) throw SolverError("per_node_bound: size mismatch");
  const double worst = kl.size() ? static_cast<double>(kl.maxCoeff()) : 0.0;
  return mfpt.template cast<double>().array().round().matrix() * worst;
}

/// Incremental coding wins only when the bounded KL total is strictly below
/// the full-table cost; ties go to the full table.
inline CodingDecision coding_decision(double bound, double full) {
  return bound < full ? CodingDecision::incremental : CodingDecision::full_table;
}

/// Sign of MDL(Gamma | P0) - MDL(Gamma | P_A) = -full + bound.
inline int cumulative_difference_sign(double bound, double full) {
  const double diff = bound - full;
  return (diff > 0.0) - (diff < 0.0);
}

struct CostReport {
  double gamma = 0.0;
  VectorX<double> kl_per_node;
  double max_kl = 0.0;
  VectorX<double> mfpt;
  double trajectory_bound = 0.0;
  VectorX<double> per_node_bound;
  double full_table_bits = 0.0;
  CodingDecision coding_decision = CodingDecision::incremental;
  int cumulative_difference_sign = -1;
};

template <typename Scalar>
CostReport make_cost_report(const CodingModel& model, const BasicGraph<Scalar>& g, const BasicPolicy<Scalar>& p_star,
                            const BasicPolicy<Scalar>& p0, const VectorX<Scalar>& mfpt, double gamma) {
  CostReport r;
  r.gamma = gamma;
  r.kl_per_node = kl_per_node(p_star, p0).template cast<double>();
  r.max_kl = r.kl_per_node.size() ? r.kl_per_node.maxCoeff() : 0.0;
  r.mfpt = mfpt.template cast<double>();
  r.trajectory_bound = trajectory_bound(r.kl_per_node, r.mfpt);
  r.per_node_bound = per_node_bound(r.kl_per_node, r.mfpt);
  r.full_table_bits = full_table_bits(model, g);
  r.coding_decision = coding_decision(r.trajectory_bound, r.full_table_bits);
  r.cumulative_difference_sign = cumulative_difference_sign(r.trajectory_bound, r.full_table_bits);
  return r;
}

}  // namespace infonav
