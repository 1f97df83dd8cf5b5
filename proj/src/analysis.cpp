#include "infonav/analysis.hpp"

namespace infonav {

NavigationResult run_navigation(const NavigationProblem& problem, const CodingModel& model,
                                const SolverOptions& options) {
  NavigationResult r;
  r.solution = solve_desirability(problem, options);
  r.reference = urw_kernel(*problem.graph, problem.target);
  r.optimal = optimal_policy(r.solution, r.reference);
  r.mfpt = mfpt(r.optimal, problem.trans_cost, std::span<const std::string>(problem.graph->labels()));
  r.cost = make_cost_report(model, *problem.graph, r.optimal, r.reference, r.mfpt.mfpt, problem.gamma);
  r.linear_residual = linear_residual(problem, r.solution);
  return r;
}

ComparisonRow comparison_row(const NavigationResult& result) {
  ComparisonRow row;
  const auto& m = result.mfpt.mfpt;
  row.gamma = result.solution.gamma;
  row.mean_mfpt = m.size() > 1 ? m.sum() / static_cast<double>(m.size() - 1) : 0.0;
  row.max_mfpt = m.maxCoeff();
  row.max_kl = result.cost.max_kl;
  row.trajectory_bound = result.cost.trajectory_bound;
  row.full_table_bits = result.cost.full_table_bits;
  row.coding_decision = result.cost.coding_decision;
  return row;
}

std::vector<double> normalize_gammas(std::vector<double> gammas, std::size_t* duplicates) {
  std::sort(gammas.begin(), gammas.end());
  const auto before = gammas.size();
  gammas.erase(std::unique(gammas.begin(), gammas.end()), gammas.end());
  if (duplicates) *duplicates = before - gammas.size();
  return gammas;
}

std::vector<SweepEntry> gamma_sweep(const NavigationProblem& problem, std::vector<double> gammas,
                                    const CodingModel& model, const SweepOptions& options) {
  if (options.include_baseline) gammas.push_back(0.0);
  gammas = normalize_gammas(std::move(gammas));

  std::vector<SweepEntry> out;
  out.reserve(gammas.size());
  SolverOptions solver = options.solver;
  for (double gamma : gammas) {
    NavigationProblem p = problem;
    p.gamma = gamma;
    SweepEntry entry;
    entry.result = run_navigation(p, model, solver);
    entry.row = comparison_row(entry.result);
    // L is nondecreasing in gamma, so this start lies below the next fixed point.
    solver.warm_start = entry.result.solution.loss;
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace infonav
