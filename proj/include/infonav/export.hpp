#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "infonav/analysis.hpp"
#include "infonav/shortest_paths.hpp"

namespace infonav {

using Json = nlohmann::ordered_json;

// Per-node values are keyed by node label throughout.

Json solution_json(const Graph& g, const DesirabilitySolution& sol, const Policy& optimal);
Json policy_json(const Graph& g, const Policy& p);
Json distance_json(const Graph& g, const DistanceField& field);
Json mfpt_json(const Graph& g, const MfptField& field);
Json cost_report_json(const Graph& g, const CostReport& report);
Json comparison_json(const std::vector<ComparisonRow>& rows);
Json histogram_json(const Histogram& h);

/// `source,target,probability` for every positive entry.
std::string policy_csv(const Graph& g, const Policy& p);
/// `node,dist,hops,path_hops`.
std::string distance_csv(const Graph& g, const DistanceField& field);
/// `node,loss,desirability,kl_bits,mfpt,mfpt_rounded,per_node_bound_bits`.
std::string node_table_csv(const Graph& g, const DesirabilitySolution& sol, const CostReport& report,
                           const MfptField& field);
std::string comparison_csv(const std::vector<ComparisonRow>& rows);
/// `node,analytic,mc_mean,mc_std_error,truncated`.
std::string monte_carlo_csv(const Graph& g, const MfptField& analytic, const MonteCarloEstimate& est);

/// Directed DOT graph of the policy; edge opacity is proportional to
/// probability.
std::string policy_dot(const Graph& g, const Policy& p);

}  // namespace infonav
