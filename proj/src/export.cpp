#include "infonav/export.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace infonav {

namespace {

Json row_json(const Graph& g, const Policy& p, Index u) {
  Json row = Json::object();
  for (SparseRowMatrix<double>::InnerIterator it(p.kernel, u); it; ++it)
    if (it.value() > 0.0) row[g.label(it.col())] = it.value();
  return row;
}

}  // namespace

Json solution_json(const Graph& g, const DesirabilitySolution& sol, const Policy& optimal) {
  Json nodes = Json::object();
  for (Index u = 0; u < g.size(); ++u)
    nodes[g.label(u)] = {{"L", sol.loss(u)}, {"e", sol.desirability(u)}, {"policy", row_json(g, optimal, u)}};
  return {{"target", g.label(sol.target)},
          {"gamma", sol.gamma},
          {"iterations", sol.iterations},
          {"residual", sol.residual},
          {"nodes", std::move(nodes)}};
}

Json policy_json(const Graph& g, const Policy& p) {
  Json rows = Json::object();
  for (Index u = 0; u < g.size(); ++u) rows[g.label(u)] = row_json(g, p, u);
  return {{"target", g.label(p.target)}, {"rows", std::move(rows)}};
}

Json distance_json(const Graph& g, const DistanceField& field) {
  Json nodes = Json::object();
  for (Index u = 0; u < g.size(); ++u) {
    Json next = Json::array();
    for (Index v : field.next_hops[u]) next.push_back(g.label(v));
    nodes[g.label(u)] = {{"dist", field.dist(u)},
                         {"hops", field.hops(u)},
                         {"path_hops", field.path_hops(u)},
                         {"next_hops", std::move(next)}};
  }
  return {{"target", g.label(field.target)}, {"nodes", std::move(nodes)}};
}

Json mfpt_json(const Graph& g, const MfptField& field) {
  Json nodes = Json::object();
  for (Index u = 0; u < g.size(); ++u) nodes[g.label(u)] = {{"mfpt", field.mfpt(u)}, {"rounded", field.rounded(u)}};
  return {{"target", g.label(field.target)}, {"residual", field.residual}, {"nodes", std::move(nodes)}};
}

Json cost_report_json(const Graph& g, const CostReport& r) {
  Json nodes = Json::object();
  for (Index u = 0; u < g.size(); ++u)
    nodes[g.label(u)] = {{"kl_bits", r.kl_per_node(u)}, {"mfpt", r.mfpt(u)}, {"bound_bits", r.per_node_bound(u)}};
  return {{"gamma", r.gamma},
          {"max_kl_bits", r.max_kl},
          {"trajectory_bound_bits", r.trajectory_bound},
          {"full_table_bits", r.full_table_bits},
          {"coding_decision", to_string(r.coding_decision)},
          {"cumulative_difference_sign", r.cumulative_difference_sign},
          {"nodes", std::move(nodes)}};
}

Json comparison_json(const std::vector<ComparisonRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows)
    out.push_back({{"gamma", r.gamma},
                   {"mean_mfpt", r.mean_mfpt},
                   {"max_mfpt", r.max_mfpt},
                   {"max_kl_bits", r.max_kl},
                   {"trajectory_bound_bits", r.trajectory_bound},
                   {"full_table_bits", r.full_table_bits},
                   {"coding_decision", to_string(r.coding_decision)}});
  return out;
}

Json histogram_json(const Histogram& h) { return {{"edges", h.edges}, {"counts", h.counts}}; }

std::string policy_csv(const Graph& g, const Policy& p) {
  std::string out = "source,target,probability\n";
  for (Index u = 0; u < g.size(); ++u)
    for (SparseRowMatrix<double>::InnerIterator it(p.kernel, u); it; ++it)
      if (it.value() > 0.0) out += fmt::format("{},{},{}\n", g.label(u), g.label(it.col()), it.value());
  return out;
}

std::string distance_csv(const Graph& g, const DistanceField& field) {
  std::string out = "node,dist,hops,path_hops\n";
  for (Index u = 0; u < g.size(); ++u)
    out += fmt::format("{},{},{},{}\n", g.label(u), field.dist(u), field.hops(u), field.path_hops(u));
  return out;
}

std::string node_table_csv(const Graph& g, const DesirabilitySolution& sol, const CostReport& report,
                           const MfptField& field) {
  std::string out = "node,loss,desirability,kl_bits,mfpt,mfpt_rounded,per_node_bound_bits\n";
  for (Index u = 0; u < g.size(); ++u)
    out += fmt::format("{},{},{},{},{},{},{}\n", g.label(u), sol.loss(u), sol.desirability(u), report.kl_per_node(u),
                       field.mfpt(u), field.rounded(u), report.per_node_bound(u));
  return out;
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::string out = "gamma,mean_mfpt,max_mfpt,max_kl_bits,trajectory_bound_bits,full_table_bits,coding_decision\n";
  for (const auto& r : rows)
    out += fmt::format("{},{},{},{},{},{},{}\n", r.gamma, r.mean_mfpt, r.max_mfpt, r.max_kl, r.trajectory_bound,
                       r.full_table_bits, to_string(r.coding_decision));
  return out;
}

std::string monte_carlo_csv(const Graph& g, const MfptField& analytic, const MonteCarloEstimate& est) {
  std::string out = "node,analytic,mc_mean,mc_std_error,truncated\n";
  for (Index u = 0; u < g.size(); ++u)
    out += fmt::format("{},{},{},{},{}\n", g.label(u), analytic.mfpt(u), est.mean(u), est.std_error(u),
                       est.truncated(u));
  return out;
}

std::string policy_dot(const Graph& g, const Policy& p) {
  std::string out = "digraph policy {\n";
  for (Index u = 0; u < g.size(); ++u) {
    out += fmt::format("  \"{}\"{};\n", g.label(u), u == p.target ? " [shape=doublecircle]" : "");
  }
  for (Index u = 0; u < g.size(); ++u) {
    if (u == p.target) continue;
    for (SparseRowMatrix<double>::InnerIterator it(p.kernel, u); it; ++it) {
      if (!(it.value() > 0.0)) continue;
      const int alpha = std::clamp(static_cast<int>(std::lround(it.value() * 255.0)), 0, 255);
      out += fmt::format("  \"{}\" -> \"{}\" [color=\"#000000{:02x}\", label=\"{:.3f}\"];\n", g.label(u),
                         g.label(it.col()), alpha, it.value());
    }
  }
  out += "}\n";
  return out;
}

}  // namespace infonav
