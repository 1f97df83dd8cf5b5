#include "infonav/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>
#include <cstdlib>
#include <memory>
#include <numbers>
#include <ostream>

#include "infonav/analysis.hpp"
#include "infonav/export.hpp"
#include "infonav/io.hpp"
#include "infonav/shortest_paths.hpp"

namespace infonav::cli {

void RunConfig::validate() const {
  if (targets.empty()) throw InputError("at least one --target is required");
  if (gammas.empty()) throw InputError("at least one --gamma is required");
  if (!(tol > 0.0)) throw InputError("--tol must be positive");
  for (double g : gammas)
    if (!(g >= 0.0) || !std::isfinite(g)) throw InputError(fmt::format("gamma {} must be finite and nonnegative", g));
  for (const auto& e : exports)
    if (e != "json" && e != "csv" && e != "dot") throw InputError("unknown export format '" + e + "'");
  if (!(beta > 0.0)) throw InputError("--beta must be positive");
  if (mc_walkers == 1 || mc_walkers < 0) throw InputError("--mc-walkers must be 0 or at least 2");
}

namespace {

struct LoadedInput {
  Graph graph;
  IngestStats stats;
  std::string input_sha256;
  std::string capacity_sha256;
};

LoadedInput load_input(const RunConfig& cfg) {
  if (!std::filesystem::exists(cfg.input)) throw InputError("input file '" + cfg.input.string() + "' does not exist");
  LoadedInput in;
  in.input_sha256 = sha256_hex(read_file(cfg.input));
  if (cfg.format == "openflights") {
    if (cfg.capacity) in.capacity_sha256 = sha256_hex(read_file(*cfg.capacity));
    in.graph = load_openflights(cfg.input, cfg.capacity, &in.stats);
  } else {
    if (cfg.capacity) throw InputError("--capacity only applies to --format openflights");
    in.graph = load_edge_list(cfg.input, parse_edge_list_format(cfg.format), 1.0, &in.stats);
  }
  return in;
}

Json config_json(const RunConfig& cfg, const std::string& command) {
  Json j = {{"command", command},
            {"input", cfg.input.string()},
            {"format", cfg.format},
            {"capacity", cfg.capacity ? Json(cfg.capacity->string()) : Json(nullptr)},
            {"targets", cfg.targets},
            {"gammas", cfg.gammas},
            {"gamma_in_bits", cfg.gamma_in_bits},
            {"tol", cfg.tol},
            {"max_iter", cfg.max_iter ? Json(*cfg.max_iter) : Json(nullptr)},
            {"seed", cfg.seed},
            {"exports", std::vector<std::string>(cfg.exports.begin(), cfg.exports.end())},
            {"beta", cfg.beta},
            {"mc_walkers", cfg.mc_walkers},
            {"mc_step_cap", cfg.mc_step_cap},
            {"baseline", cfg.baseline}};
  return j;
}

/// Provenance attached to every artifact.
struct Provenance {
  Json meta;
  std::string csv_header;
};

Provenance make_provenance(const RunConfig& cfg, const std::string& command, const LoadedInput& in) {
  Provenance p;
  p.meta = {{"config", config_json(cfg, command)},
            {"input_sha256", in.input_sha256},
            {"capacity_sha256", in.capacity_sha256.empty() ? Json(nullptr) : Json(in.capacity_sha256)},
            {"weighting_rule", in.stats.weighting_rule}};
  p.csv_header = fmt::format("# input_sha256={}\n# config={}\n", in.input_sha256, config_json(cfg, command).dump());
  return p;
}

class ArtifactWriter {
 public:
  ArtifactWriter(const RunConfig& cfg, Provenance prov) : cfg_(cfg), prov_(std::move(prov)) {}

  bool wants(const char* format) const { return cfg_.exports.count(format) > 0; }

  void json(const std::filesystem::path& rel, Json body) const {
    if (!wants("json")) return;
    Json doc = {{"meta", prov_.meta}};
    for (auto& [k, v] : body.items()) doc[k] = v;
    write_file_atomic(cfg_.out / rel, doc.dump(2) + "\n");
  }
  void csv(const std::filesystem::path& rel, const std::string& table) const {
    if (!wants("csv")) return;
    write_file_atomic(cfg_.out / rel, prov_.csv_header + table);
  }
  void dot(const std::filesystem::path& rel, const std::string& graph) const {
    if (!wants("dot")) return;
    write_file_atomic(cfg_.out / rel, "// input_sha256=" + prov_.meta["input_sha256"].get<std::string>() + "\n" + graph);
  }
  void always_json(const std::filesystem::path& rel, Json body) const {
    Json doc = {{"meta", prov_.meta}};
    for (auto& [k, v] : body.items()) doc[k] = v;
    write_file_atomic(cfg_.out / rel, doc.dump(2) + "\n");
  }

 private:
  const RunConfig& cfg_;
  Provenance prov_;
};

std::string safe_name(const std::string& label) {
  std::string out;
  for (char c : label) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.') ? c : '_';
  return out.empty() ? "_" : out;
}

std::string gamma_dir(double gamma) { return fmt::format("gamma_{}", gamma); }

std::vector<double> solver_gammas(const RunConfig& cfg, std::ostream& err) {
  std::size_t duplicates = 0;
  auto gammas = normalize_gammas(cfg.gammas, &duplicates);
  if (duplicates) err << "warning: dropped " << duplicates << " duplicate gamma value(s)\n";
  if (cfg.gamma_in_bits)
    for (double& g : gammas) g *= std::numbers::ln2;
  return gammas;
}

SolverOptions solver_options(const RunConfig& cfg) {
  SolverOptions opts;
  opts.tol = cfg.tol;
  opts.max_iter = cfg.max_iter;
  return opts;
}

/// Per-target setup shared by solve and compare.
struct TargetContext {
  std::shared_ptr<const Graph> graph;
  NavigationProblem problem;
  DistanceField field;
};

TargetContext prepare_target(const Graph& full, const std::string& label, std::ostream& err) {
  const Index anchor = full.index_of(label);
  TargetContext ctx;
  auto component = std::make_shared<const Graph>(restrict_to_component(full, anchor));
  if (component->size() != full.size())
    err << "note: target '" << label << "': dropped " << (full.size() - component->size())
        << " node(s) outside its connected component\n";
  ctx.graph = component;
  ctx.problem = make_problem(ctx.graph, ctx.graph->index_of(label), 0.0);
  ctx.field = shortest_paths(*ctx.graph, ctx.problem.target);
  return ctx;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.validate();
  const auto input = load_input(cfg);
  const auto gammas = solver_gammas(cfg, err);
  const ArtifactWriter writer(cfg, make_provenance(cfg, "solve", input));
  const auto model_targets = static_cast<Index>(cfg.targets.size());

  Json manifest = {{"nodes", input.graph.size()}, {"edges", input.graph.edge_count()}, {"runs", Json::array()}};
  for (const auto& label : cfg.targets) {
    const auto ctx = prepare_target(input.graph, label, err);
    const Graph& g = *ctx.graph;
    const auto model = make_coding_model(g, model_targets, cfg.beta);
    const std::filesystem::path dir = safe_name(label);

    writer.json(dir / "baselines.json", {{"distances", distance_json(g, ctx.field)},
                                         {"sp_policy", policy_json(g, sp_policy(g, ctx.field))}});
    writer.csv(dir / "distances.csv", distance_csv(g, ctx.field));

    SweepOptions sweep;
    sweep.solver = solver_options(cfg);
    for (const auto& entry : gamma_sweep(ctx.problem, gammas, model, sweep)) {
      const auto& r = entry.result;
      const auto sub = dir / gamma_dir(entry.row.gamma);
      writer.json(sub / "solution.json", solution_json(g, r.solution, r.optimal));
      writer.json(sub / "report.json", {{"cost", cost_report_json(g, r.cost)},
                                        {"mfpt", mfpt_json(g, r.mfpt)},
                                        {"histogram", histogram_json(histogram(r.mfpt.mfpt))},
                                        {"linear_residual", r.linear_residual ? Json(*r.linear_residual) : Json(nullptr)}});
      writer.csv(sub / "nodes.csv", node_table_csv(g, r.solution, r.cost, r.mfpt));
      writer.csv(sub / "policy.csv", policy_csv(g, r.optimal));
      writer.dot(sub / "policy.dot", policy_dot(g, r.optimal));

      out << fmt::format("target={} gamma={} mean_mfpt={:.2f} max_kl_bits={:.1f} bound_bits={:.1f} "
                         "full_table_bits={:.1f} decision={}\n",
                         label, entry.row.gamma, entry.row.mean_mfpt, entry.row.max_kl, entry.row.trajectory_bound,
                         entry.row.full_table_bits, to_string(entry.row.coding_decision));
      if (cfg.mc_walkers > 0) {
        const auto est = monte_carlo_mfpt(r.optimal, ctx.problem.trans_cost, static_cast<Index>(cfg.mc_walkers),
                                          cfg.seed, static_cast<Index>(cfg.mc_step_cap));
        writer.csv(sub / "monte_carlo.csv", monte_carlo_csv(g, r.mfpt, est));
        out << fmt::format("  monte carlo: max |z| = {:.2f}, truncation {}\n",
                           max_standard_score(est, r.mfpt.mfpt, ctx.problem.target), est.valid ? "ok" : "EXCESSIVE");
      }

      manifest["runs"].push_back({{"target", label},
                                  {"gamma", entry.row.gamma},
                                  {"iterations", r.solution.iterations},
                                  {"residual", r.solution.residual}});
    }
  }
  writer.always_json("run.json", manifest);
  return kOk;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.validate();
  const auto input = load_input(cfg);
  const auto gammas = solver_gammas(cfg, err);
  const ArtifactWriter writer(cfg, make_provenance(cfg, "compare", input));
  const auto model_targets = static_cast<Index>(cfg.targets.size());

  for (const auto& label : cfg.targets) {
    const auto ctx = prepare_target(input.graph, label, err);
    const auto model = make_coding_model(*ctx.graph, model_targets, cfg.beta);
    SweepOptions sweep;
    sweep.solver = solver_options(cfg);
    sweep.include_baseline = cfg.baseline;
    std::vector<ComparisonRow> rows;
    for (const auto& entry : gamma_sweep(ctx.problem, gammas, model, sweep)) rows.push_back(entry.row);

    const std::filesystem::path dir = safe_name(label);
    writer.json(dir / "comparison.json", {{"target", label}, {"rows", comparison_json(rows)}});
    writer.csv(dir / "comparison.csv", comparison_csv(rows));

    out << fmt::format("target {}\n{:>8} {:>10} {:>10} {:>12} {:>12} {:>14}  {}\n", label, "gamma", "mean_mfpt",
                       "max_mfpt", "max_kl_bits", "bound_bits", "full_bits", "decision");
    for (const auto& r : rows)
      out << fmt::format("{:>8} {:>10.2f} {:>10.2f} {:>12.1f} {:>12.1f} {:>14.1f}  {}\n", r.gamma, r.mean_mfpt,
                         r.max_mfpt, r.max_kl, r.trajectory_bound, r.full_table_bits, to_string(r.coding_decision));
  }
  return kOk;
}

int cmd_ingest(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const auto input = load_input(cfg);
  const Graph& g = input.graph;
  const std::string edges = canonical_edge_list(g);
  Json meta = {{"config", config_json(cfg, "ingest")},
               {"input_sha256", input.input_sha256},
               {"capacity_sha256", input.capacity_sha256.empty() ? Json(nullptr) : Json(input.capacity_sha256)},
               {"edges_sha256", sha256_hex(edges)},
               {"weighting_rule", input.stats.weighting_rule},
               {"nodes", g.size()},
               {"edges", g.edge_count()},
               {"records", input.stats.records},
               {"malformed_rows", input.stats.malformed_rows},
               {"unknown_equipment", input.stats.unknown_equipment},
               {"dropped_isolated", input.stats.dropped_isolated}};
  write_file_atomic(cfg.out / "edges.tsv", edges);
  write_file_atomic(cfg.out / "edges.meta.json", meta.dump(2) + "\n");
  out << fmt::format("ingested {}: n={} m={} (malformed rows {}, unknown equipment {})\n", cfg.input.string(),
                     g.size(), g.edge_count(), input.stats.malformed_rows, input.stats.unknown_equipment);
  return kOk;
}

void add_input_options(CLI::App& cmd, RunConfig& cfg) {
  cmd.add_option("--input,-i", cfg.input, "Edge list or OpenFlights routes file")->required();
  cmd.add_option("--format", cfg.format, "tsv | csv | openflights")
      ->check(CLI::IsMember({"tsv", "csv", "openflights"}));
  cmd.add_option("--capacity", cfg.capacity, "Equipment capacity CSV (code,seats) for openflights input");
  cmd.add_option("--out,-o", cfg.out, "Output directory");
}

void add_solver_options(CLI::App& cmd, RunConfig& cfg) {
  cmd.add_option("--target,-t", cfg.targets, "Target node label (repeatable)")->required();
  cmd.add_option("--gamma,-g", cfg.gammas, "Transition-cost weight in nats (repeatable)")->required();
  cmd.add_flag("--gamma-bits", cfg.gamma_in_bits, "Interpret --gamma in bits (multiplied by ln 2)");
  cmd.add_option("--tol", cfg.tol, "Fixed-point tolerance on max |dL|");
  cmd.add_option("--max-iter", cfg.max_iter, "Iteration cap (default max(10 n (1+gamma), 10000))");
  cmd.add_option("--seed", cfg.seed, "Seed for Monte-Carlo validation");
  cmd.add_option("--export", cfg.exports, "Artifact formats: json, csv, dot")->delimiter(',');
  cmd.add_option("--beta", cfg.beta, "Reference-table amortization constant");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Information-cost-aware navigation on weighted graphs"};
  app.require_subcommand(1);

  RunConfig cfg;
  if (const char* dir = std::getenv(kOutDirEnv); dir && *dir)
    cfg.out = dir;
  else
    cfg.out = "infonav-out";

  auto* solve = app.add_subcommand("solve", "Solve for the optimal biased random walk and write artifacts");
  add_input_options(*solve, cfg);
  add_solver_options(*solve, cfg);
  solve->add_option("--mc-walkers", cfg.mc_walkers, "Monte-Carlo walkers per source for MFPT validation");
  solve->add_option("--mc-step-cap", cfg.mc_step_cap, "Step cap per Monte-Carlo walk");

  auto* compare = app.add_subcommand("compare", "Sweep gamma and tabulate transition and information costs");
  add_input_options(*compare, cfg);
  add_solver_options(*compare, cfg);
  compare->add_flag("--baseline", cfg.baseline, "Include the gamma = 0 random-walk row");

  auto* ingest = app.add_subcommand("ingest", "Normalize an input graph into a canonical edge list");
  add_input_options(*ingest, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (solve->parsed()) return cmd_solve(cfg, out, err);
    if (compare->parsed()) return cmd_compare(cfg, out, err);
    return cmd_ingest(cfg, out, err);
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kNotConverged;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
}

}  // namespace infonav::cli
