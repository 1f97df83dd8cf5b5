#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "infonav/analysis.hpp"
#include "infonav/shortest_paths.hpp"
#include "oracles.hpp"

using namespace infonav;
using namespace infonav::testing;

TEST_CASE("mfpt closed forms") {
  const Graph g = path3();
  const Index a = g.index_of("a"), b = g.index_of("b"), t = g.index_of("t");

  SUBCASE("shortest-path policy walks the hops") {
    const auto m = mfpt(sp_policy(g, t));
    CHECK(m.mfpt(a) == doctest::Approx(2.0));
    CHECK(m.mfpt(b) == doctest::Approx(1.0));
    CHECK(m.mfpt(t) == 0.0);
    CHECK(m.rounded(a) == 2);
    CHECK(m.residual < 1e-12);
  }
  SUBCASE("random walk on the path") {
    // m_b = 1 + m_a / 2, m_a = 1 + m_b
    const auto m = mfpt(urw_kernel(g, t));
    CHECK(m.mfpt(b) == doctest::Approx(3.0));
    CHECK(m.mfpt(a) == doctest::Approx(4.0));
  }
  SUBCASE("random walk on the 4-cycle") {
    // neighbors: m = 1 + m_antipode / 2; antipode: m = 1 + m_neighbor
    const Graph c = cycle4();
    const auto m = mfpt(urw_kernel(c, c.index_of("t")));
    CHECK(m.mfpt(c.index_of("b")) == doctest::Approx(3.0));
    CHECK(m.mfpt(c.index_of("a")) == doctest::Approx(4.0));
  }
  SUBCASE("weighted costs scale the passage time") {
    const Eigen::VectorXd cost = Eigen::Vector3d(2.0, 0.5, 0.0);
    const auto m = mfpt(sp_policy(g, t), cost);
    CHECK(m.mfpt(a) == doctest::Approx(2.5));
  }
}

TEST_CASE("mfpt under a shortest-path policy equals hop counts on trees") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = oracle::random_connected_graph(5 + trial * 3, 0, rng);
    const Index t = trial % g.size();
    const auto field = shortest_paths(g, t);
    const auto m = mfpt(sp_policy(g, field));
    for (Index u = 0; u < g.size(); ++u) CHECK(m.mfpt(u) == doctest::Approx(static_cast<double>(field.hops(u))));
  }
}

TEST_CASE("mfpt agrees with a dense solve on karate") {
  const Graph g = karate();
  const Index t = g.index_of("16");
  const auto p = urw_kernel(g, t);
  const auto m = mfpt(p);
  Eigen::MatrixXd q = Eigen::MatrixXd(p.kernel);
  q.row(t).setZero();
  q.col(t).setZero();
  Eigen::VectorXd c = Eigen::VectorXd::Ones(g.size());
  c(t) = 0.0;
  Eigen::MatrixXd sys = Eigen::MatrixXd::Identity(g.size(), g.size()) - q;
  const Eigen::VectorXd dense = sys.fullPivLu().solve(c);
  CHECK((dense - m.mfpt).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("mfpt rejects policies that cannot reach the target") {
  const Graph g = cycle4();
  const Index t = g.index_of("t"), a = g.index_of("a"), b = g.index_of("b");
  Policy p = urw_kernel(g, t);
  // b bounces back to a, a always goes to b
  for (Index u : {a, b})
    for (SparseRowMatrix<double>::InnerIterator it(p.kernel, u); it; ++it)
      it.valueRef() = (u == a ? it.col() == b : it.col() == a) ? 1.0 : 0.0;
  CHECK(nodes_not_reaching_target(p).size() == 2);
  try {
    mfpt(p, Eigen::VectorXd(Eigen::Vector4d(1, 1, 0, 1)), std::span<const std::string>(g.labels()));
    FAIL("expected a solver error");
  } catch (const SolverError& e) {
    const std::string what = e.what();
    CHECK((what.find("'a'") != std::string::npos || what.find("'b'") != std::string::npos));
  }
}

TEST_CASE("monte carlo passage times") {
  SUBCASE("deterministic policy is exact") {
    const Graph g = path3();
    const auto p = sp_policy(g, g.index_of("t"));
    const auto est = monte_carlo_mfpt(p, Eigen::VectorXd(Eigen::Vector3d(1, 1, 0)), 100, 1, 1000);
    CHECK(est.mean(g.index_of("a")) == 2.0);
    CHECK(est.std_error(g.index_of("a")) == 0.0);
    CHECK(max_standard_score(est, mfpt(p).mfpt, p.target) == 0.0);
  }
  SUBCASE("random walk stays within three standard errors") {
    const Graph g = path3();
    const auto p = urw_kernel(g, g.index_of("t"));
    const auto est = monte_carlo_mfpt(p, Eigen::VectorXd(Eigen::Vector3d(1, 1, 0)), 20000, 42, 100000);
    CHECK(est.valid);
    CHECK(max_standard_score(est, mfpt(p).mfpt, p.target) < 3.0);
  }
  SUBCASE("same seed, same numbers") {
    const Graph g = karate();
    const auto p = urw_kernel(g, g.index_of("16"));
    Eigen::VectorXd c = Eigen::VectorXd::Ones(34);
    c(p.target) = 0.0;
    const auto x = monte_carlo_mfpt(p, c, 50, 7, 100000);
    const auto y = monte_carlo_mfpt(p, c, 50, 7, 100000);
    CHECK(x.mean == y.mean);
    const auto z = monte_carlo_mfpt(p, c, 50, 8, 100000);
    CHECK(x.mean != z.mean);
  }
  SUBCASE("step cap marks the estimate invalid") {
    const Graph g = karate();
    const auto p = urw_kernel(g, g.index_of("16"));
    Eigen::VectorXd c = Eigen::VectorXd::Ones(34);
    c(p.target) = 0.0;
    const auto est = monte_carlo_mfpt(p, c, 50, 7, 3);
    CHECK_FALSE(est.valid);
    CHECK(est.truncated.sum() > 0);
  }
}

TEST_CASE("histogram") {
  SUBCASE("constant vector lands in the last bin") {
    const auto h = histogram(Eigen::VectorXd::Constant(5, 3.0), 4);
    CHECK(h.edges.size() == 5);
    CHECK(h.edges.back() == 3.0);
    CHECK(h.counts == std::vector<Index>{0, 0, 0, 5});
  }
  SUBCASE("all zeros") {
    const auto h = histogram(Eigen::VectorXd::Zero(3));
    CHECK(h.counts.size() == 20);
    CHECK(h.counts[0] == 3);
  }
  SUBCASE("values 0..19 over 20 bins") {
    Eigen::VectorXd v(20);
    for (Index i = 0; i < 20; ++i) v(i) = static_cast<double>(i);
    const auto h = histogram(v);
    Index total = 0;
    for (auto c : h.counts) total += c;
    CHECK(total == 20);
    // width 0.95: every value gets its own bin, 19 lands in the closed last one
    CHECK(h.counts == std::vector<Index>(20, 1));
  }
  SUBCASE("bad input") {
    CHECK_THROWS_AS(histogram(Eigen::VectorXd(0)), InputError);
    CHECK_THROWS_AS(histogram(Eigen::Vector2d(-1, 1)), InputError);
  }
}

TEST_CASE("gamma sweep") {
  const auto g = share(karate());
  const auto base = make_problem(g, g->index_of("16"), 0.0);
  const auto model = make_coding_model(*g);

  SUBCASE("empty list") { CHECK(gamma_sweep(base, {}, model).empty()); }
  SUBCASE("duplicates collapse and the baseline is prepended") {
    std::size_t dups = 0;
    CHECK(normalize_gammas({5.0, 0.5, 5.0, 2.5, 0.5}, &dups) == std::vector<double>{0.5, 2.5, 5.0});
    CHECK(dups == 2);
    SweepOptions opts;
    opts.include_baseline = true;
    const auto rows = gamma_sweep(base, {50.0, 2.5, 50.0}, model, opts);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].row.gamma == 0.0);
    CHECK(rows[2].row.gamma == 50.0);
  }
  SUBCASE("warm starts do not change the answer") {
    const auto rows = gamma_sweep(base, {0.5, 2.5, 50.0}, model);
    for (const auto& r : rows) {
      auto p = base;
      p.gamma = r.row.gamma;
      const auto cold = solve_desirability(p);
      CHECK((cold.loss - r.result.solution.loss).cwiseAbs().maxCoeff() < 1e-10);
    }
    const auto again = gamma_sweep(base, {0.5, 2.5, 50.0}, model);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i].result.solution.loss == again[i].result.solution.loss);
      CHECK(rows[i].row.trajectory_bound == again[i].row.trajectory_bound);
    }
  }
  SUBCASE("passage times fall towards the hop counts") {
    SweepOptions opts;
    opts.include_baseline = true;
    const auto rows = gamma_sweep(base, {0.5, 2.5, 50.0}, model, opts);
    const auto hops = shortest_paths(*g, base.target).hops.cast<double>().eval();
    for (std::size_t i = 1; i < rows.size(); ++i)
      CHECK(rows[i].row.mean_mfpt <= rows[i - 1].row.mean_mfpt + 1e-9);
    const auto& last = rows.back().result.mfpt.mfpt;
    CHECK(((last - hops).array() >= -1e-9).all());
    CHECK(rows.back().row.mean_mfpt == doctest::Approx(hops.sum() / 33.0).epsilon(1e-6));
  }
}
