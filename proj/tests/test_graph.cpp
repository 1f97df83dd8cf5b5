#include <doctest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "infonav/graph.hpp"
#include "infonav/io.hpp"
#include "oracles.hpp"

using namespace infonav;
using namespace infonav::testing;

namespace {

Graph parse(const std::string& text, EdgeListFormat format = EdgeListFormat::tsv, IngestStats* stats = nullptr) {
  std::istringstream in(text);
  return parse_edge_list(in, format, 1.0, "<test>", stats);
}

Graph parse_routes(const std::string& text, const CapacityTable* capacity = nullptr, IngestStats* stats = nullptr) {
  std::istringstream in(text);
  return parse_openflights(in, capacity, "<routes>", stats);
}

bool bit_symmetric(const Graph& g) {
  const Eigen::MatrixXd a(g.adjacency());
  for (Index u = 0; u < a.rows(); ++u)
    for (Index v = 0; v < a.cols(); ++v)
      if (a(u, v) != a(v, u)) return false;
  return true;
}

}  // namespace

TEST_CASE("karate club loads with 34 nodes and 78 edges") {
  const Graph g = karate();
  CHECK(g.size() == 34);
  CHECK(g.edge_count() == 78);
  CHECK(g.total_degree() == doctest::Approx(156.0));
  CHECK(g.degree(g.index_of("0")) == 16.0);
  CHECK(bit_symmetric(g));
}

TEST_CASE("single edge is the smallest valid graph") {
  const Graph g = parse("a b\n");
  REQUIRE(g.size() == 2);
  const Eigen::MatrixXd a(g.adjacency());
  CHECK(a(0, 0) == 0.0);
  CHECK(a(0, 1) == 1.0);
  CHECK(a(1, 0) == 1.0);
  CHECK(g.total_degree() == 2.0);
  CHECK(g.label(0) == "a");
}

TEST_CASE("duplicate records aggregate by summation") {
  const Graph g = parse("a b 1\na b 1\n");
  CHECK(g.weight(g.index_of("a"), g.index_of("b")) == 2.0);
  CHECK(g.edge_count() == 1);

  const Graph reversed = parse("a b 1.5\nb a 0.5\n");
  CHECK(reversed.weight(0, 1) == 2.0);
}

TEST_CASE("comments, blank lines and csv separators") {
  const Graph g = parse("# header\n\nx, y, 2.5\n  # indented comment\ny,z\n", EdgeListFormat::csv);
  CHECK(g.size() == 3);
  CHECK(g.weight(g.index_of("x"), g.index_of("y")) == 2.5);
  CHECK(g.weight(g.index_of("y"), g.index_of("z")) == 1.0);
  CHECK(g.labels() == std::vector<std::string>{"x", "y", "z"});
}

TEST_CASE("edge list errors carry line numbers") {
  SUBCASE("self-loop") {
    try {
      parse("a b\nc c\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(std::string(e.what()).find("self-loop") != std::string::npos);
    }
  }
  SUBCASE("negative weight") {
    try {
      parse("# c\na b -1\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("garbage weight and column count") {
    CHECK_THROWS_AS(parse("a b x\n"), ParseError);
    CHECK_THROWS_AS(parse("a\n"), ParseError);
    CHECK_THROWS_AS(parse("a b 1 2\n"), ParseError);
  }
  SUBCASE("empty file") { CHECK_THROWS_AS(parse("# nothing\n"), InputError); }
  SUBCASE("missing file names the path") {
    try {
      load_edge_list("/nonexistent/graph.tsv", EdgeListFormat::tsv);
      FAIL("expected an input error");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("/nonexistent/graph.tsv") != std::string::npos);
    }
  }
}

TEST_CASE("zero-weight records leave no edge and isolated nodes are dropped") {
  IngestStats stats;
  const Graph g = parse("a b 0\nc d 1\n", EdgeListFormat::tsv, &stats);
  CHECK(g.size() == 2);
  CHECK(stats.dropped_isolated == 2);
  CHECK_FALSE(g.find("a").has_value());
}

TEST_CASE("restrict_to_component") {
  SUBCASE("connected input is unchanged") {
    const Graph g = cycle4();
    const Graph r = restrict_to_component(g, 0);
    CHECK(r.size() == g.size());
    CHECK(r.labels() == g.labels());
    CHECK(Eigen::MatrixXd(r.adjacency()) == Eigen::MatrixXd(g.adjacency()));
  }
  SUBCASE("two disjoint triangles") {
    const Graph g = parse("a b\nb c\nc a\nx y\ny z\nz x\n");
    const Graph r = restrict_to_component(g, g.index_of("b"));
    CHECK(r.size() == 3);
    CHECK(r.edge_count() == 3);
    CHECK(r.labels() == std::vector<std::string>{"a", "b", "c"});
    const Graph other = restrict_to_component(g, g.index_of("z"));
    CHECK(other.labels() == std::vector<std::string>{"x", "y", "z"});
    // idempotent
    const Graph again = restrict_to_component(r, r.index_of("a"));
    CHECK(again.labels() == r.labels());
    CHECK(Eigen::MatrixXd(again.adjacency()) == Eigen::MatrixXd(r.adjacency()));
  }
  SUBCASE("karate is connected from every anchor") {
    const Graph g = karate();
    const auto hops = oracle::floyd_hops(g, 0);
    CHECK((hops.array() < (1 << 20)).all());
    for (Index anchor = 0; anchor < g.size(); ++anchor) CHECK(restrict_to_component(g, anchor).size() == 34);
  }
}

TEST_CASE("random weighted graphs: symmetry, degree sum, export round trip") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> weight(0.1, 5.0);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<std::string> labels;
    const int n = 2 + trial % 12;
    for (int i = 0; i < n; ++i) labels.push_back("n" + std::to_string((i * 7 + trial) % 31));
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    const auto k = static_cast<Index>(labels.size());
    std::vector<WeightedEdge<double>> edges;
    double total = 0.0;
    std::uniform_int_distribution<Index> node(0, k - 1);
    for (int e = 0; e < 3 * n; ++e) {
      const Index u = node(rng), v = node(rng);
      if (u == v) continue;
      const double w = weight(rng);
      edges.push_back({u, v, w});
      total += w;
    }
    if (edges.empty()) continue;
    const Graph g = Graph::from_edges(labels, edges);
    CHECK(bit_symmetric(g));
    CHECK(g.total_degree() == doctest::Approx(2.0 * total).epsilon(1e-12));

    const std::string text = canonical_edge_list(g);
    std::istringstream in(text);
    const Graph back = parse_edge_list(in, EdgeListFormat::tsv);
    REQUIRE(back.size() == g.size());
    for (Index u = 0; u < g.size(); ++u)
      for (Index v = 0; v < g.size(); ++v)
        CHECK(back.weight(back.index_of(g.label(u)), back.index_of(g.label(v))) == g.weight(u, v));
    CHECK(canonical_edge_list(back) == text);
  }
}

TEST_CASE("openflights routes") {
  SUBCASE("both directions merge into one undirected edge") {
    const Graph g = parse_routes("AA,24,LAX,3484,JFK,3797,,0,738\nAA,24,JFK,3797,LAX,3484,,0,738\n");
    CHECK(g.size() == 2);
    CHECK(g.edge_count() == 1);
    CHECK(g.weight(g.index_of("LAX"), g.index_of("JFK")) == 2.0);
  }
  SUBCASE("empty routes file") { CHECK_THROWS_WITH_AS(parse_routes(""), doctest::Contains("no edges"), InputError); }
  SUBCASE("capacity table scales each route, unknown codes count 1") {
    std::istringstream cap_in("# code,seats\n738,160\n320,150\n");
    const CapacityTable cap = parse_capacity_table(cap_in);
    IngestStats stats;
    const Graph g = parse_routes(
        "AA,24,LAX,1,JFK,2,,0,738\n"
        "UA,5,JFK,2,LAX,1,,0,738 320\n"
        "ZZ,9,LAX,1,SFO,3,,0,XYZ\n",
        &cap, &stats);
    CHECK(g.weight(g.index_of("LAX"), g.index_of("JFK")) == doctest::Approx(160.0 + 155.0));
    CHECK(g.weight(g.index_of("LAX"), g.index_of("SFO")) == 1.0);
    CHECK(stats.unknown_equipment == 1);
  }
  SUBCASE("malformed rows are counted, too many is an error") {
    IngestStats stats;
    std::string ok;
    for (int i = 0; i < 20; ++i) ok += "AA,1,A" + std::to_string(i) + ",1,B,2,,0,738\n";
    const Graph g = parse_routes(ok + "broken,row\n", nullptr, &stats);
    CHECK(stats.malformed_rows == 1);
    CHECK(g.size() == 21);
    CHECK_THROWS_AS(parse_routes(ok + "x\ny\nz\n", nullptr), InputError);
  }
  SUBCASE("self routes and missing airport codes are malformed") {
    IngestStats stats;
    std::string rows;
    for (int i = 0; i < 20; ++i) rows += "AA,1,A" + std::to_string(i) + ",1,B,2,,0,738\n";
    parse_routes(rows + "AA,1,B,1,B,2,,0,738\nAA,1,\\N,1,B,2,,0,738\n", nullptr, &stats);
    CHECK(stats.malformed_rows == 2);
  }
}

TEST_CASE("capacity table errors") {
  std::istringstream bad("738,-3\n");
  CHECK_THROWS_AS(parse_capacity_table(bad), ParseError);
}
