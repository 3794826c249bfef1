#include <doctest.h>

#include <cmath>
#include <random>

#include "graphbo/graph.hpp"
#include "support/oracles.hpp"

using namespace graphbo;

namespace {

AttributedGraph path3() {
  AttributedGraph g;
  g.id = 0;
  g.num_nodes = 3;
  g.edges = {{0, 1, 0}, {1, 2, 0}};
  g.node_features = Mat(3, 1);
  for (int i = 0; i < 3; ++i) g.node_features.at(i, 0) = 1.0;
  return g;
}

AttributedGraph star5() {
  AttributedGraph g;
  g.id = 1;
  g.num_nodes = 5;
  g.edges = {{0, 1, 0}, {0, 2, 0}, {0, 3, 0}, {0, 4, 0}};
  g.node_features = Mat(5, 1);
  for (int i = 0; i < 5; ++i) g.node_features.at(i, 0) = 1.0;
  return g;
}

AttributedGraph triangle() {
  AttributedGraph g;
  g.id = 2;
  g.num_nodes = 3;
  g.edges = {{0, 1, 0}, {0, 2, 0}, {1, 2, 0}};
  g.node_features = Mat(3, 1);
  for (int i = 0; i < 3; ++i) g.node_features.at(i, 0) = 1.0;
  return g;
}

AttributedGraph random_graph(int n, double p, unsigned seed, int relations = 1) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  AttributedGraph g;
  g.id = static_cast<int>(seed);
  g.num_nodes = n;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (u(eng) < p)
        g.edges.push_back({a, b, relations > 1 ? static_cast<int>(eng() % relations) : 0});
  g.node_features = Mat(n, 2);
  for (double& x : g.node_features.data) x = u(eng);
  return g;
}

}  // namespace

TEST_CASE("validation reports the first broken invariant") {
  AttributedGraph g = path3();
  CHECK_FALSE(validate_error(g, 1).has_value());

  AttributedGraph bad = g;
  bad.edges.push_back({2, 2, 0});
  CHECK(validate_error(bad, 1).has_value());
  CHECK_THROWS_AS(validate(bad, 1), std::invalid_argument);

  bad = g;
  bad.edges[0] = {1, 0, 0};  // must be u < v
  CHECK(validate_error(bad, 1).has_value());

  bad = g;
  bad.edges.push_back({0, 1, 0});  // duplicate
  CHECK(validate_error(bad, 1).has_value());

  bad = g;
  bad.edges[0].type = 3;  // out of range for one relation
  CHECK(validate_error(bad, 1).has_value());

  bad = g;
  bad.edges[0].v = 9;  // node index out of range
  CHECK(validate_error(bad, 1).has_value());

  bad = g;
  bad.node_features = Mat(2, 1);  // wrong row count
  CHECK(validate_error(bad, 1).has_value());

  bad = g;
  bad.node_features.at(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK(validate_error(bad, 1).has_value());

  bad = g;
  bad.num_nodes = 0;
  CHECK(validate_error(bad, 1).has_value());
}

TEST_CASE("pool validation enforces shared dimensions") {
  GraphPool pool;
  pool.node_feature_dim = 1;
  pool.num_relations = 1;
  pool.global_dim = 0;
  pool.graphs = {path3(), star5()};
  CHECK_NOTHROW(validate(pool));

  pool.graphs[1].global_attributes = {0.5};  // inconsistent with global_dim 0
  CHECK_THROWS_AS(validate(pool), std::invalid_argument);
}

TEST_CASE("normalized adjacency on the 3-path") {
  AttributedGraph g = path3();
  NormalizedAdjacency adj = normalized_adjacency(g, 1);
  REQUIRE(adj.rel.size() == 1);
  const Mat& a = adj.rel[0];
  REQUIRE(a.rows == 3);

  // degrees with self loops: 2, 3, 2
  const double d0 = 2.0, d1 = 3.0, d2 = 2.0;
  CHECK(a.at(0, 0) == doctest::Approx(1.0 / d0));
  CHECK(a.at(1, 1) == doctest::Approx(1.0 / d1));
  CHECK(a.at(2, 2) == doctest::Approx(1.0 / d2));
  CHECK(a.at(0, 1) == doctest::Approx(1.0 / std::sqrt(d0 * d1)));
  CHECK(a.at(1, 0) == doctest::Approx(a.at(0, 1)));
  CHECK(a.at(0, 2) == doctest::Approx(0.0));

  // spectrum within [-1, 1]
  auto [lo, hi] = oracles::symmetric_eig_range(a);
  CHECK(lo >= -1.0 - 1e-12);
  CHECK(hi <= 1.0 + 1e-12);
}

TEST_CASE("edgeless relations fall back to the identity") {
  AttributedGraph g = path3();
  for (auto& e : g.edges) e.type = 0;
  NormalizedAdjacency adj = normalized_adjacency(g, 2);  // relation 1 is empty
  REQUIRE(adj.rel.size() == 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(adj.rel[1].at(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));
}

TEST_CASE("relation inference from edge types") {
  AttributedGraph g = path3();
  g.edges[1].type = 2;
  NormalizedAdjacency adj = normalized_adjacency(g);
  CHECK(adj.rel.size() == 3);
}

TEST_CASE("centrality values on canonical graphs") {
  AttributedGraph p = path3();
  Vec dc = degree_centrality(p);
  CHECK(dc[0] == doctest::Approx(0.5));
  CHECK(dc[1] == doctest::Approx(1.0));
  CHECK(dc[2] == doctest::Approx(0.5));

  Vec bc = betweenness_centrality(p);
  CHECK(bc[0] == doctest::Approx(0.0));
  CHECK(bc[1] == doctest::Approx(1.0));
  CHECK(bc[2] == doctest::Approx(0.0));

  AttributedGraph s = star5();
  Vec sbc = betweenness_centrality(s);
  CHECK(sbc[0] == doctest::Approx(1.0));
  for (int i = 1; i < 5; ++i) CHECK(sbc[i] == doctest::Approx(0.0));

  AttributedGraph t = triangle();
  Vec cc = clustering_coefficient(t);
  for (int i = 0; i < 3; ++i) CHECK(cc[i] == doctest::Approx(1.0));
  Vec pc = clustering_coefficient(p);
  for (int i = 0; i < 3; ++i) CHECK(pc[i] == doctest::Approx(0.0));

  CHECK(mean_degree_centrality(p) == doctest::Approx(2.0 / 3.0));
  CHECK(mean_betweenness(p) == doctest::Approx(1.0 / 3.0));
  CHECK(mean_clustering(t) == doctest::Approx(1.0));
}

TEST_CASE("centralities match brute force on random graphs") {
  for (unsigned seed = 0; seed < 30; ++seed) {
    const int n = 3 + static_cast<int>(seed % 5);  // 3..7
    AttributedGraph g = random_graph(n, 0.45, 1000 + seed);
    const Vec bc = betweenness_centrality(g);
    const auto want_bc = oracles::brute_betweenness(g);
    for (int i = 0; i < n; ++i) CHECK(bc[i] == doctest::Approx(want_bc[i]).epsilon(1e-12));

    const Vec cc = clustering_coefficient(g);
    const auto want_cc = oracles::brute_clustering(g);
    for (int i = 0; i < n; ++i) CHECK(cc[i] == doctest::Approx(want_cc[i]).epsilon(1e-12));
  }
}

TEST_CASE("structure metrics use the deduplicated union of relations") {
  // same topology as the 3-path, but edges split over two relations
  AttributedGraph g = path3();
  g.edges = {{0, 1, 0}, {1, 2, 1}};
  Vec bc = betweenness_centrality(g);
  CHECK(bc[1] == doctest::Approx(1.0));

  Vec attrs = extract_global_attributes(g, {"x2"});
  CHECK(attrs[0] == doctest::Approx(2.0));

  // the same node pair in two relations is one topological edge
  AttributedGraph h = path3();
  h.edges = {{0, 1, 0}, {0, 1, 1}, {1, 2, 0}};
  Vec hx = extract_global_attributes(h, {"x2"});
  CHECK(hx[0] == doctest::Approx(2.0));
}

TEST_CASE("metric preconditions") {
  AttributedGraph tiny;
  tiny.num_nodes = 1;
  tiny.node_features = Mat(1, 1);
  CHECK_THROWS_AS(degree_centrality(tiny), std::invalid_argument);
  AttributedGraph two;
  two.num_nodes = 2;
  two.node_features = Mat(2, 1);
  two.edges = {{0, 1, 0}};
  CHECK_THROWS_AS(betweenness_centrality(two), std::invalid_argument);
  CHECK_NOTHROW(clustering_coefficient(two));
}

TEST_CASE("named attribute extraction") {
  AttributedGraph g = triangle();
  Vec v = extract_global_attributes(g, {"x1", "x2", "x3", "x4", "x5", "x6"}, 0.25);
  CHECK(v[0] == doctest::Approx(3.0));
  CHECK(v[1] == doctest::Approx(3.0));
  CHECK(v[2] == doctest::Approx(1.0));   // every node connects to every other
  CHECK(v[3] == doctest::Approx(0.0));   // no shortest path has interior nodes
  CHECK(v[4] == doctest::Approx(1.0));
  CHECK(v[5] == doctest::Approx(0.25));

  CHECK_THROWS_AS(extract_global_attributes(g, {"x6"}), std::invalid_argument);
  CHECK_THROWS_AS(extract_global_attributes(g, {"x9"}), std::invalid_argument);
  CHECK_THROWS_AS(extract_global_attributes(g, {}), std::invalid_argument);
}

TEST_CASE("min-max normalization") {
  Mat a(3, 2);
  a.at(0, 0) = 1.0;
  a.at(1, 0) = 2.0;
  a.at(2, 0) = 3.0;
  a.at(0, 1) = -4.0;
  a.at(1, 1) = 0.0;
  a.at(2, 1) = 4.0;
  auto ranges = minmax_normalize(a);
  REQUIRE(ranges.size() == 2);
  CHECK(ranges[0].first == doctest::Approx(1.0));
  CHECK(ranges[0].second == doctest::Approx(3.0));
  CHECK(a.at(0, 0) == doctest::Approx(0.0));
  CHECK(a.at(1, 0) == doctest::Approx(0.5));
  CHECK(a.at(2, 0) == doctest::Approx(1.0));
  CHECK(a.at(0, 1) == doctest::Approx(0.0));
  CHECK(a.at(1, 1) == doctest::Approx(0.5));
  CHECK(a.at(2, 1) == doctest::Approx(1.0));

  Mat constant(3, 1);
  for (double& x : constant.data) x = 2.0;
  CHECK_THROWS_AS(minmax_normalize(constant), std::runtime_error);
}
