#include <doctest.h>

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "graphbo/benchmarks.hpp"
#include "support/oracles.hpp"

using namespace graphbo;

namespace {

SyntheticSpec small_spec() {
  SyntheticSpec spec;
  spec.pool_size = 25;
  spec.n_min = 5;
  spec.n_max = 12;
  spec.p_min = 0.2;
  spec.p_max = 0.5;
  spec.seed = 3;
  return spec;
}

const std::string kConstantsPath = std::string(GRAPHBO_SOURCE_DIR) + "/data/hartmann4.json";

}  // namespace

TEST_CASE("generated pools have the documented shape") {
  const SyntheticSpec spec = small_spec();
  const PoolBuild build = generate_pool(spec);
  const GraphPool& pool = build.pool;

  REQUIRE(static_cast<int>(pool.graphs.size()) == spec.pool_size);
  CHECK(pool.node_feature_dim == spec.pool_size);
  CHECK(pool.num_relations == 1);
  CHECK(pool.global_dim == 6);
  REQUIRE(build.attributes_raw.rows == spec.pool_size);
  REQUIRE(build.attributes_raw.cols == 6);
  REQUIRE(build.ranges.size() == 6);

  for (int i = 0; i < spec.pool_size; ++i) {
    const AttributedGraph& g = pool.graphs[static_cast<std::size_t>(i)];
    CHECK(g.id == i);
    CHECK(g.num_nodes >= spec.n_min);
    CHECK(g.num_nodes <= spec.n_max);
    // every row of graph i is the identity one-hot e_i
    REQUIRE(g.node_features.rows == g.num_nodes);
    REQUIRE(g.node_features.cols == spec.pool_size);
    for (int r = 0; r < g.num_nodes; ++r)
      for (int c = 0; c < spec.pool_size; ++c)
        CHECK(g.node_features.at(r, c) == (c == i ? 1.0 : 0.0));
    // normalized attributes live in [0,1] and derive from the raw table
    REQUIRE(g.global_attributes.size() == 6);
    for (int j = 0; j < 6; ++j) {
      const double v = g.global_attributes[static_cast<std::size_t>(j)];
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      const auto [lo, hi] = build.ranges[static_cast<std::size_t>(j)];
      CHECK(v == doctest::Approx((build.attributes_raw.at(i, j) - lo) / (hi - lo))
                     .epsilon(1e-12));
    }
  }

  // min-max normalization pins each column's extremes to 0 and 1
  for (int j = 0; j < 6; ++j) {
    double lo = 2.0, hi = -1.0;
    for (const AttributedGraph& g : pool.graphs) {
      lo = std::min(lo, g.global_attributes[static_cast<std::size_t>(j)]);
      hi = std::max(hi, g.global_attributes[static_cast<std::size_t>(j)]);
    }
    CHECK(lo == 0.0);
    CHECK(hi == 1.0);
  }

  CHECK(build.optimum_id >= 0);
  CHECK(build.optimum_id < spec.pool_size);
  CHECK(std::isfinite(build.optimum_y));
}

TEST_CASE("pool generation is deterministic in the seed") {
  const SyntheticSpec spec = small_spec();
  const PoolBuild a = generate_pool(spec);
  const PoolBuild b = generate_pool(spec);
  CHECK(a.attributes_raw.data == b.attributes_raw.data);
  CHECK(a.optimum_id == b.optimum_id);
  CHECK(a.optimum_y == b.optimum_y);
  CHECK(a.ranges == b.ranges);
  REQUIRE(a.pool.graphs.size() == b.pool.graphs.size());
  for (std::size_t i = 0; i < a.pool.graphs.size(); ++i) {
    const AttributedGraph& ga = a.pool.graphs[i];
    const AttributedGraph& gb = b.pool.graphs[i];
    CHECK(ga.num_nodes == gb.num_nodes);
    REQUIRE(ga.edges.size() == gb.edges.size());
    for (std::size_t e = 0; e < ga.edges.size(); ++e) {
      CHECK(ga.edges[e].u == gb.edges[e].u);
      CHECK(ga.edges[e].v == gb.edges[e].v);
      CHECK(ga.edges[e].type == gb.edges[e].type);
    }
  }

  SyntheticSpec other = spec;
  other.seed = 4;
  const PoolBuild c = generate_pool(other);
  CHECK(a.attributes_raw.data != c.attributes_raw.data);
}

TEST_CASE("spec validation") {
  auto bad = [](auto mutate) {
    SyntheticSpec spec = small_spec();
    mutate(spec);
    CHECK_THROWS_AS(generate_pool(spec), std::invalid_argument);
  };
  bad([](SyntheticSpec& s) { s.pool_size = 1; });
  bad([](SyntheticSpec& s) { s.n_min = 2; });
  bad([](SyntheticSpec& s) { s.n_max = s.n_min - 1; });
  bad([](SyntheticSpec& s) { s.p_min = -0.1; });
  bad([](SyntheticSpec& s) { s.p_max = 1.1; });
  bad([](SyntheticSpec& s) { s.p_min = 0.5; s.p_max = 0.4; });
}

TEST_CASE("embedded Hartmann constants equal the data file") {
  const Hartmann4Constants& built_in = hartmann4_constants();
  const Hartmann4Constants from_file = load_hartmann4_constants(kConstantsPath);
  for (int i = 0; i < 4; ++i) {
    CHECK(built_in.alpha[i] == from_file.alpha[i]);
    for (int k = 0; k < 4; ++k) {
      CHECK(built_in.a[i][k] == from_file.a[i][k]);
      CHECK(built_in.p[i][k] == from_file.p[i][k]);
    }
  }
  CHECK_THROWS_AS(load_hartmann4_constants("/nonexistent/h4.json"), std::runtime_error);
}

TEST_CASE("Hartmann evaluation matches an independent file-based reference") {
  std::mt19937_64 eng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    const std::array<double, 4> x = {u(eng), u(eng), u(eng), u(eng)};
    const double ours = hartmann4(x);
    const double ref = oracles::hartmann4_file_reference(kConstantsPath, x);
    CHECK(ours == doctest::Approx(ref).epsilon(1e-12));
  }
  // out-of-domain inputs are clamped to the boundary
  CHECK(hartmann4({1.5, 0.5, 0.5, 0.5}) == hartmann4({1.0, 0.5, 0.5, 0.5}));
  CHECK(hartmann4({-0.2, 0.5, 0.5, 0.5}) == hartmann4({0.0, 0.5, 0.5, 0.5}));
}

TEST_CASE("situations expose the documented attribute columns") {
  CHECK(situation_columns(Situation::a) == std::vector<int>{0, 1, 2, 3});
  CHECK(situation_columns(Situation::b) == std::vector<int>{0, 1});
  CHECK(situation_columns(Situation::c) == std::vector<int>{0, 1, 2, 3, 4, 5});
  CHECK(situation_columns(Situation::d) == std::vector<int>{4, 5});
  for (const char* name : {"a", "b", "c", "d"})
    CHECK(situation_name(situation_from_string(name)) == std::string(name));
  CHECK_THROWS_AS(situation_from_string("e"), std::invalid_argument);
  CHECK_THROWS_AS(situation_from_string(""), std::invalid_argument);
}

TEST_CASE("applying a situation selects attribute columns") {
  const PoolBuild build = generate_pool(small_spec());
  for (Situation s : {Situation::a, Situation::b, Situation::c, Situation::d}) {
    const std::vector<int> cols = situation_columns(s);
    const GraphPool sit = apply_situation(build.pool, s);
    CHECK(sit.global_dim == static_cast<int>(cols.size()));
    CHECK(sit.node_feature_dim == build.pool.node_feature_dim);
    REQUIRE(sit.graphs.size() == build.pool.graphs.size());
    for (std::size_t i = 0; i < sit.graphs.size(); ++i) {
      REQUIRE(sit.graphs[i].global_attributes.size() == cols.size());
      for (std::size_t k = 0; k < cols.size(); ++k)
        CHECK(sit.graphs[i].global_attributes[k] ==
              build.pool.graphs[i].global_attributes[static_cast<std::size_t>(cols[k])]);
    }
    // a situated pool no longer carries all six attributes
    if (s != Situation::c) CHECK_THROWS_AS(apply_situation(sit, s), std::invalid_argument);
  }
}

TEST_CASE("the synthetic objective negates Hartmann over the first four attributes") {
  const PoolBuild build = generate_pool(small_spec());
  SyntheticObjective obj(build.pool);
  CHECK(obj.cost_tag() == "hartmann4");

  for (int i = 0; i < 25; i += 4) {
    const AttributedGraph& g = build.pool.graphs[static_cast<std::size_t>(i)];
    const std::array<double, 4> x = {g.global_attributes[0], g.global_attributes[1],
                                     g.global_attributes[2], g.global_attributes[3]};
    CHECK(obj.evaluate(g) == -hartmann4(x));
  }

  // lookups go by id, so situated graphs (with hidden inputs) evaluate identically
  const GraphPool sit = apply_situation(build.pool, Situation::d);
  for (int i = 0; i < 25; i += 6)
    CHECK(obj.evaluate(sit.graphs[static_cast<std::size_t>(i)]) ==
          obj.evaluate(build.pool.graphs[static_cast<std::size_t>(i)]));

  AttributedGraph stranger;
  stranger.id = 10000;
  CHECK_THROWS_AS(obj.evaluate(stranger), std::runtime_error);

  // a pool whose attributes omit the objective inputs cannot define it
  CHECK_THROWS_AS(SyntheticObjective{sit}, std::invalid_argument);
}

TEST_CASE("pool optimum is the argmax of the objective") {
  const PoolBuild build = generate_pool(small_spec());
  SyntheticObjective obj(build.pool);
  int best_id = -1;
  double best_y = -std::numeric_limits<double>::infinity();
  for (const AttributedGraph& g : build.pool.graphs) {
    const double y = obj.evaluate(g);
    if (y > best_y) {
      best_y = y;
      best_id = g.id;
    }
  }
  const auto [opt_id, opt_y] = pool_optimum(build.pool);
  CHECK(opt_id == best_id);
  CHECK(opt_y == best_y);
  CHECK(build.optimum_id == best_id);
  CHECK(build.optimum_y == best_y);
}

TEST_CASE("pool sidecars round-trip") {
  const PoolBuild build = generate_pool(small_spec());
  const std::string path =
      (std::filesystem::temp_directory_path() / "graphbo_sidecar_test.json").string();
  write_pool_sidecar(build, path);
  const PoolSidecar s = read_pool_sidecar(path);
  CHECK(s.spec.seed == build.spec.seed);
  CHECK(s.spec.pool_size == build.spec.pool_size);
  CHECK(s.spec.n_min == build.spec.n_min);
  CHECK(s.spec.n_max == build.spec.n_max);
  CHECK(s.spec.p_min == build.spec.p_min);
  CHECK(s.spec.p_max == build.spec.p_max);
  CHECK(s.retries_used == build.retries_used);
  CHECK(s.ranges == build.ranges);
  CHECK(s.optimum_id == build.optimum_id);
  CHECK(s.optimum_y == build.optimum_y);
  std::filesystem::remove(path);

  const std::string bad =
      (std::filesystem::temp_directory_path() / "graphbo_sidecar_bad.json").string();
  std::ofstream(bad) << "{\"format\": \"something-else\"}\n";
  CHECK_THROWS_AS(read_pool_sidecar(bad), std::runtime_error);
  std::filesystem::remove(bad);
  CHECK_THROWS_AS(read_pool_sidecar("/nonexistent/meta.json"), std::runtime_error);
}

TEST_CASE("log-log slope recovers exact power laws") {
  std::vector<std::pair<double, double>> pts;
  for (double x : {2.0, 4.0, 8.0, 16.0}) pts.push_back({x, 3.0 * std::pow(x, 2.5)});
  CHECK(loglog_slope(pts) == doctest::Approx(2.5).epsilon(1e-12));

  pts = {{1.0, 5.0}, {10.0, 5.0}};
  CHECK(loglog_slope(pts) == doctest::Approx(0.0));

  CHECK_THROWS_AS(loglog_slope({{1.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(loglog_slope({{1.0, 1.0}, {2.0, -1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(loglog_slope({{1.0, 1.0}, {1.0, 2.0}}), std::invalid_argument);
}
