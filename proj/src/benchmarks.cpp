#include "graphbo/benchmarks.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "graphbo/rng.hpp"

namespace graphbo {

namespace {

void check_spec(const SyntheticSpec& spec) {
  if (spec.pool_size < 2) throw std::invalid_argument("pool_size must be at least 2");
  if (spec.n_min < 3) throw std::invalid_argument("n_min must be at least 3");
  if (spec.n_max < spec.n_min) throw std::invalid_argument("n_max must be >= n_min");
  if (!(spec.p_min >= 0.0 && spec.p_max <= 1.0 && spec.p_min <= spec.p_max))
    throw std::invalid_argument("edge probability range must satisfy 0 <= p_min <= p_max <= 1");
}

AttributedGraph make_er_graph(const SyntheticSpec& spec, int retry, int i) {
  Rng rng(seed_mix(spec.seed, (static_cast<std::uint64_t>(retry) << 8) | 0x11u,
                   static_cast<std::uint64_t>(i)));
  AttributedGraph g;
  g.id = i;
  g.num_nodes = spec.n_min + static_cast<int>(rng.next_below(
                                 static_cast<std::uint64_t>(spec.n_max - spec.n_min + 1)));
  const double p = rng.uniform(spec.p_min, spec.p_max);
  for (int u = 0; u < g.num_nodes; ++u)
    for (int v = u + 1; v < g.num_nodes; ++v)
      if (rng.u01() < p) g.edges.push_back({u, v, 0});
  g.node_features = Mat(g.num_nodes, spec.pool_size);
  for (int r = 0; r < g.num_nodes; ++r) g.node_features.at(r, i) = 1.0;
  return g;
}

}  // namespace

PoolBuild generate_pool(const SyntheticSpec& spec) {
  check_spec(spec);
  static const std::vector<std::string> kNames = {"x1", "x2", "x3", "x4", "x5", "x6"};
  std::string last_error;
  for (int retry = 0; retry <= 10; ++retry) {
    PoolBuild build;
    build.spec = spec;
    build.retries_used = retry;
    build.pool.node_feature_dim = spec.pool_size;
    build.pool.num_relations = 1;
    build.pool.global_dim = 6;
    build.attributes_raw = Mat(spec.pool_size, 6);
    for (int i = 0; i < spec.pool_size; ++i) {
      AttributedGraph g = make_er_graph(spec, retry, i);
      const double x6 =
          Rng(seed_mix(spec.seed, 0x6a0u + static_cast<std::uint64_t>(retry),
                       static_cast<std::uint64_t>(i)))
              .u01();
      Vec attrs = extract_global_attributes(g, kNames, x6);
      for (int j = 0; j < 6; ++j) build.attributes_raw.at(i, j) = attrs[j];
      build.pool.graphs.push_back(std::move(g));
    }
    Mat normalized = build.attributes_raw;
    try {
      build.ranges = minmax_normalize(normalized);
    } catch (const std::runtime_error& e) {
      last_error = e.what();
      continue;
    }
    for (int i = 0; i < spec.pool_size; ++i) {
      Vec row(normalized.row(i), normalized.row(i) + 6);
      build.pool.graphs[i].global_attributes = std::move(row);
    }
    auto [opt_id, opt_y] = pool_optimum(build.pool);
    build.optimum_id = opt_id;
    build.optimum_y = opt_y;
    validate(build.pool);
    return build;
  }
  throw std::runtime_error("pool generation failed after 10 retries: " + last_error);
}

const Hartmann4Constants& hartmann4_constants() {
  static const Hartmann4Constants c = {
      {1.0, 1.2, 3.0, 3.2},
      {{{10.0, 3.0, 17.0, 3.5},
        {0.05, 10.0, 17.0, 0.1},
        {3.0, 3.5, 1.7, 10.0},
        {17.0, 8.0, 0.05, 10.0}}},
      {{{0.1312, 0.1696, 0.5569, 0.0124},
        {0.2329, 0.4135, 0.8307, 0.3736},
        {0.2348, 0.1451, 0.3522, 0.2883},
        {0.4047, 0.8828, 0.8732, 0.5743}}}};
  return c;
}

Hartmann4Constants load_hartmann4_constants(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  Hartmann4Constants c{};
  const auto& alpha = j.at("alpha");
  const auto& a = j.at("a");
  const auto& p = j.at("p");
  if (alpha.size() != 4 || a.size() != 4 || p.size() != 4)
    throw std::runtime_error(path + ": expected four rows in alpha/a/p");
  for (int i = 0; i < 4; ++i) {
    c.alpha[i] = alpha.at(i).get<double>();
    if (a.at(i).size() != 4 || p.at(i).size() != 4)
      throw std::runtime_error(path + ": a/p rows must have four entries");
    for (int k = 0; k < 4; ++k) {
      c.a[i][k] = a.at(i).at(k).get<double>();
      c.p[i][k] = p.at(i).at(k).get<double>();
    }
  }
  return c;
}

double hartmann4(const Hartmann4Constants& c, const std::array<double, 4>& x) {
  static std::atomic<bool> warned{false};
  std::array<double, 4> z = x;
  for (double& v : z) {
    if (v < 0.0 || v > 1.0) {
      if (!warned.exchange(true))
        std::fprintf(stderr, "warning: hartmann4 input outside [0,1]^4; clamping\n");
      v = std::min(1.0, std::max(0.0, v));
    }
  }
  double acc = 1.1;
  for (int i = 0; i < 4; ++i) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double d = z[k] - c.p[i][k];
      s += c.a[i][k] * d * d;
    }
    acc -= c.alpha[i] * std::exp(-s);
  }
  return acc / 0.839;
}

double hartmann4(const std::array<double, 4>& x) { return hartmann4(hartmann4_constants(), x); }

Situation situation_from_string(const std::string& s) {
  if (s == "a") return Situation::a;
  if (s == "b") return Situation::b;
  if (s == "c") return Situation::c;
  if (s == "d") return Situation::d;
  throw std::invalid_argument("unknown situation: " + s + " (expected a, b, c or d)");
}

const char* situation_name(Situation s) {
  switch (s) {
    case Situation::a: return "a";
    case Situation::b: return "b";
    case Situation::c: return "c";
    case Situation::d: return "d";
  }
  throw std::logic_error("unreachable");
}

std::vector<int> situation_columns(Situation s) {
  switch (s) {
    case Situation::a: return {0, 1, 2, 3};
    case Situation::b: return {0, 1};
    case Situation::c: return {0, 1, 2, 3, 4, 5};
    case Situation::d: return {4, 5};
  }
  throw std::logic_error("unreachable");
}

GraphPool apply_situation(const GraphPool& pool, Situation s) {
  if (pool.global_dim != 6)
    throw std::invalid_argument("situations select from six global attributes; pool has " +
                                std::to_string(pool.global_dim));
  const std::vector<int> cols = situation_columns(s);
  GraphPool out;
  out.node_feature_dim = pool.node_feature_dim;
  out.num_relations = pool.num_relations;
  out.global_dim = static_cast<int>(cols.size());
  out.graphs.reserve(pool.graphs.size());
  for (const AttributedGraph& g : pool.graphs) {
    AttributedGraph h = g;
    h.global_attributes.clear();
    for (int c : cols) h.global_attributes.push_back(g.global_attributes[c]);
    out.graphs.push_back(std::move(h));
  }
  return out;
}

SyntheticObjective::SyntheticObjective(const GraphPool& pool) {
  if (pool.global_dim < 4)
    throw std::invalid_argument("synthetic objective needs the first four global attributes");
  std::vector<std::pair<int, std::array<double, 4>>> entries;
  for (const AttributedGraph& g : pool.graphs)
    entries.push_back({g.id,
                       {g.global_attributes[0], g.global_attributes[1], g.global_attributes[2],
                        g.global_attributes[3]}});
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [id, x] : entries) {
    ids_.push_back(id);
    inputs_.push_back(x);
  }
}

double SyntheticObjective::evaluate(const AttributedGraph& g) {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), g.id);
  if (it == ids_.end() || *it != g.id)
    throw std::runtime_error("graph id " + std::to_string(g.id) + " is not in the pool");
  return -hartmann4(inputs_[static_cast<std::size_t>(it - ids_.begin())]);
}

std::pair<int, double> pool_optimum(const GraphPool& pool) {
  if (pool.graphs.empty()) throw std::invalid_argument("empty pool");
  if (pool.global_dim < 4)
    throw std::invalid_argument("pool optimum needs the first four global attributes");
  int best_id = -1;
  double best_y = -std::numeric_limits<double>::infinity();
  for (const AttributedGraph& g : pool.graphs) {
    const double y = -hartmann4({g.global_attributes[0], g.global_attributes[1],
                                 g.global_attributes[2], g.global_attributes[3]});
    if (y > best_y) {
      best_y = y;
      best_id = g.id;
    }
  }
  return {best_id, best_y};
}

void write_pool_sidecar(const PoolBuild& build, const std::string& path) {
  nlohmann::ordered_json j;
  j["format"] = "graphbo-pool-meta-v1";
  j["seed"] = build.spec.seed;
  j["pool_size"] = build.spec.pool_size;
  j["n_min"] = build.spec.n_min;
  j["n_max"] = build.spec.n_max;
  j["p_min"] = build.spec.p_min;
  j["p_max"] = build.spec.p_max;
  j["retries_used"] = build.retries_used;
  nlohmann::ordered_json ranges = nlohmann::ordered_json::array();
  for (const auto& [lo, hi] : build.ranges) ranges.push_back({lo, hi});
  j["ranges"] = ranges;
  j["optimum_id"] = build.optimum_id;
  j["optimum_y"] = build.optimum_y;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

PoolSidecar read_pool_sidecar(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  if (j.value("format", "") != "graphbo-pool-meta-v1")
    throw std::runtime_error(path + ": not a pool sidecar file");
  PoolSidecar s;
  s.spec.seed = j.at("seed").get<std::uint64_t>();
  s.spec.pool_size = j.at("pool_size").get<int>();
  s.spec.n_min = j.at("n_min").get<int>();
  s.spec.n_max = j.at("n_max").get<int>();
  s.spec.p_min = j.at("p_min").get<double>();
  s.spec.p_max = j.at("p_max").get<double>();
  s.retries_used = j.at("retries_used").get<int>();
  for (const auto& r : j.at("ranges"))
    s.ranges.push_back({r.at(0).get<double>(), r.at(1).get<double>()});
  s.optimum_id = j.at("optimum_id").get<int>();
  s.optimum_y = j.at("optimum_y").get<double>();
  return s;
}

ScalingResult scaling_harness(const ScalingConfig& cfg) {
  if (cfg.checkpoints.empty()) throw std::invalid_argument("no scaling checkpoints");
  std::vector<int> checks = cfg.checkpoints;
  std::sort(checks.begin(), checks.end());
  const int last = checks.back();
  ExperimentConfig ec = cfg.base;
  if (checks.front() <= ec.init_evals + ec.retrain_every)
    throw std::invalid_argument("first checkpoint must exceed init_evals + retrain_every");
  if (cfg.pool_size <= last + 1)
    throw std::invalid_argument("pool_size must exceed the largest checkpoint");

  SyntheticSpec spec;
  spec.pool_size = cfg.pool_size;
  spec.seed = cfg.pool_seed;
  PoolBuild build = generate_pool(spec);
  SyntheticObjective objective(build.pool);
  GraphPool sit = apply_situation(build.pool, Situation::a);

  ec.surrogate.input_dim = sit.node_feature_dim;
  ec.surrogate.num_relations = sit.num_relations;
  ec.surrogate.global_dim = sit.global_dim;
  ec.max_iter = last - ec.init_evals + 1;  // iteration t trains on init_evals + t - 1 points
  ec.target_y.reset();

  RunArtifacts art;
  RunRecord rec = run(objective, sit, ec, nullptr, &art);

  ScalingResult res;
  for (const EvalRow& r : rec.rows) {
    if (r.t == 0) continue;
    ScalingRow row;
    row.t = r.t;
    row.n_obs = ec.init_evals + r.t - 1;
    row.select_ms = r.t_select_ms;
    row.retrain_ms = r.t_retrain_ms;
    res.rows.push_back(row);
  }

  for (int n : checks) {
    double total = 0.0;
    int count = 0;
    for (const ScalingRow& row : res.rows) {
      if (row.n_obs > n - ec.retrain_every && row.n_obs <= n) {
        total += row.select_ms + row.retrain_ms;
        ++count;
      }
    }
    if (count == 0) throw std::runtime_error("no iterations near checkpoint " + std::to_string(n));
    res.checkpoint_cost.push_back({static_cast<double>(n), total / count});
  }

  const int pool_size = static_cast<int>(sit.graphs.size());
  res.phi_all = Mat(pool_size, ec.surrogate.basis_dim());
  for (int i = 0; i < pool_size; ++i) {
    NormalizedAdjacency adj = normalized_adjacency(sit.graphs[i], sit.num_relations);
    ForwardResult fr = forward(sit.graphs[i].node_features, sit.graphs[i].global_attributes, adj,
                               art.params, ec.surrogate, ForwardMode::predict);
    std::copy(fr.phi.begin(), fr.phi.end(), res.phi_all.row(i));
  }
  res.eval_order = art.eval_order;
  res.y_std = art.y_std;
  res.thetas = art.thetas;
  return res;
}

double loglog_slope(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 2) throw std::invalid_argument("slope needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    if (!(x > 0.0) || !(y > 0.0)) throw std::invalid_argument("log-log slope needs positive data");
    const double lx = std::log(x);
    const double ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(pts.size());
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-30) throw std::invalid_argument("degenerate abscissa for slope fit");
  return (n * sxy - sx * sy) / denom;
}

}  // namespace graphbo
