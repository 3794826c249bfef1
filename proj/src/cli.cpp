#include "graphbo/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphbo/benchmarks.hpp"
#include "graphbo/bo_loop.hpp"
#include "graphbo/pool_io.hpp"
#include "graphbo/rng.hpp"

namespace fs = std::filesystem;

namespace graphbo {

namespace {

int env_threads() {
  const char* s = std::getenv("GRAPHBO_THREADS");
  if (!s) return 1;
  const int v = std::atoi(s);
  return v < 1 ? 1 : v;
}

std::optional<PoolSidecar> try_read_sidecar(const std::string& pool_path) {
  const std::string meta = pool_path + ".meta.json";
  if (!fs::exists(meta)) return std::nullopt;
  return read_pool_sidecar(meta);
}

std::optional<int> evals_to_target(const RunRecord& rec, double target) {
  for (std::size_t i = 0; i < rec.rows.size(); ++i)
    if (std::isfinite(rec.rows[i].best_y) && rec.rows[i].best_y >= target - 1e-12)
      return static_cast<int>(i) + 1;
  return std::nullopt;
}

struct Trajectory {
  std::vector<double> best;  // incumbent per cumulative evaluation
};

Trajectory trajectory_of(const RunRecord& rec) {
  Trajectory t;
  for (const EvalRow& r : rec.rows) t.best.push_back(r.best_y);
  return t;
}

struct CurvePoint {
  int evals = 0;
  double mean = 0.0;
  double std = 0.0;
  int count = 0;
};

// Trajectories shorter than the longest are extended with their final value.
std::vector<CurvePoint> mean_curve(const std::vector<Trajectory>& trajs) {
  std::size_t len = 0;
  for (const Trajectory& t : trajs) len = std::max(len, t.best.size());
  std::vector<CurvePoint> out;
  for (std::size_t k = 0; k < len; ++k) {
    CurvePoint p;
    p.evals = static_cast<int>(k) + 1;
    double sum = 0.0, sq = 0.0;
    int n = 0;
    for (const Trajectory& t : trajs) {
      if (t.best.empty()) continue;
      const double v = t.best[std::min(k, t.best.size() - 1)];
      if (!std::isfinite(v)) continue;
      sum += v;
      sq += v * v;
      ++n;
    }
    if (n > 0) {
      p.mean = sum / n;
      p.std = n > 1 ? std::sqrt(std::max(0.0, sq / n - p.mean * p.mean)) : 0.0;
      p.count = n;
    } else {
      p.mean = std::numeric_limits<double>::quiet_NaN();
      p.std = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back(p);
  }
  return out;
}

void write_curve_csv(const std::vector<CurvePoint>& curve, const std::string& path,
                     const std::string& label) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "label,evals,mean_best_y,std_best_y,repeats\n";
  for (const CurvePoint& p : curve) {
    out << label << ',' << p.evals << ','
        << (std::isnan(p.mean) ? "nan" : format_double(p.mean)) << ','
        << (std::isnan(p.std) ? "nan" : format_double(p.std)) << ',' << p.count << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

// Shared by `run` and `baseline`: per-repeat CSV/JSON plus an aggregate.
struct RepeatOutcome {
  bool ok = false;
  std::string error;
  RunRecord record;
  std::string csv_path;
};

int aggregate_outputs(const std::string& label, const std::string& out_dir,
                      const std::vector<RepeatOutcome>& outcomes,
                      std::optional<double> target,
                      const std::map<std::string, std::string>& context) {
  std::vector<Trajectory> trajs;
  for (const RepeatOutcome& o : outcomes)
    if (o.ok) trajs.push_back(trajectory_of(o.record));

  nlohmann::ordered_json j;
  j["format"] = "graphbo-aggregate-v1";
  j["label"] = label;
  for (const auto& [k, v] : context) j[k] = v;
  j["repeats"] = outcomes.size();
  j["completed"] = trajs.size();
  if (target.has_value())
    j["target_y"] = *target;
  else
    j["target_y"] = nullptr;

  nlohmann::ordered_json reps = nlohmann::ordered_json::array();
  double best_sum = 0.0, best_sq = 0.0;
  int best_n = 0;
  std::vector<double> reach;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    const RepeatOutcome& o = outcomes[r];
    nlohmann::ordered_json e;
    e["repeat"] = r;
    if (!o.ok) {
      e["error"] = o.error;
      reps.push_back(e);
      continue;
    }
    e["csv"] = fs::path(o.csv_path).filename().string();
    e["evaluations"] = o.record.rows.size();
    e["best_id"] = o.record.best_id;
    if (std::isnan(o.record.best_y))
      e["best_y"] = nullptr;
    else
      e["best_y"] = o.record.best_y;
    e["termination"] = o.record.termination;
    if (target.has_value()) {
      const std::optional<int> n = evals_to_target(o.record, *target);
      if (n.has_value()) {
        e["evals_to_target"] = *n;
        reach.push_back(static_cast<double>(*n));
      } else {
        e["evals_to_target"] = nullptr;
      }
    }
    if (std::isfinite(o.record.best_y)) {
      best_sum += o.record.best_y;
      best_sq += o.record.best_y * o.record.best_y;
      ++best_n;
    }
    reps.push_back(e);
  }
  j["per_repeat"] = reps;
  if (best_n > 0) {
    const double mean = best_sum / best_n;
    j["mean_best_y"] = mean;
    j["std_best_y"] = best_n > 1 ? std::sqrt(std::max(0.0, best_sq / best_n - mean * mean)) : 0.0;
  } else {
    j["mean_best_y"] = nullptr;
    j["std_best_y"] = nullptr;
  }
  if (target.has_value()) {
    if (!reach.empty()) {
      double s = 0.0, q = 0.0;
      for (double v : reach) {
        s += v;
        q += v * v;
      }
      const double mean = s / reach.size();
      j["mean_evals_to_target"] = mean;
      j["std_evals_to_target"] =
          reach.size() > 1 ? std::sqrt(std::max(0.0, q / reach.size() - mean * mean)) : 0.0;
    } else {
      j["mean_evals_to_target"] = nullptr;
      j["std_evals_to_target"] = nullptr;
    }
    j["reached_fraction"] =
        outcomes.empty() ? 0.0 : static_cast<double>(reach.size()) / outcomes.size();
  }

  const std::string curve_path = (fs::path(out_dir) / (label + "_curve.csv")).string();
  write_curve_csv(mean_curve(trajs), curve_path, label);
  j["curve"] = fs::path(curve_path).filename().string();

  const std::string agg_path = (fs::path(out_dir) / (label + "_aggregate.json")).string();
  std::ofstream out(agg_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + agg_path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + agg_path);

  std::printf("aggregate: %s\n", agg_path.c_str());
  if (best_n > 0)
    std::printf("mean best y over %d completed repeats: %.6f\n", best_n, best_sum / best_n);
  bool all_ok = true;
  for (const RepeatOutcome& o : outcomes) {
    if (!o.ok) {
      std::fprintf(stderr, "repeat failed: %s\n", o.error.c_str());
      all_ok = false;
    }
  }
  return all_ok ? 0 : 1;
}

void run_repeats(int repeats, const std::function<void(int)>& body) {
  const int threads = std::min(env_threads(), repeats);
  if (threads <= 1) {
    for (int r = 0; r < repeats; ++r) body(r);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&]() {
      for (int r = next.fetch_add(1); r < repeats; r = next.fetch_add(1)) body(r);
    });
  for (std::thread& t : pool) t.join();
}

struct GenPoolOpts {
  int size = 500;
  std::uint64_t seed = 0;
  std::string out;
  int n_min = 20;
  int n_max = 60;
  double p_min = 0.10;
  double p_max = 0.26;
};

int cmd_gen_pool(const GenPoolOpts& o) {
  SyntheticSpec spec;
  spec.pool_size = o.size;
  spec.seed = o.seed;
  spec.n_min = o.n_min;
  spec.n_max = o.n_max;
  spec.p_min = o.p_min;
  spec.p_max = o.p_max;
  if (o.size < 21)
    std::fprintf(stderr,
                 "warning: pool size %d is below the default init_evals+1 (21); "
                 "runs on it need a smaller --init-evals\n",
                 o.size);
  PoolBuild build = generate_pool(spec);
  if (const fs::path dir = fs::path(o.out).parent_path(); !dir.empty())
    fs::create_directories(dir);
  write_pool_jsonl(build.pool, o.out);
  write_pool_sidecar(build, o.out + ".meta.json");

  double nodes = 0.0, edges = 0.0;
  for (const AttributedGraph& g : build.pool.graphs) {
    nodes += g.num_nodes;
    edges += static_cast<double>(g.edges.size());
  }
  const double n = static_cast<double>(build.pool.graphs.size());
  std::printf("pool: %d graphs -> %s\n", o.size, o.out.c_str());
  std::printf("avg |V| = %.2f, avg |E| = %.2f\n", nodes / n, edges / n);
  std::printf("true optimum: graph %d, y = %.6f\n", build.optimum_id, build.optimum_y);
  if (build.retries_used > 0)
    std::printf("pool regenerated %d time(s) to avoid a constant attribute column\n",
                build.retries_used);
  std::printf("sidecar: %s.meta.json\n", o.out.c_str());
  return 0;
}

struct RunOpts {
  std::string pool;
  std::string situation = "a";
  std::string out;
  std::string label = "run";
  int repeats = 1;
  std::uint64_t seed = 0;
  int max_iter = -1;
  int init_evals = 20;
  int samples = 10;
  int retrain_every = 20;
  int candidate_budget = -1;
  int initial_epochs = 2000;
  int retrain_epochs = 500;
  bool no_warm_start = false;
  bool stop_at_target = false;
  double target = std::numeric_limits<double>::quiet_NaN();
  int lambda = 1;
  int gc_layers = 5;
  int fc_layers = 5;
  int gc_width = 48;
  int pool_width = 50;
  int fc_width = 45;
  int bases = 4;
  double learning_rate = 1e-4;
  double dropout = 0.0;
  double penalty = 1e-5;
  bool save_params = false;
};

ExperimentConfig experiment_config_for(const RunOpts& o, const GraphPool& sit) {
  ExperimentConfig ec;
  ec.init_evals = o.init_evals;
  ec.max_iter = o.max_iter;
  ec.num_hyper_samples = o.samples;
  ec.retrain_every = o.retrain_every;
  ec.candidate_budget = o.candidate_budget;
  ec.initial_epochs = o.initial_epochs;
  ec.retrain_epochs = o.retrain_epochs;
  ec.warm_start = !o.no_warm_start;
  ec.surrogate.num_gc_layers = o.gc_layers;
  ec.surrogate.num_fc_layers = o.fc_layers;
  ec.surrogate.gc_width = o.gc_width;
  ec.surrogate.pool_width = o.pool_width;
  ec.surrogate.fc_width = o.fc_width;
  ec.surrogate.num_bases = o.bases;
  ec.surrogate.learning_rate = o.learning_rate;
  ec.surrogate.dropout = o.dropout;
  ec.surrogate.penalty = o.penalty;
  ec.surrogate.lambda_switch = o.lambda;
  ec.surrogate.input_dim = sit.node_feature_dim;
  ec.surrogate.num_relations = sit.num_relations;
  ec.surrogate.global_dim = sit.global_dim;
  return ec;
}

std::optional<double> resolve_target(const RunOpts& o, const std::string& pool_path) {
  if (std::isfinite(o.target)) return o.target;
  if (!o.stop_at_target) return std::nullopt;
  const std::optional<PoolSidecar> side = try_read_sidecar(pool_path);
  if (!side.has_value())
    throw std::runtime_error("--stop-at-target needs " + pool_path +
                             ".meta.json or an explicit --target");
  return side->optimum_y;
}

int cmd_run(const RunOpts& o) {
  GraphPool full = read_pool_jsonl(o.pool);
  if (full.global_dim != 6)
    throw std::runtime_error(
        "pool stores " + std::to_string(full.global_dim) +
        " global attributes; run expects the six written by gen-pool");
  SyntheticObjective objective(full);
  const std::optional<double> target = resolve_target(o, o.pool);
  const Situation sit_id = situation_from_string(o.situation);
  GraphPool sit = apply_situation(full, sit_id);
  const std::optional<PoolSidecar> side = try_read_sidecar(o.pool);

  fs::create_directories(o.out);
  std::vector<RepeatOutcome> outcomes(static_cast<std::size_t>(o.repeats));
  run_repeats(o.repeats, [&](int r) {
    RepeatOutcome& res = outcomes[static_cast<std::size_t>(r)];
    try {
      ExperimentConfig ec = experiment_config_for(o, sit);
      ec.target_y = o.stop_at_target || std::isfinite(o.target) ? target : std::nullopt;
      ec.seeds.pool = side.has_value() ? side->spec.seed : 0;
      ec.seeds.net = seed_mix(o.seed, static_cast<std::uint64_t>(r), 1);
      ec.seeds.mcmc = seed_mix(o.seed, static_cast<std::uint64_t>(r), 2);
      ec.seeds.selection = seed_mix(o.seed, static_cast<std::uint64_t>(r), 3);
      RunArtifacts art;
      res.record = run(objective, sit, ec, nullptr, o.save_params ? &art : nullptr);
      const std::string stem = o.label + "_rep" + std::to_string(r);
      res.csv_path = (fs::path(o.out) / (stem + ".csv")).string();
      write_record_csv(res.record, res.csv_path);
      write_run_summary_json(res.record, ec, objective.cost_tag(),
                             {{"pool", o.pool},
                              {"situation", o.situation},
                              {"label", o.label},
                              {"repeat", std::to_string(r)},
                              {"master_seed", std::to_string(o.seed)}},
                             (fs::path(o.out) / (stem + ".json")).string());
      if (o.save_params)
        save_params_json(art.params, (fs::path(o.out) / (stem + "_params.json")).string());
      res.ok = true;
    } catch (const std::exception& e) {
      res.error = e.what();
    }
  });

  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    const RepeatOutcome& res = outcomes[r];
    if (res.ok)
      std::printf("rep %zu: best y = %.6f (graph %d) after %zu evaluations [%s]\n", r,
                  res.record.best_y, res.record.best_id, res.record.rows.size(),
                  res.record.termination.c_str());
  }
  return aggregate_outputs(o.label, o.out, outcomes, target,
                           {{"command", "run"}, {"pool", o.pool}, {"situation", o.situation}});
}

struct BaselineOpts {
  std::string pool;
  std::string out;
  std::string label = "baseline";
  int budget = 150;
  int repeats = 1;
  std::uint64_t seed = 0;
  bool stop_at_target = false;
  double target = std::numeric_limits<double>::quiet_NaN();
};

int cmd_baseline(const BaselineOpts& o) {
  GraphPool full = read_pool_jsonl(o.pool);
  if (full.global_dim != 6)
    throw std::runtime_error("pool stores " + std::to_string(full.global_dim) +
                             " global attributes; baseline expects the six written by gen-pool");
  SyntheticObjective objective(full);
  std::optional<double> target;
  if (std::isfinite(o.target)) {
    target = o.target;
  } else if (o.stop_at_target) {
    const std::optional<PoolSidecar> side = try_read_sidecar(o.pool);
    if (!side.has_value())
      throw std::runtime_error("--stop-at-target needs " + o.pool +
                               ".meta.json or an explicit --target");
    target = side->optimum_y;
  }

  fs::create_directories(o.out);
  std::vector<RepeatOutcome> outcomes(static_cast<std::size_t>(o.repeats));
  run_repeats(o.repeats, [&](int r) {
    RepeatOutcome& res = outcomes[static_cast<std::size_t>(r)];
    try {
      res.record = random_baseline(objective, full, o.budget,
                                   seed_mix(o.seed, static_cast<std::uint64_t>(r), 4),
                                   o.stop_at_target || std::isfinite(o.target)
                                       ? target
                                       : std::optional<double>());
      const std::string stem = o.label + "_rep" + std::to_string(r);
      res.csv_path = (fs::path(o.out) / (stem + ".csv")).string();
      write_record_csv(res.record, res.csv_path);
      res.ok = true;
    } catch (const std::exception& e) {
      res.error = e.what();
    }
  });

  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    const RepeatOutcome& res = outcomes[r];
    if (res.ok)
      std::printf("rep %zu: best y = %.6f (graph %d) after %zu evaluations\n", r,
                  res.record.best_y, res.record.best_id, res.record.rows.size());
  }
  return aggregate_outputs(o.label, o.out, outcomes, target,
                           {{"command", "baseline"},
                            {"pool", o.pool},
                            {"budget", std::to_string(o.budget)}});
}

struct ScalingOpts {
  std::vector<int> sizes = {100, 200, 400, 800};
  int pool_size = 860;
  std::uint64_t seed = 7;
  std::string out;
  int init_evals = 20;
  int samples = 10;
  int retrain_every = 20;
  int initial_epochs = 500;
  int retrain_epochs = 100;
};

int cmd_scaling(const ScalingOpts& o) {
  ScalingConfig sc;
  sc.checkpoints = o.sizes;
  sc.pool_size = o.pool_size;
  sc.pool_seed = o.seed;
  sc.base.init_evals = o.init_evals;
  sc.base.num_hyper_samples = o.samples;
  sc.base.retrain_every = o.retrain_every;
  sc.base.initial_epochs = o.initial_epochs;
  sc.base.retrain_epochs = o.retrain_epochs;
  ScalingResult res = scaling_harness(sc);

  fs::create_directories(o.out);
  const std::string csv_path = (fs::path(o.out) / "scaling.csv").string();
  {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + csv_path);
    out << "t,n_obs,t_select_ms,t_retrain_ms\n";
    char buf[64];
    for (const ScalingRow& r : res.rows) {
      std::snprintf(buf, sizeof(buf), "%d,%d,%.3f,%.3f\n", r.t, r.n_obs, r.select_ms,
                    r.retrain_ms);
      out << buf;
    }
  }
  const double slope = loglog_slope(res.checkpoint_cost);

  nlohmann::ordered_json j;
  j["format"] = "graphbo-scaling-v1";
  j["pool_size"] = o.pool_size;
  j["pool_seed"] = o.seed;
  j["init_evals"] = o.init_evals;
  j["num_hyper_samples"] = o.samples;
  j["retrain_every"] = o.retrain_every;
  j["initial_epochs"] = o.initial_epochs;
  j["retrain_epochs"] = o.retrain_epochs;
  nlohmann::ordered_json pts = nlohmann::ordered_json::array();
  for (const auto& [n, ms] : res.checkpoint_cost) pts.push_back({{"n_obs", n}, {"ms_per_iteration", ms}});
  j["checkpoints"] = pts;
  j["loglog_slope"] = slope;
  const std::string sum_path = (fs::path(o.out) / "scaling_summary.json").string();
  std::ofstream out(sum_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + sum_path);
  out << j.dump(2) << '\n';

  for (const auto& [n, ms] : res.checkpoint_cost)
    std::printf("n_obs %4.0f: %.2f ms/iteration\n", n, ms);
  std::printf("log-log slope: %.3f\n", slope);
  std::printf("rows: %s\nsummary: %s\n", csv_path.c_str(), sum_path.c_str());
  return 0;
}

struct ReportOpts {
  std::string runs;
  std::string out;
  double target = std::numeric_limits<double>::quiet_NaN();
};

int cmd_report(const ReportOpts& o) {
  const std::string out_dir = o.out.empty() ? o.runs : o.out;
  std::map<std::string, std::vector<RunRecord>> groups;
  for (const auto& entry : fs::directory_iterator(o.runs)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
    std::ifstream probe(entry.path());
    std::string header;
    if (!std::getline(probe, header) ||
        header != "t,graph_id,y,best_y,t_select_ms,t_eval_ms,t_retrain_ms")
      continue;
    std::string stem = entry.path().stem().string();
    const std::size_t pos = stem.rfind("_rep");
    const std::string label = pos == std::string::npos ? stem : stem.substr(0, pos);
    groups[label].push_back(read_record_csv(entry.path().string()));
  }
  if (groups.empty())
    throw std::runtime_error("no run CSVs found under " + o.runs);

  auto target_for = [&](const std::string& label) -> std::optional<double> {
    if (std::isfinite(o.target)) return o.target;
    const fs::path agg = fs::path(o.runs) / (label + "_aggregate.json");
    if (!fs::exists(agg)) return std::nullopt;
    std::ifstream in(agg);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.contains("target_y") || j["target_y"].is_null())
      return std::nullopt;
    return j["target_y"].get<double>();
  };

  fs::create_directories(out_dir);
  const std::string curves_path = (fs::path(out_dir) / "report_curves.csv").string();
  std::ofstream curves(curves_path, std::ios::binary);
  curves << "label,evals,mean_best_y,std_best_y,repeats\n";

  const std::string table_path = (fs::path(out_dir) / "report_table.csv").string();
  std::ofstream table(table_path, std::ios::binary);
  table << "label,repeats,evaluations,mean_best_y,std_best_y,mean_evals_to_target,"
           "std_evals_to_target,reached_fraction\n";

  std::printf("%-20s %8s %10s %14s %18s %10s\n", "label", "repeats", "evals", "mean best",
              "evals-to-target", "reached");
  for (const auto& [label, records] : groups) {
    std::vector<Trajectory> trajs;
    for (const RunRecord& r : records) trajs.push_back(trajectory_of(r));
    const std::vector<CurvePoint> curve = mean_curve(trajs);
    for (const CurvePoint& p : curve)
      curves << label << ',' << p.evals << ','
             << (std::isnan(p.mean) ? "nan" : format_double(p.mean)) << ','
             << (std::isnan(p.std) ? "nan" : format_double(p.std)) << ',' << p.count << '\n';

    double sum = 0.0, sq = 0.0;
    int n = 0;
    std::size_t evals = 0;
    for (const RunRecord& r : records) {
      evals = std::max(evals, r.rows.size());
      if (std::isfinite(r.best_y)) {
        sum += r.best_y;
        sq += r.best_y * r.best_y;
        ++n;
      }
    }
    const double mean = n > 0 ? sum / n : std::numeric_limits<double>::quiet_NaN();
    const double sd = n > 1 ? std::sqrt(std::max(0.0, sq / n - mean * mean)) : 0.0;

    const std::optional<double> tgt = target_for(label);
    std::string t_mean = "-", t_std = "-", t_frac = "-";
    if (tgt.has_value()) {
      std::vector<double> reach;
      for (const RunRecord& r : records) {
        const std::optional<int> e = evals_to_target(r, *tgt);
        if (e.has_value()) reach.push_back(static_cast<double>(*e));
      }
      if (!reach.empty()) {
        double s = 0.0, q = 0.0;
        for (double v : reach) {
          s += v;
          q += v * v;
        }
        const double m = s / reach.size();
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.1f", m);
        t_mean = buf;
        std::snprintf(buf, sizeof(buf), "%.1f",
                      reach.size() > 1 ? std::sqrt(std::max(0.0, q / reach.size() - m * m)) : 0.0);
        t_std = buf;
      }
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.2f",
                    records.empty() ? 0.0
                                    : static_cast<double>([&] {
                                        int c = 0;
                                        for (const RunRecord& r : records)
                                          if (evals_to_target(r, *tgt).has_value()) ++c;
                                        return c;
                                      }()) / records.size());
      t_frac = buf;
    }
    table << label << ',' << records.size() << ',' << evals << ','
          << (std::isnan(mean) ? "nan" : format_double(mean)) << ','
          << (std::isnan(sd) ? "nan" : format_double(sd)) << ',' << t_mean << ',' << t_std << ','
          << t_frac << '\n';
    std::printf("%-20s %8zu %10zu %9.4f±%-6.4f %10s±%-6s %10s\n", label.c_str(), records.size(),
                evals, mean, sd, t_mean.c_str(), t_std.c_str(), t_frac.c_str());
  }

  const std::string gp_path = (fs::path(out_dir) / "report_curves.gp").string();
  std::ofstream gp(gp_path, std::ios::binary);
  gp << "set datafile separator ','\n"
     << "set key bottom right\n"
     << "set xlabel 'evaluations'\n"
     << "set ylabel 'best objective value'\n"
     << "plot for [lbl in \"";
  bool first = true;
  for (const auto& [label, _] : groups) {
    if (!first) gp << ' ';
    gp << label;
    first = false;
  }
  gp << "\"] 'report_curves.csv' using 2:(strcol(1) eq lbl ? $3 : 1/0) with lines title lbl\n";

  std::printf("curves: %s\ntable: %s\nplot: %s\n", curves_path.c_str(), table_path.c_str(),
              gp_path.c_str());
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Bayesian optimization over pools of attributed graphs"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "key=value configuration file; one [section] per subcommand, given before "
                 "the subcommand name");

  GenPoolOpts gen;
  CLI::App* gen_cmd = app.add_subcommand("gen-pool", "generate a synthetic benchmark pool");
  gen_cmd->add_option("--size", gen.size, "number of graphs")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "generator seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "output JSONL path")->required();
  gen_cmd->add_option("--n-min", gen.n_min, "minimum node count")->capture_default_str();
  gen_cmd->add_option("--n-max", gen.n_max, "maximum node count")->capture_default_str();
  gen_cmd->add_option("--p-min", gen.p_min, "minimum edge probability")->capture_default_str();
  gen_cmd->add_option("--p-max", gen.p_max, "maximum edge probability")->capture_default_str();

  RunOpts run_o;
  CLI::App* run_cmd = app.add_subcommand("run", "optimize over a stored pool");
  run_cmd->add_option("--pool", run_o.pool, "pool JSONL path")->required();
  run_cmd->add_option("--situation", run_o.situation, "exposed attribute set: a, b, c or d")
      ->capture_default_str();
  run_cmd->add_option("--out", run_o.out, "output directory")->required();
  run_cmd->add_option("--label", run_o.label, "output file prefix")->capture_default_str();
  run_cmd->add_option("--repeats", run_o.repeats, "independent repeats")->capture_default_str();
  run_cmd->add_option("--seed", run_o.seed, "master seed (net/mcmc/selection derive from it)")
      ->capture_default_str();
  run_cmd->add_option("--max-iter", run_o.max_iter, "iterations after initialization; -1 exhausts the pool")
      ->capture_default_str();
  run_cmd->add_option("--init-evals", run_o.init_evals, "random initialization evaluations")
      ->capture_default_str();
  run_cmd->add_option("--samples", run_o.samples, "hyperparameter samples per iteration")
      ->capture_default_str();
  run_cmd->add_option("--retrain-every", run_o.retrain_every, "retraining period")
      ->capture_default_str();
  run_cmd->add_option("--candidate-budget", run_o.candidate_budget,
                      "candidates scored per iteration; -1 for the pool-size default")
      ->capture_default_str();
  run_cmd->add_option("--initial-epochs", run_o.initial_epochs, "epochs for the first fit")
      ->capture_default_str();
  run_cmd->add_option("--retrain-epochs", run_o.retrain_epochs, "epochs per retraining")
      ->capture_default_str();
  run_cmd->add_flag("--no-warm-start", run_o.no_warm_start,
                    "re-initialize the network at each retraining");
  run_cmd->add_flag("--stop-at-target", run_o.stop_at_target,
                    "stop when the sidecar's true optimum is reached");
  run_cmd->add_option("--target", run_o.target, "explicit target objective value");
  run_cmd->add_option("--lambda", run_o.lambda, "global-attribute switch (0 or 1)")
      ->capture_default_str();
  run_cmd->add_option("--gc-layers", run_o.gc_layers, "graph-convolution layers")
      ->capture_default_str();
  run_cmd->add_option("--fc-layers", run_o.fc_layers, "fully connected layers")
      ->capture_default_str();
  run_cmd->add_option("--gc-width", run_o.gc_width, "graph-convolution width")
      ->capture_default_str();
  run_cmd->add_option("--pool-width", run_o.pool_width, "pooling width")->capture_default_str();
  run_cmd->add_option("--fc-width", run_o.fc_width, "fully connected width")
      ->capture_default_str();
  run_cmd->add_option("--bases", run_o.bases, "basis matrices shared across relations")
      ->capture_default_str();
  run_cmd->add_option("--learning-rate", run_o.learning_rate, "Adam learning rate")
      ->capture_default_str();
  run_cmd->add_option("--dropout", run_o.dropout, "FC dropout probability")
      ->capture_default_str();
  run_cmd->add_option("--penalty", run_o.penalty, "L2 penalty on all parameters")
      ->capture_default_str();
  run_cmd->add_flag("--save-params", run_o.save_params, "write a parameter checkpoint per repeat");

  BaselineOpts base_o;
  CLI::App* base_cmd = app.add_subcommand("baseline", "uniform random search over a stored pool");
  base_cmd->add_option("--pool", base_o.pool, "pool JSONL path")->required();
  base_cmd->add_option("--out", base_o.out, "output directory")->required();
  base_cmd->add_option("--label", base_o.label, "output file prefix")->capture_default_str();
  base_cmd->add_option("--budget", base_o.budget, "evaluations per repeat")->capture_default_str();
  base_cmd->add_option("--repeats", base_o.repeats, "independent repeats")->capture_default_str();
  base_cmd->add_option("--seed", base_o.seed, "master seed")->capture_default_str();
  base_cmd->add_flag("--stop-at-target", base_o.stop_at_target,
                     "stop when the sidecar's true optimum is reached");
  base_cmd->add_option("--target", base_o.target, "explicit target objective value");

  ScalingOpts scal_o;
  CLI::App* scal_cmd = app.add_subcommand("scaling", "per-iteration cost against training-set size");
  scal_cmd->add_option("--sizes", scal_o.sizes, "observation-count checkpoints")
      ->delimiter(',')
      ->capture_default_str();
  scal_cmd->add_option("--pool-size", scal_o.pool_size, "synthetic pool size")
      ->capture_default_str();
  scal_cmd->add_option("--seed", scal_o.seed, "pool seed")->capture_default_str();
  scal_cmd->add_option("--out", scal_o.out, "output directory")->required();
  scal_cmd->add_option("--init-evals", scal_o.init_evals, "random initialization evaluations")
      ->capture_default_str();
  scal_cmd->add_option("--samples", scal_o.samples, "hyperparameter samples per iteration")
      ->capture_default_str();
  scal_cmd->add_option("--retrain-every", scal_o.retrain_every, "retraining period")
      ->capture_default_str();
  scal_cmd->add_option("--initial-epochs", scal_o.initial_epochs, "epochs for the first fit")
      ->capture_default_str();
  scal_cmd->add_option("--retrain-epochs", scal_o.retrain_epochs, "epochs per retraining")
      ->capture_default_str();

  ReportOpts rep_o;
  CLI::App* rep_cmd = app.add_subcommand("report", "summarize stored run records");
  rep_cmd->add_option("--runs", rep_o.runs, "directory holding run CSVs")->required();
  rep_cmd->add_option("--out", rep_o.out, "output directory (defaults to --runs)");
  rep_cmd->add_option("--target", rep_o.target, "objective value counted as the optimum");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen_pool(gen);
    if (run_cmd->parsed()) return cmd_run(run_o);
    if (base_cmd->parsed()) return cmd_baseline(base_o);
    if (scal_cmd->parsed()) return cmd_scaling(scal_o);
    if (rep_cmd->parsed()) return cmd_report(rep_o);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  std::fprintf(stderr, "no command given\n");
  return 1;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> full;
  full.push_back("graphbo");
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& s : full) argv.push_back(s.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace graphbo
