#include "graphbo/bo_loop.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "graphbo/blr.hpp"
#include "graphbo/pool_io.hpp"
#include "graphbo/rng.hpp"

namespace graphbo {

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

struct Standardization {
  double mean = 0.0;
  double std = 1.0;
};

Standardization standardize_stats(const Vec& ys) {
  Standardization s;
  if (ys.empty()) throw std::runtime_error("cannot standardize an empty target set");
  double sum = 0.0;
  for (double y : ys) sum += y;
  s.mean = sum / static_cast<double>(ys.size());
  double sq = 0.0;
  for (double y : ys) sq += (y - s.mean) * (y - s.mean);
  s.std = std::sqrt(sq / static_cast<double>(ys.size()));
  if (s.std < 1e-12) s.std = 1.0;
  return s;
}

}  // namespace

void ExperimentConfig::check(int pool_size) const {
  if (init_evals < 2) throw std::invalid_argument("init_evals must be at least 2");
  if (max_iter < -1) throw std::invalid_argument("max_iter must be -1 (exhaust) or >= 0");
  if (num_hyper_samples < 1) throw std::invalid_argument("num_hyper_samples must be at least 1");
  if (retrain_every < 1) throw std::invalid_argument("retrain_every must be at least 1");
  if (initial_epochs < 1 || retrain_epochs < 0)
    throw std::invalid_argument("epoch counts must be positive");
  if (pool_size <= init_evals)
    throw std::invalid_argument("pool size must exceed init_evals (" +
                                std::to_string(pool_size) + " <= " + std::to_string(init_evals) + ")");
  if (candidate_budget != -1 && candidate_budget < 1)
    throw std::invalid_argument("candidate_budget must be -1 or >= 1");
  surrogate.check();
}

RunRecord run(ObjectiveFunction& objective, const GraphPool& pool, const ExperimentConfig& cfg,
              const RunHooks* hooks, RunArtifacts* artifacts) {
  const int pool_size = static_cast<int>(pool.graphs.size());
  cfg.check(pool_size);
  validate(pool);
  if (pool.node_feature_dim != cfg.surrogate.input_dim)
    throw std::invalid_argument("surrogate input_dim does not match pool node feature dim");
  if (pool.num_relations != cfg.surrogate.num_relations)
    throw std::invalid_argument("surrogate num_relations does not match pool");
  if (cfg.surrogate.lambda_switch == 1 && pool.global_dim != cfg.surrogate.global_dim)
    throw std::invalid_argument("surrogate global_dim does not match pool");

  std::vector<NormalizedAdjacency> adj(pool_size);
  for (int i = 0; i < pool_size; ++i)
    adj[i] = normalized_adjacency(pool.graphs[i], pool.num_relations);

  const int max_iter = cfg.max_iter >= 0 ? cfg.max_iter : pool_size - cfg.init_evals;
  const int budget = cfg.candidate_budget > 0 ? cfg.candidate_budget
                                              : default_candidate_budget(pool_size);

  Rng sel_rng(seed_mix(cfg.seeds.selection, 0x5e1ec7ULL));

  RunRecord record;
  record.best_y = std::numeric_limits<double>::quiet_NaN();
  std::vector<bool> evaluated(pool_size, false);
  std::vector<int> obs_idx;   // successful evaluations, in order
  Vec obs_y;                  // raw objective values for obs_idx
  int evaluations = 0;

  auto evaluate_at = [&](int idx, int t, double select_ms) {
    const AttributedGraph& g = pool.graphs[idx];
    EvalRow row;
    row.t = t;
    row.graph_id = g.id;
    row.t_select_ms = select_ms;
    const double t0 = now_ms();
    double y = std::numeric_limits<double>::quiet_NaN();
    try {
      y = objective.evaluate(g);
    } catch (const std::exception&) {
      y = std::numeric_limits<double>::quiet_NaN();
    }
    row.t_eval_ms = now_ms() - t0;
    evaluated[idx] = true;
    ++evaluations;
    if (std::isfinite(y)) {
      obs_idx.push_back(idx);
      obs_y.push_back(y);
      if (!(record.best_y >= y)) {  // also true when best is NaN
        record.best_y = y;
        record.best_id = g.id;
      }
      row.y = y;
    } else {
      row.y = std::numeric_limits<double>::quiet_NaN();
      row.failed = true;
    }
    row.best_y = record.best_y;
    record.rows.push_back(row);
  };

  auto target_reached = [&]() {
    return cfg.target_y.has_value() && std::isfinite(record.best_y) &&
           record.best_y >= *cfg.target_y - 1e-12;
  };

  // Initialization block: M distinct graphs drawn uniformly.
  std::vector<int> init = sel_rng.sample_without_replacement(pool_size, cfg.init_evals);
  for (int idx : init) evaluate_at(idx, 0, 0.0);

  if (obs_idx.empty())
    throw std::runtime_error("all initialization evaluations failed; nothing to fit");

  Standardization st = standardize_stats(obs_y);
  auto std_targets = [&]() {
    Vec t(obs_y.size());
    for (std::size_t i = 0; i < obs_y.size(); ++i) t[i] = (obs_y[i] - st.mean) / st.std;
    return t;
  };

  SurrogateParams params = init_params(cfg.surrogate, seed_mix(cfg.seeds.net, 0));
  int train_calls = 0;
  auto fit_net = [&](int epochs) {
    TrainDataset ds;
    ds.targets = std_targets();
    for (int idx : obs_idx) {
      ds.graphs.push_back(&pool.graphs[idx]);
      ds.adj.push_back(&adj[idx]);
    }
    ++train_calls;
    train(ds, params, cfg.surrogate, epochs, seed_mix(cfg.seeds.net, 0x7a11ULL, train_calls));
  };

  // Basis-feature cache, invalidated whenever the net parameters change.
  std::vector<Vec> phi_cache(pool_size);
  std::vector<char> phi_valid(pool_size, 0);
  auto invalidate_phi = [&]() { std::fill(phi_valid.begin(), phi_valid.end(), 0); };
  auto phi_of = [&](int idx) -> const Vec& {
    if (!phi_valid[idx]) {
      const AttributedGraph& g = pool.graphs[idx];
      ForwardResult fr = forward(g.node_features, g.global_attributes, adj[idx], params,
                                 cfg.surrogate, ForwardMode::predict);
      phi_cache[idx] = std::move(fr.phi);
      phi_valid[idx] = 1;
    }
    return phi_cache[idx];
  };

  HyperSampleSet samples;
  auto finalize = [&](const char* reason) {
    record.termination = reason;
    if (artifacts) {
      artifacts->params = params;
      artifacts->eval_order = obs_idx;
      artifacts->y_std = std_targets();
      artifacts->thetas.clear();
      for (const HyperSample& s : samples.samples) artifacts->thetas.push_back(s.theta);
    }
    return record;
  };

  if (target_reached()) return finalize("target_reached");
  if (max_iter == 0) return finalize("max_iter");

  fit_net(cfg.initial_epochs);

  for (int t = 1; t <= max_iter; ++t) {
    if (evaluations >= pool_size) return finalize("pool_exhausted");

    const double t_sel0 = now_ms();
    // Hyperparameters are resampled from scratch every iteration.
    Mat phi_rows(static_cast<int>(obs_idx.size()), cfg.surrogate.basis_dim());
    {
      Vec ty = std_targets();
      for (std::size_t i = 0; i < obs_idx.size(); ++i) {
        const Vec& p = phi_of(obs_idx[i]);
        std::copy(p.begin(), p.end(), phi_rows.row(static_cast<int>(i)));
      }
      DesignStats stats = design_stats(phi_rows, ty);
      samples = sample_posterior(stats, cfg.num_hyper_samples,
                                 seed_mix(cfg.seeds.mcmc, static_cast<std::uint64_t>(t)),
                                 cfg.prior, cfg.mcmc);
    }
    if (hooks && hooks->on_resample) hooks->on_resample(t);

    const double y_max_std = (record.best_y - st.mean) / st.std;
    SelectionResult sel = select_next(pool, evaluated, phi_of, samples, y_max_std, budget, sel_rng);
    const double select_ms = now_ms() - t_sel0;
    if (hooks && hooks->on_select) hooks->on_select(t, sel.scored);

    evaluate_at(sel.pool_index, t, select_ms);

    if (t % cfg.retrain_every == 0) {
      const double t_re0 = now_ms();
      st = standardize_stats(obs_y);
      if (!cfg.warm_start)
        params = init_params(cfg.surrogate, seed_mix(cfg.seeds.net, 0xc01dULL, t));
      fit_net(cfg.retrain_epochs);
      invalidate_phi();
      record.rows.back().t_retrain_ms = now_ms() - t_re0;
      if (hooks && hooks->on_retrain) hooks->on_retrain(t);
    }

    if (target_reached()) return finalize("target_reached");
  }
  if (evaluations >= pool_size) return finalize("pool_exhausted");
  return finalize("max_iter");
}

RunRecord random_baseline(ObjectiveFunction& objective, const GraphPool& pool, int budget,
                          std::uint64_t seed, std::optional<double> target_y) {
  const int pool_size = static_cast<int>(pool.graphs.size());
  if (budget < 1) throw std::invalid_argument("baseline budget must be at least 1");
  if (budget > pool_size) budget = pool_size;
  Rng rng(seed_mix(seed, 0xba5e11e5ULL));
  std::vector<int> order = rng.sample_without_replacement(pool_size, budget);

  RunRecord record;
  record.best_y = std::numeric_limits<double>::quiet_NaN();
  int t = 0;
  for (int idx : order) {
    const AttributedGraph& g = pool.graphs[idx];
    EvalRow row;
    row.t = ++t;
    row.graph_id = g.id;
    const double t0 = now_ms();
    double y = std::numeric_limits<double>::quiet_NaN();
    try {
      y = objective.evaluate(g);
    } catch (const std::exception&) {
      y = std::numeric_limits<double>::quiet_NaN();
    }
    row.t_eval_ms = now_ms() - t0;
    if (std::isfinite(y)) {
      if (!(record.best_y >= y)) {
        record.best_y = y;
        record.best_id = g.id;
      }
      row.y = y;
    } else {
      row.y = std::numeric_limits<double>::quiet_NaN();
      row.failed = true;
    }
    row.best_y = record.best_y;
    record.rows.push_back(row);
    if (target_y.has_value() && std::isfinite(record.best_y) &&
        record.best_y >= *target_y - 1e-12) {
      record.termination = "target_reached";
      return record;
    }
  }
  record.termination = budget == pool_size ? "pool_exhausted" : "max_iter";
  return record;
}

namespace {

std::string csv_double(double v) {
  if (std::isnan(v)) return "nan";
  return format_double(v);
}

std::string csv_ms(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

std::string record_csv(const RunRecord& record) {
  std::ostringstream out;
  out << "t,graph_id,y,best_y,t_select_ms,t_eval_ms,t_retrain_ms\n";
  for (const EvalRow& r : record.rows) {
    out << r.t << ',' << r.graph_id << ',' << csv_double(r.y) << ',' << csv_double(r.best_y)
        << ',' << csv_ms(r.t_select_ms) << ',' << csv_ms(r.t_eval_ms) << ','
        << csv_ms(r.t_retrain_ms) << '\n';
  }
  return out.str();
}

void write_record_csv(const RunRecord& record, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << record_csv(record);
  if (!out) throw std::runtime_error("write failed: " + path);
}

RunRecord read_record_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty record file: " + path);
  if (line != "t,graph_id,y,best_y,t_select_ms,t_eval_ms,t_retrain_ms")
    throw std::runtime_error("unexpected CSV header in " + path + ": " + line);
  RunRecord record;
  record.best_y = std::numeric_limits<double>::quiet_NaN();
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 7)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 7 fields");
    EvalRow r;
    r.t = std::stoi(fields[0]);
    r.graph_id = std::stoi(fields[1]);
    r.y = fields[2] == "nan" ? std::numeric_limits<double>::quiet_NaN() : std::stod(fields[2]);
    r.best_y = fields[3] == "nan" ? std::numeric_limits<double>::quiet_NaN() : std::stod(fields[3]);
    r.failed = std::isnan(r.y);
    r.t_select_ms = std::stod(fields[4]);
    r.t_eval_ms = std::stod(fields[5]);
    r.t_retrain_ms = std::stod(fields[6]);
    record.rows.push_back(r);
    if (std::isfinite(r.best_y) && !(record.best_y >= r.best_y)) {
      record.best_y = r.best_y;
      record.best_id = r.graph_id;
    }
  }
  if (!record.rows.empty()) {
    record.best_y = record.rows.back().best_y;
  }
  return record;
}

void write_run_summary_json(const RunRecord& record, const ExperimentConfig& cfg,
                            const std::string& objective_tag,
                            const std::map<std::string, std::string>& extra,
                            const std::string& path) {
  nlohmann::ordered_json j;
  j["format"] = "graphbo-run-v1";
  j["objective"] = objective_tag;
  j["evaluations"] = record.rows.size();
  j["best_id"] = record.best_id;
  if (std::isnan(record.best_y))
    j["best_y"] = nullptr;
  else
    j["best_y"] = record.best_y;
  j["termination"] = record.termination;

  nlohmann::ordered_json c;
  c["init_evals"] = cfg.init_evals;
  c["max_iter"] = cfg.max_iter;
  c["num_hyper_samples"] = cfg.num_hyper_samples;
  c["retrain_every"] = cfg.retrain_every;
  c["candidate_budget"] = cfg.candidate_budget;
  c["initial_epochs"] = cfg.initial_epochs;
  c["retrain_epochs"] = cfg.retrain_epochs;
  c["warm_start"] = cfg.warm_start;
  if (cfg.target_y.has_value())
    c["target_y"] = *cfg.target_y;
  else
    c["target_y"] = nullptr;
  c["seeds"] = {{"pool", cfg.seeds.pool},
                {"net", cfg.seeds.net},
                {"mcmc", cfg.seeds.mcmc},
                {"selection", cfg.seeds.selection}};
  const SurrogateConfig& s = cfg.surrogate;
  c["surrogate"] = {{"input_dim", s.input_dim},
                    {"num_relations", s.num_relations},
                    {"global_dim", s.global_dim},
                    {"lambda_switch", s.lambda_switch},
                    {"num_gc_layers", s.num_gc_layers},
                    {"gc_width", s.gc_width},
                    {"num_bases", s.num_bases},
                    {"pool_width", s.pool_width},
                    {"num_fc_layers", s.num_fc_layers},
                    {"fc_width", s.fc_width},
                    {"gc_activation", activation_name(s.gc_activation)},
                    {"pool_activation", activation_name(s.pool_activation)},
                    {"fc_activation", activation_name(s.fc_activation)},
                    {"learning_rate", s.learning_rate},
                    {"dropout", s.dropout},
                    {"penalty", s.penalty}};
  c["mcmc"] = {{"walkers", cfg.mcmc.walkers},
               {"stretch", cfg.mcmc.stretch},
               {"burn_in_sweeps", cfg.mcmc.burn_in_sweeps},
               {"thin_sweeps", cfg.mcmc.thin_sweeps}};
  c["prior"] = {{"lognormal_mean", cfg.prior.lognormal_mean},
                {"lognormal_std", cfg.prior.lognormal_std},
                {"horseshoe_scale", cfg.prior.horseshoe_scale}};
  j["config"] = c;
  for (const auto& [k, v] : extra) j[k] = v;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace graphbo
