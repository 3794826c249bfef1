#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "graphbo/acquisition.hpp"
#include "graphbo/graph.hpp"
#include "graphbo/mcmc.hpp"
#include "graphbo/surrogate.hpp"

namespace graphbo {

// A black-box measure over graphs. Implementations must be deterministic
// given (graph, their own evaluation seed); a NaN return or a thrown
// exception marks the evaluation as failed.
struct ObjectiveFunction {
  virtual ~ObjectiveFunction() = default;
  virtual double evaluate(const AttributedGraph& g) = 0;
  virtual std::string cost_tag() const { return "unit"; }
};

struct SeedBundle {
  std::uint64_t pool = 0;  // echoed in outputs; the pool itself is built upstream
  std::uint64_t net = 1;
  std::uint64_t mcmc = 2;
  std::uint64_t selection = 3;
};

struct ExperimentConfig {
  int init_evals = 20;        // M
  int max_iter = -1;          // -1: run until the pool is exhausted
  int num_hyper_samples = 10; // S
  int retrain_every = 20;     // Re
  int candidate_budget = -1;  // -1: default_candidate_budget(pool size)
  int initial_epochs = 2000;
  int retrain_epochs = 500;
  bool warm_start = true;     // false: re-initialize the net at each retrain
  std::optional<double> target_y;  // stop once the incumbent reaches this
  SeedBundle seeds;
  SurrogateConfig surrogate;
  PriorSpec prior;
  McmcConfig mcmc;

  void check(int pool_size) const;
};

struct EvalRow {
  int t = 0;  // 0 for initialization evaluations, then 1..MaxIter
  int graph_id = -1;
  double y = 0.0;       // NaN for failed evaluations
  double best_y = 0.0;  // incumbent (NaN until the first success)
  bool failed = false;
  double t_select_ms = 0.0;
  double t_eval_ms = 0.0;
  double t_retrain_ms = 0.0;
};

struct RunRecord {
  std::vector<EvalRow> rows;
  int best_id = -1;
  double best_y = 0.0;  // NaN if no evaluation succeeded
  std::string termination = "max_iter";  // or "pool_exhausted" / "target_reached"
};

// Optional instrumentation; every callback may be empty.
struct RunHooks {
  std::function<void(int)> on_resample;           // iteration index
  std::function<void(int)> on_retrain;            // iteration index
  std::function<void(int, int)> on_select;        // iteration index, candidates scored
};

// Final-state byproducts for checkpointing and scaling analysis.
struct RunArtifacts {
  SurrogateParams params;
  std::vector<int> eval_order;  // pool indices in evaluation order (successes only)
  Vec y_std;                    // standardized targets for eval_order
  std::vector<BLRHyper> thetas; // hyperparameter samples from the last resample
};

RunRecord run(ObjectiveFunction& objective, const GraphPool& pool, const ExperimentConfig& cfg,
              const RunHooks* hooks = nullptr, RunArtifacts* artifacts = nullptr);

RunRecord random_baseline(ObjectiveFunction& objective, const GraphPool& pool, int budget,
                          std::uint64_t seed, std::optional<double> target_y = std::nullopt);

// CSV schema (stable): t,graph_id,y,best_y,t_select_ms,t_eval_ms,t_retrain_ms.
// Data columns use shortest round-trip formatting; the three wall-time
// columns are explicitly excluded from determinism guarantees.
std::string record_csv(const RunRecord& record);
void write_record_csv(const RunRecord& record, const std::string& path);
RunRecord read_record_csv(const std::string& path);

void write_run_summary_json(const RunRecord& record, const ExperimentConfig& cfg,
                            const std::string& objective_tag,
                            const std::map<std::string, std::string>& extra,
                            const std::string& path);

}  // namespace graphbo
