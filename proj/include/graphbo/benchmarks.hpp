#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "graphbo/bo_loop.hpp"
#include "graphbo/graph.hpp"
#include "graphbo/mat.hpp"

namespace graphbo {

// Erdos-Renyi pool: per graph, |V| ~ U{n_min..n_max} and edge probability
// p ~ U[p_min, p_max]. Node features are shared one-hot identity rows (every
// row of graph i equals e_i, so D_V = pool size). Six global attributes per
// graph, min-max normalized over the pool.
struct SyntheticSpec {
  int pool_size = 500;
  int n_min = 20;
  int n_max = 60;
  double p_min = 0.10;
  double p_max = 0.26;
  std::uint64_t seed = 0;
};

struct PoolBuild {
  GraphPool pool;  // graphs carry all six normalized attributes
  Mat attributes_raw;  // pool_size x 6, pre-normalization
  std::vector<std::pair<double, double>> ranges;  // per-column (min, max)
  int optimum_id = -1;
  double optimum_y = 0.0;
  int retries_used = 0;
  SyntheticSpec spec;
};

// Retries the whole pool (fresh seed stream per retry, at most 10) when an
// attribute column comes out constant.
PoolBuild generate_pool(const SyntheticSpec& spec);

struct Hartmann4Constants {
  std::array<double, 4> alpha;
  std::array<std::array<double, 4>, 4> a;
  std::array<std::array<double, 4>, 4> p;
};
const Hartmann4Constants& hartmann4_constants();
Hartmann4Constants load_hartmann4_constants(const std::string& path);

// Inputs outside [0,1]^4 are clamped (with a one-line stderr warning).
double hartmann4(const std::array<double, 4>& x);
double hartmann4(const Hartmann4Constants& c, const std::array<double, 4>& x);

// Which of the six normalized attributes each situation exposes to the
// surrogate as F_G. The objective is the same in all four: the negated
// Hartmann-4 value of the first four normalized attributes, so (b) and (d)
// leave part or all of the objective's inputs hidden.
enum class Situation { a, b, c, d };
Situation situation_from_string(const std::string& s);
const char* situation_name(Situation s);
std::vector<int> situation_columns(Situation s);  // 0-based indices into x1..x6

// Pool with global attributes restricted to the situation's columns. The
// input pool must carry all six.
GraphPool apply_situation(const GraphPool& pool, Situation s);

// Objective over a pool file's graphs: y(G) = -hartmann4(x1..x4 of G), looked
// up by graph id from the stored normalized attributes.
class SyntheticObjective : public ObjectiveFunction {
 public:
  explicit SyntheticObjective(const GraphPool& pool_with_all_six);
  double evaluate(const AttributedGraph& g) override;
  std::string cost_tag() const override { return "hartmann4"; }

 private:
  std::vector<int> ids_;
  std::vector<std::array<double, 4>> inputs_;
};

// Scan the pool for the true optimum of the synthetic objective.
std::pair<int, double> pool_optimum(const GraphPool& pool_with_all_six);

// Pool sidecar metadata: generation parameters, normalization ranges, true
// optimum. Enough to replay or verify a stored pool.
struct PoolSidecar {
  SyntheticSpec spec;
  std::vector<std::pair<double, double>> ranges;
  int optimum_id = -1;
  double optimum_y = 0.0;
  int retries_used = 0;
};
void write_pool_sidecar(const PoolBuild& build, const std::string& path);
PoolSidecar read_pool_sidecar(const std::string& path);

// Per-iteration cost rows for the observation-count scaling study.
struct ScalingRow {
  int t = 0;
  int n_obs = 0;         // training-set size when iteration t ran
  double select_ms = 0;  // resample + acquisition argmax
  double retrain_ms = 0; // zero off the retrain cadence
};

struct ScalingConfig {
  std::vector<int> checkpoints = {100, 200, 400, 800};
  int pool_size = 860;
  std::uint64_t pool_seed = 7;
  ExperimentConfig base;  // max_iter is overridden to reach the last checkpoint
};

struct ScalingResult {
  std::vector<ScalingRow> rows;
  Mat phi_all;            // pool_size x basis_dim, from the final parameters
  std::vector<int> eval_order;  // pool indices of successful evaluations
  Vec y_std;
  std::vector<BLRHyper> thetas;  // final hyperparameter draws
  std::vector<std::pair<double, double>> checkpoint_cost;  // (n_obs, ms/iteration)
};

// Runs one long optimization on an enlarged pool and reports the median
// per-iteration selection cost (with retraining amortized over its cadence)
// at each checkpoint.
ScalingResult scaling_harness(const ScalingConfig& cfg);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<std::pair<double, double>>& pts);

}  // namespace graphbo
