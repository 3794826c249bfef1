#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "graphbo/graph.hpp"
#include "graphbo/mat.hpp"
#include "graphbo/rng.hpp"

namespace graphbo {

// Relational GC stack -> attention pooling -> optional global-attribute
// concat -> FC stack -> linear training head. The basis features phi(G) (last
// FC activation plus a constant-1 entry) feed the Bayesian linear head.
struct SurrogateConfig {
  int num_gc_layers = 5;
  int num_fc_layers = 5;
  int gc_width = 48;
  int pool_width = 50;
  int fc_width = 45;
  Activation gc_activation = Activation::tanh;
  Activation pool_activation = Activation::identity;
  Activation fc_activation = Activation::tanh;
  double learning_rate = 1e-4;
  double dropout = 0.0;
  double penalty = 1e-5;  // coefficient on ||params||^2 in the training loss
  int num_bases = 4;
  int lambda_switch = 1;  // 0 or 1; 0 zero-pads the global-attribute block
  int num_relations = 1;  // D_E
  int input_dim = 0;      // D_V
  int global_dim = 0;     // D_G

  int basis_dim() const { return fc_width + 1; }
  int concat_dim() const { return pool_width + global_dim; }
  void check() const;
};

// Per-relation GC weights are mixed from shared bases: W_r = sum_b beta[r][b] * V_b.
struct GcLayer {
  std::vector<Mat> bases;  // B matrices, each in_width x out_width
  Mat beta;                // D_E x B
};

struct FcLayer {
  Mat w;  // in x out
  Mat b;  // 1 x out
};

struct SurrogateParams {
  std::vector<GcLayer> gc;
  Mat w_pool;  // gc_width x pool_width
  std::vector<FcLayer> fc;
  Mat head_w;  // fc_width x 1
  Mat head_b;  // 1 x 1
};

SurrogateParams make_params(const SurrogateConfig& cfg);  // zero-initialized shapes
SurrogateParams init_params(const SurrogateConfig& cfg, std::uint64_t seed);
void for_each_param(SurrogateParams& p, const std::function<void(const std::string&, Mat&)>& fn);
void for_each_param(const SurrogateParams& p,
                    const std::function<void(const std::string&, const Mat&)>& fn);
int param_count(const SurrogateParams& p);
bool params_finite(const SurrogateParams& p);
double params_sum_squares(const SurrogateParams& p);

std::vector<Mat> compose_relation_weights(const GcLayer& layer);

Mat gc_layer_forward(const Mat& h, const NormalizedAdjacency& adj, const GcLayer& layer,
                     Activation act);
Vec pooling_forward(const Mat& h, const Mat& w_pool, Activation act);
Vec prior_concat(const Vec& h_pool, const Vec& f_g, int lambda_switch, int global_dim);

enum class ForwardMode { train, predict };

struct GcTraceLayer {
  bool rank_one = false;   // input rows identical; layer reduced to outer products
  Mat out;                 // n x out activation
  std::vector<Mat> m_r;    // dense path: A_r * H_in per relation
  std::vector<Mat> w_r;    // composed relation weights
  Vec h_row;               // rank-1 path: the shared input row
  std::vector<Vec> s_r;    // rank-1 path: A_r row sums
};

struct PoolTrace {
  Mat s;     // row softmax output, n x pool_width
  Vec spre;  // column sums (pre-activation)
  Vec out;
};

struct FcTraceLayer {
  Vec out;      // post-activation
  Vec dropped;  // after inverted dropout (== out when dropout off)
  Vec mask;     // empty when no dropout was applied
};

struct ForwardTrace {
  std::vector<GcTraceLayer> gc;
  PoolTrace pool;
  Vec concat;
  std::vector<FcTraceLayer> fc;
};

struct ForwardResult {
  double yhat = 0.0;
  Vec phi;  // fc_width + 1, last entry 1.0
};

// mode=train records a trace (when given) and applies dropout via rng;
// mode=predict is deterministic and never mutates parameters.
ForwardResult forward(const Mat& node_features, const Vec& global_attributes,
                      const NormalizedAdjacency& adj, const SurrogateParams& params,
                      const SurrogateConfig& cfg, ForwardMode mode,
                      ForwardTrace* trace = nullptr, Rng* dropout_rng = nullptr);
ForwardResult forward(const AttributedGraph& g, const SurrogateParams& params,
                      const SurrogateConfig& cfg, ForwardMode mode);

struct TrainDataset {
  std::vector<const AttributedGraph*> graphs;
  std::vector<const NormalizedAdjacency*> adj;
  Vec targets;  // standardized upstream
};

double loss(const TrainDataset& ds, const SurrogateParams& params, const SurrogateConfig& cfg);

// gradient of (yhat - y)^2 for one traced sample, accumulated into grads
void backward_accumulate(const ForwardTrace& trace, const Mat& node_features,
                         const NormalizedAdjacency& adj, const SurrogateParams& params,
                         const SurrogateConfig& cfg, double dyhat, SurrogateParams& grads);

struct TrainResult {
  double initial_loss = 0.0;
  double final_loss = 0.0;
  bool reverted = false;  // pathological case: training ended above the initial loss
};

// Full-batch Adam for `epochs` steps. Targets must already be standardized.
// Aborts with diagnostics if the loss goes non-finite.
TrainResult train(const TrainDataset& ds, SurrogateParams& params, const SurrogateConfig& cfg,
                  int epochs, std::uint64_t seed);

// JSON checkpoint of named arrays; doubles printed with 17 significant digits
// so values round-trip bitwise.
void save_params_json(const SurrogateParams& params, const std::string& path);
SurrogateParams load_params_json(const SurrogateConfig& cfg, const std::string& path);

}  // namespace graphbo
