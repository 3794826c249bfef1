#include "graphbo/surrogate.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "graphbo/kernels.hpp"

namespace graphbo {

namespace {
using kernels::active;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }
}  // namespace

void SurrogateConfig::check() const {
  if (num_gc_layers < 1 || num_fc_layers < 1) fail("config: need at least one GC and one FC layer");
  if (gc_width < 1 || pool_width < 1 || fc_width < 1) fail("config: widths must be >= 1");
  if (num_bases < 1) fail("config: num_bases must be >= 1");
  if (!(learning_rate > 0.0)) fail("config: learning_rate must be positive");
  if (!(dropout >= 0.0 && dropout <= 1.0)) fail("config: dropout must be in [0,1]");
  if (penalty < 0.0) fail("config: penalty must be >= 0");
  if (lambda_switch != 0 && lambda_switch != 1) fail("config: lambda_switch must be 0 or 1");
  if (num_relations < 1) fail("config: num_relations must be >= 1");
  if (input_dim < 1) fail("config: input_dim must be >= 1");
  if (global_dim < 0) fail("config: global_dim must be >= 0");
}

SurrogateParams make_params(const SurrogateConfig& cfg) {
  cfg.check();
  SurrogateParams p;
  p.gc.resize(static_cast<std::size_t>(cfg.num_gc_layers));
  for (int l = 0; l < cfg.num_gc_layers; ++l) {
    const int in = l == 0 ? cfg.input_dim : cfg.gc_width;
    GcLayer& layer = p.gc[static_cast<std::size_t>(l)];
    layer.bases.assign(static_cast<std::size_t>(cfg.num_bases), Mat(in, cfg.gc_width));
    layer.beta = Mat(cfg.num_relations, cfg.num_bases);
  }
  p.w_pool = Mat(cfg.gc_width, cfg.pool_width);
  p.fc.resize(static_cast<std::size_t>(cfg.num_fc_layers));
  for (int l = 0; l < cfg.num_fc_layers; ++l) {
    const int in = l == 0 ? cfg.concat_dim() : cfg.fc_width;
    p.fc[static_cast<std::size_t>(l)] = {Mat(in, cfg.fc_width), Mat(1, cfg.fc_width)};
  }
  p.head_w = Mat(cfg.fc_width, 1);
  p.head_b = Mat(1, 1);
  return p;
}

namespace {

void glorot_fill(Mat& m, int fan_in, int fan_out, Rng& rng) {
  const double a = std::sqrt(6.0 / (fan_in + fan_out));
  for (double& v : m.data) v = rng.uniform(-a, a);
}

}  // namespace

SurrogateParams init_params(const SurrogateConfig& cfg, std::uint64_t seed) {
  SurrogateParams p = make_params(cfg);
  Rng rng(seed);
  for (GcLayer& layer : p.gc) {
    for (Mat& v : layer.bases) glorot_fill(v, v.rows, v.cols, rng);
    glorot_fill(layer.beta, layer.beta.rows, layer.beta.cols, rng);
  }
  glorot_fill(p.w_pool, p.w_pool.rows, p.w_pool.cols, rng);
  for (FcLayer& f : p.fc) glorot_fill(f.w, f.w.rows, f.w.cols, rng);
  glorot_fill(p.head_w, p.head_w.rows, p.head_w.cols, rng);
  return p;
}

void for_each_param(SurrogateParams& p, const std::function<void(const std::string&, Mat&)>& fn) {
  for (std::size_t l = 0; l < p.gc.size(); ++l) {
    for (std::size_t b = 0; b < p.gc[l].bases.size(); ++b)
      fn("gc" + std::to_string(l) + ".v" + std::to_string(b), p.gc[l].bases[b]);
    fn("gc" + std::to_string(l) + ".beta", p.gc[l].beta);
  }
  fn("pool.w", p.w_pool);
  for (std::size_t l = 0; l < p.fc.size(); ++l) {
    fn("fc" + std::to_string(l) + ".w", p.fc[l].w);
    fn("fc" + std::to_string(l) + ".b", p.fc[l].b);
  }
  fn("head.w", p.head_w);
  fn("head.b", p.head_b);
}

void for_each_param(const SurrogateParams& p,
                    const std::function<void(const std::string&, const Mat&)>& fn) {
  for_each_param(const_cast<SurrogateParams&>(p),
                 [&](const std::string& name, Mat& m) { fn(name, m); });
}

int param_count(const SurrogateParams& p) {
  int n = 0;
  for_each_param(p, [&](const std::string&, const Mat& m) { n += m.size(); });
  return n;
}

bool params_finite(const SurrogateParams& p) {
  bool ok = true;
  for_each_param(p, [&](const std::string&, const Mat& m) { ok = ok && m.all_finite(); });
  return ok;
}

double params_sum_squares(const SurrogateParams& p) {
  double s = 0.0;
  for_each_param(p, [&](const std::string&, const Mat& m) { s += sum_squares(m); });
  return s;
}

std::vector<Mat> compose_relation_weights(const GcLayer& layer) {
  const int r_count = layer.beta.rows;
  const int b_count = layer.beta.cols;
  std::vector<Mat> out;
  out.reserve(static_cast<std::size_t>(r_count));
  for (int r = 0; r < r_count; ++r) {
    Mat w(layer.bases[0].rows, layer.bases[0].cols);
    for (int b = 0; b < b_count; ++b)
      axpy(layer.beta.at(r, b), layer.bases[static_cast<std::size_t>(b)], w);
    out.push_back(std::move(w));
  }
  return out;
}

namespace {

bool rows_identical(const Mat& h) {
  const std::size_t bytes = sizeof(double) * static_cast<std::size_t>(h.cols);
  for (int i = 1; i < h.rows; ++i)
    if (std::memcmp(h.row(0), h.row(i), bytes) != 0) return false;
  return true;
}

// index of the single nonzero entry, or -1
int single_nonzero_index(const double* x, int n) {
  int idx = -1;
  for (int i = 0; i < n; ++i)
    if (x[i] != 0.0) {
      if (idx >= 0) return -1;
      idx = i;
    }
  return idx;
}

// t = row^T W for a 1 x in row; exploits a single-nonzero row when present
void row_times(const Vec& row, const Mat& w, Vec& t) {
  t.assign(static_cast<std::size_t>(w.cols), 0.0);
  const int nz = single_nonzero_index(row.data(), static_cast<int>(row.size()));
  if (nz >= 0) {
    active().axpy(w.cols, row[static_cast<std::size_t>(nz)], w.row(nz), t.data());
  } else {
    active().matmul_nn(1, static_cast<int>(row.size()), w.cols, row.data(), w.ptr(), t.data());
  }
}

// Shared GC layer forward. When the input rows are all identical (one-hot
// per-graph features make every row the same), A_r * H is rank one and the
// layer collapses to outer products; that path is only taken for the first
// layer, where no input gradient is needed.
Mat gc_forward_layer(const Mat& h, const NormalizedAdjacency& adj, const GcLayer& layer,
                     Activation act, bool allow_rank_one, GcTraceLayer* tr) {
  const int n = h.rows;
  const int dout = layer.bases[0].cols;
  const int r_count = layer.beta.rows;
  std::vector<Mat> w = compose_relation_weights(layer);
  Mat z(n, dout);
  const bool rank_one = allow_rank_one && rows_identical(h);
  if (rank_one) {
    Vec hrow(h.row(0), h.row(0) + h.cols);
    std::vector<Vec> s_list;
    s_list.reserve(static_cast<std::size_t>(r_count));
    Vec t;
    for (int r = 0; r < r_count; ++r) {
      row_times(hrow, w[static_cast<std::size_t>(r)], t);
      Vec s(static_cast<std::size_t>(n));
      const Mat& a = adj.rel[static_cast<std::size_t>(r)];
      for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = active().sum(n, a.row(i));
      for (int i = 0; i < n; ++i)
        active().axpy(dout, s[static_cast<std::size_t>(i)], t.data(), z.row(i));
      s_list.push_back(std::move(s));
    }
    if (tr) {
      tr->rank_one = true;
      tr->h_row = std::move(hrow);
      tr->s_r = std::move(s_list);
      tr->w_r = std::move(w);
    }
  } else {
    std::vector<Mat> m_list;
    if (tr) m_list.reserve(static_cast<std::size_t>(r_count));
    for (int r = 0; r < r_count; ++r) {
      Mat m = matmul(adj.rel[static_cast<std::size_t>(r)], h);
      active().matmul_nn_acc(n, h.cols, dout, m.ptr(), w[static_cast<std::size_t>(r)].ptr(),
                             z.ptr());
      if (tr) m_list.push_back(std::move(m));
    }
    if (tr) {
      tr->rank_one = false;
      tr->m_r = std::move(m_list);
      tr->w_r = std::move(w);
    }
  }
  Mat out(n, dout);
  activation_eval(act, z.size(), z.ptr(), out.ptr());
  if (tr) tr->out = out;
  return out;
}

Vec pooling_forward_impl(const Mat& h, const Mat& w_pool, Activation act, PoolTrace* tr) {
  if (h.cols != w_pool.rows) fail("pooling_forward: shape mismatch");
  const Mat z = matmul(h, w_pool);
  Mat s = row_softmax(z);
  const int p = w_pool.cols;
  Vec spre(static_cast<std::size_t>(p), 0.0);
  for (int i = 0; i < s.rows; ++i) active().axpy(p, 1.0, s.row(i), spre.data());
  Vec out(static_cast<std::size_t>(p));
  activation_eval(act, p, spre.data(), out.data());
  if (tr) {
    tr->s = std::move(s);
    tr->spre = std::move(spre);
    tr->out = out;
  }
  return out;
}

}  // namespace

Mat gc_layer_forward(const Mat& h, const NormalizedAdjacency& adj, const GcLayer& layer,
                     Activation act) {
  if (adj.rel.size() != static_cast<std::size_t>(layer.beta.rows))
    fail("gc_layer_forward: relation count mismatch");
  if (h.cols != layer.bases[0].rows) fail("gc_layer_forward: input width mismatch");
  return gc_forward_layer(h, adj, layer, act, rows_identical(h), nullptr);
}

Vec pooling_forward(const Mat& h, const Mat& w_pool, Activation act) {
  return pooling_forward_impl(h, w_pool, act, nullptr);
}

Vec prior_concat(const Vec& h_pool, const Vec& f_g, int lambda_switch, int global_dim) {
  if (static_cast<int>(f_g.size()) != global_dim)
    fail("prior_concat: global attribute length mismatch");
  if (lambda_switch != 0 && lambda_switch != 1) fail("prior_concat: lambda must be 0 or 1");
  Vec out(h_pool);
  out.resize(h_pool.size() + static_cast<std::size_t>(global_dim), 0.0);
  if (lambda_switch == 1)
    std::copy(f_g.begin(), f_g.end(), out.begin() + static_cast<std::ptrdiff_t>(h_pool.size()));
  return out;
}

ForwardResult forward(const Mat& node_features, const Vec& global_attributes,
                      const NormalizedAdjacency& adj, const SurrogateParams& params,
                      const SurrogateConfig& cfg, ForwardMode mode, ForwardTrace* trace,
                      Rng* dropout_rng) {
  if (node_features.cols != cfg.input_dim) fail("forward: node feature width mismatch");
  if (static_cast<int>(adj.rel.size()) != cfg.num_relations)
    fail("forward: relation count mismatch");
  if (!adj.rel.empty() && adj.rel[0].rows != node_features.rows)
    fail("forward: adjacency size mismatch");
  if (static_cast<int>(global_attributes.size()) != cfg.global_dim)
    fail("forward: global attribute length mismatch");
  if (static_cast<int>(params.gc.size()) != cfg.num_gc_layers ||
      static_cast<int>(params.fc.size()) != cfg.num_fc_layers)
    fail("forward: parameter/config layer mismatch");

  const bool training = mode == ForwardMode::train;
  if (trace) {
    trace->gc.clear();
    trace->fc.clear();
  }

  Mat holder;
  const Mat* cur = &node_features;
  for (int l = 0; l < cfg.num_gc_layers; ++l) {
    GcTraceLayer* tl = nullptr;
    if (trace) {
      trace->gc.emplace_back();
      tl = &trace->gc.back();
    }
    holder = gc_forward_layer(*cur, adj, params.gc[static_cast<std::size_t>(l)],
                              cfg.gc_activation, l == 0, tl);
    cur = &holder;
  }

  Vec pooled = pooling_forward_impl(*cur, params.w_pool, cfg.pool_activation,
                                    trace ? &trace->pool : nullptr);
  Vec x = prior_concat(pooled, global_attributes, cfg.lambda_switch, cfg.global_dim);
  if (trace) trace->concat = x;

  const bool use_dropout = training && cfg.dropout > 0.0;
  if (use_dropout && !dropout_rng) fail("forward: dropout in train mode requires an rng");
  for (int l = 0; l < cfg.num_fc_layers; ++l) {
    const FcLayer& f = params.fc[static_cast<std::size_t>(l)];
    if (static_cast<int>(x.size()) != f.w.rows) fail("forward: fc input width mismatch");
    Vec z(f.b.data);
    active().matmul_nn_acc(1, f.w.rows, f.w.cols, x.data(), f.w.ptr(), z.data());
    Vec a(z.size());
    activation_eval(cfg.fc_activation, static_cast<int>(z.size()), z.data(), a.data());
    Vec mask;
    Vec dropped = a;
    if (use_dropout) {
      mask.resize(a.size());
      const double inv_keep = 1.0 / (1.0 - cfg.dropout);
      for (std::size_t j = 0; j < a.size(); ++j) {
        mask[j] = dropout_rng->u01() < cfg.dropout ? 0.0 : inv_keep;
        dropped[j] = a[j] * mask[j];
      }
    }
    if (trace) trace->fc.push_back({std::move(a), dropped, std::move(mask)});
    x = std::move(dropped);
  }

  ForwardResult res;
  res.yhat = params.head_b.at(0, 0) +
             active().dot(cfg.fc_width, x.data(), params.head_w.ptr());
  res.phi = std::move(x);
  res.phi.push_back(1.0);
  return res;
}

ForwardResult forward(const AttributedGraph& g, const SurrogateParams& params,
                      const SurrogateConfig& cfg, ForwardMode mode) {
  const NormalizedAdjacency adj = normalized_adjacency(g, cfg.num_relations);
  return forward(g.node_features, g.global_attributes, adj, params, cfg, mode);
}

double loss(const TrainDataset& ds, const SurrogateParams& params, const SurrogateConfig& cfg) {
  if (ds.graphs.empty()) fail("loss: empty dataset");
  if (ds.graphs.size() != ds.adj.size() || ds.graphs.size() != ds.targets.size())
    fail("loss: dataset arrays disagree in length");
  double acc = 0.0;
  for (std::size_t i = 0; i < ds.graphs.size(); ++i) {
    const ForwardResult fr = forward(ds.graphs[i]->node_features, ds.graphs[i]->global_attributes,
                                     *ds.adj[i], params, cfg, ForwardMode::predict);
    const double r = fr.yhat - ds.targets[i];
    acc += r * r;
  }
  return acc + cfg.penalty * params_sum_squares(params);
}

void backward_accumulate(const ForwardTrace& tr, const Mat& node_features,
                         const NormalizedAdjacency& adj, const SurrogateParams& params,
                         const SurrogateConfig& cfg, double dyhat, SurrogateParams& grads) {
  const auto& K = active();
  const int fw = cfg.fc_width;
  const int pw = cfg.pool_width;

  // linear head
  const Vec& head_in = tr.fc.back().dropped;
  K.axpy(fw, dyhat, head_in.data(), grads.head_w.ptr());
  grads.head_b.at(0, 0) += dyhat;
  Vec dx(static_cast<std::size_t>(fw));
  for (int j = 0; j < fw; ++j) dx[static_cast<std::size_t>(j)] = dyhat * params.head_w.at(j, 0);

  // FC stack
  for (int l = cfg.num_fc_layers - 1; l >= 0; --l) {
    const FcTraceLayer& f = tr.fc[static_cast<std::size_t>(l)];
    const Vec& xin = l == 0 ? tr.concat : tr.fc[static_cast<std::size_t>(l - 1)].dropped;
    Vec da = dx;
    if (!f.mask.empty())
      for (std::size_t j = 0; j < da.size(); ++j) da[j] *= f.mask[j];
    Vec dz(da.size());
    activation_bwd(cfg.fc_activation, static_cast<int>(da.size()), f.out.data(), da.data(),
                   dz.data());
    FcLayer& gf = grads.fc[static_cast<std::size_t>(l)];
    K.matmul_tn_acc(static_cast<int>(xin.size()), 1, static_cast<int>(dz.size()), xin.data(),
                    dz.data(), gf.w.ptr());
    K.axpy(static_cast<int>(dz.size()), 1.0, dz.data(), gf.b.ptr());
    const Mat& w = params.fc[static_cast<std::size_t>(l)].w;
    Vec dxin(xin.size());
    K.matmul_nt(1, w.cols, w.rows, dz.data(), w.ptr(), dxin.data());
    dx = std::move(dxin);
  }

  // concat: only the pooled block carries gradient
  Vec dpool(dx.begin(), dx.begin() + pw);
  Vec ds(static_cast<std::size_t>(pw));
  activation_bwd(cfg.pool_activation, pw, tr.pool.out.data(), dpool.data(), ds.data());

  // softmax rows all receive the same upstream vector ds
  const Mat& s = tr.pool.s;
  const int n = s.rows;
  Mat dz_pool(n, pw);
  for (int i = 0; i < n; ++i) {
    const double inner = K.dot(pw, ds.data(), s.row(i));
    const double* si = s.row(i);
    double* oi = dz_pool.row(i);
    for (int j = 0; j < pw; ++j) oi[j] = si[j] * (ds[static_cast<std::size_t>(j)] - inner);
  }
  const Mat& pool_in = tr.gc.back().out;
  K.matmul_tn_acc(pool_in.cols, n, pw, pool_in.ptr(), dz_pool.ptr(), grads.w_pool.ptr());
  Mat dh = matmul_nt(dz_pool, params.w_pool);  // n x gc_width

  // GC stack
  for (int l = cfg.num_gc_layers - 1; l >= 0; --l) {
    const GcTraceLayer& g = tr.gc[static_cast<std::size_t>(l)];
    GcLayer& gl = grads.gc[static_cast<std::size_t>(l)];
    const GcLayer& pl = params.gc[static_cast<std::size_t>(l)];
    const int dout = g.out.cols;
    Mat dz(g.out.rows, dout);
    activation_bwd(cfg.gc_activation, g.out.size(), g.out.ptr(), dh.ptr(), dz.ptr());
    if (g.rank_one) {
      // dW_r = h ⊗ u_r with u_r = dz^T s_r; never propagates into the input
      const int din = static_cast<int>(g.h_row.size());
      Vec tb;
      std::vector<Vec> u(static_cast<std::size_t>(pl.beta.rows));
      for (int r = 0; r < pl.beta.rows; ++r) {
        u[static_cast<std::size_t>(r)].assign(static_cast<std::size_t>(dout), 0.0);
        K.matmul_nn(1, dz.rows, dout, g.s_r[static_cast<std::size_t>(r)].data(), dz.ptr(),
                    u[static_cast<std::size_t>(r)].data());
      }
      for (int b = 0; b < pl.beta.cols; ++b) {
        row_times(g.h_row, pl.bases[static_cast<std::size_t>(b)], tb);
        Vec ub(static_cast<std::size_t>(dout), 0.0);
        for (int r = 0; r < pl.beta.rows; ++r) {
          gl.beta.at(r, b) += K.dot(dout, tb.data(), u[static_cast<std::size_t>(r)].data());
          K.axpy(dout, pl.beta.at(r, b), u[static_cast<std::size_t>(r)].data(), ub.data());
        }
        const int nz = single_nonzero_index(g.h_row.data(), din);
        Mat& gv = gl.bases[static_cast<std::size_t>(b)];
        if (nz >= 0) {
          K.axpy(dout, g.h_row[static_cast<std::size_t>(nz)], ub.data(), gv.row(nz));
        } else {
          K.matmul_tn_acc(din, 1, dout, g.h_row.data(), ub.data(), gv.ptr());
        }
      }
    } else {
      const Mat& hin = l == 0 ? node_features : tr.gc[static_cast<std::size_t>(l - 1)].out;
      Mat dhin;
      if (l > 0) dhin = Mat(hin.rows, hin.cols);
      Mat dwr(hin.cols, dout);
      for (int r = 0; r < pl.beta.rows; ++r) {
        dwr.zero();
        K.matmul_tn_acc(hin.cols, dz.rows, dout, g.m_r[static_cast<std::size_t>(r)].ptr(),
                        dz.ptr(), dwr.ptr());
        for (int b = 0; b < pl.beta.cols; ++b) {
          gl.beta.at(r, b) += frob_inner(dwr, pl.bases[static_cast<std::size_t>(b)]);
          axpy(pl.beta.at(r, b), dwr, gl.bases[static_cast<std::size_t>(b)]);
        }
        if (l > 0) {
          const Mat dxr = matmul_nt(dz, g.w_r[static_cast<std::size_t>(r)]);  // n x din
          matmul_acc(adj.rel[static_cast<std::size_t>(r)], dxr, dhin);
        }
      }
      if (l > 0) dh = std::move(dhin);
    }
  }
}

TrainResult train(const TrainDataset& ds, SurrogateParams& params, const SurrogateConfig& cfg,
                  int epochs, std::uint64_t seed) {
  cfg.check();
  if (ds.graphs.empty()) fail("train: empty dataset");
  if (ds.graphs.size() != ds.adj.size() || ds.graphs.size() != ds.targets.size())
    fail("train: dataset arrays disagree in length");
  for (double y : ds.targets)
    if (!std::isfinite(y)) fail("train: non-finite target");

  TrainResult res;
  res.initial_loss = loss(ds, params, cfg);
  res.final_loss = res.initial_loss;
  if (!std::isfinite(res.initial_loss))
    throw std::runtime_error("train: initial loss is non-finite");
  if (epochs <= 0) return res;

  const SurrogateParams backup = params;
  SurrogateParams grads = params;
  for_each_param(grads, [](const std::string&, Mat& m) { m.zero(); });

  std::vector<Mat*> pmats, gmats;
  for_each_param(params, [&](const std::string&, Mat& m) { pmats.push_back(&m); });
  for_each_param(grads, [&](const std::string&, Mat& m) { gmats.push_back(&m); });
  const int total = param_count(params);
  AdamState adam(total);
  const AdamConfig ac{cfg.learning_rate, 0.9, 0.999, 1e-8};

  Rng dropout_rng(seed);
  ForwardTrace trace;
  const auto& K = active();
  for (int epoch = 0; epoch < epochs; ++epoch) {
    for (Mat* g : gmats) g->zero();
    double data_loss = 0.0;
    for (std::size_t i = 0; i < ds.graphs.size(); ++i) {
      const ForwardResult fr =
          forward(ds.graphs[i]->node_features, ds.graphs[i]->global_attributes, *ds.adj[i],
                  params, cfg, ForwardMode::train, &trace, &dropout_rng);
      const double r = fr.yhat - ds.targets[i];
      data_loss += r * r;
      backward_accumulate(trace, ds.graphs[i]->node_features, *ds.adj[i], params, cfg, 2.0 * r,
                          grads);
    }
    if (!std::isfinite(data_loss))
      throw std::runtime_error("train: loss diverged at epoch " + std::to_string(epoch) +
                               " (data term " + std::to_string(data_loss) + ")");
    if (cfg.penalty != 0.0)
      for (std::size_t m = 0; m < pmats.size(); ++m)
        K.axpy(pmats[m]->size(), 2.0 * cfg.penalty, pmats[m]->ptr(), gmats[m]->ptr());

    adam.t += 1;
    const double c1 = 1.0 / (1.0 - std::pow(ac.beta1, adam.t));
    const double c2 = 1.0 / (1.0 - std::pow(ac.beta2, adam.t));
    int off = 0;
    for (std::size_t m = 0; m < pmats.size(); ++m) {
      const int cnt = pmats[m]->size();
      K.adam_update(cnt, pmats[m]->ptr(), gmats[m]->ptr(), adam.m.data() + off,
                    adam.v.data() + off, ac.lr, ac.beta1, ac.beta2, ac.eps, c1, c2);
      off += cnt;
    }
  }

  res.final_loss = loss(ds, params, cfg);
  if (!std::isfinite(res.final_loss))
    throw std::runtime_error("train: final loss is non-finite");
  if (res.final_loss > res.initial_loss) {
    params = backup;
    res.final_loss = res.initial_loss;
    res.reverted = true;
  }
  return res;
}

void save_params_json(const SurrogateParams& params, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "{\n\"format\": \"graphbo-params-v1\",\n\"arrays\": {\n";
  bool first = true;
  char buf[40];
  for_each_param(params, [&](const std::string& name, const Mat& m) {
    if (!first) out << ",\n";
    first = false;
    out << "\"" << name << "\": {\"shape\": [" << m.rows << "," << m.cols << "], \"data\": [";
    for (int i = 0; i < m.size(); ++i) {
      if (i) out << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", m.data[static_cast<std::size_t>(i)]);
      out << buf;
    }
    out << "]}";
  });
  out << "\n}\n}\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

SurrogateParams load_params_json(const SurrogateConfig& cfg, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  nlohmann::json j;
  in >> j;
  if (j.value("format", "") != "graphbo-params-v1")
    throw std::runtime_error("unrecognized checkpoint format in " + path);
  const auto& arrays = j.at("arrays");
  SurrogateParams p = make_params(cfg);
  std::size_t used = 0;
  for_each_param(p, [&](const std::string& name, Mat& m) {
    if (!arrays.contains(name)) throw std::runtime_error("checkpoint missing array " + name);
    const auto& entry = arrays.at(name);
    const auto& shape = entry.at("shape");
    if (shape[0].get<int>() != m.rows || shape[1].get<int>() != m.cols)
      throw std::runtime_error("checkpoint shape mismatch for " + name);
    const auto& data = entry.at("data");
    if (static_cast<int>(data.size()) != m.size())
      throw std::runtime_error("checkpoint length mismatch for " + name);
    for (int i = 0; i < m.size(); ++i) m.data[static_cast<std::size_t>(i)] = data[i].get<double>();
    ++used;
  });
  if (used != arrays.size())
    throw std::runtime_error("checkpoint has extra arrays not used by this config");
  return p;
}

}  // namespace graphbo
