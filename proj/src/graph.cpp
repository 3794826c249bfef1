#include "graphbo/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <stdexcept>

namespace graphbo {

std::optional<std::string> validate_error(const AttributedGraph& g, int num_relations) {
  if (g.num_nodes < 1) return "graph " + std::to_string(g.id) + ": num_nodes must be >= 1";
  if (g.node_features.rows != g.num_nodes)
    return "graph " + std::to_string(g.id) + ": node_features must have one row per node";
  std::set<std::tuple<int, int, int>> seen;
  for (const Edge& e : g.edges) {
    const std::string tag = "graph " + std::to_string(g.id) + ": edge (" + std::to_string(e.u) +
                            "," + std::to_string(e.v) + "," + std::to_string(e.type) + ")";
    if (e.u < 0 || e.u >= g.num_nodes || e.v < 0 || e.v >= g.num_nodes)
      return tag + ": node index out of range";
    if (e.u == e.v) return tag + ": self-loops are not stored";
    if (e.u > e.v) return tag + ": must be stored with u < v";
    if (e.type < 0 || e.type >= num_relations) return tag + ": relation index out of range";
    if (!seen.insert({e.u, e.v, e.type}).second) return tag + ": duplicate edge";
  }
  for (double x : g.node_features.data)
    if (!std::isfinite(x)) return "graph " + std::to_string(g.id) + ": non-finite node feature";
  for (double x : g.global_attributes)
    if (!std::isfinite(x)) return "graph " + std::to_string(g.id) + ": non-finite global attribute";
  return std::nullopt;
}

void validate(const AttributedGraph& g, int num_relations) {
  if (auto err = validate_error(g, num_relations)) throw std::invalid_argument(*err);
}

void validate(const GraphPool& pool) {
  for (const AttributedGraph& g : pool.graphs) {
    validate(g, pool.num_relations);
    if (g.node_features.cols != pool.node_feature_dim)
      throw std::invalid_argument("graph " + std::to_string(g.id) + ": node feature dim differs from pool");
    if (static_cast<int>(g.global_attributes.size()) != pool.global_dim)
      throw std::invalid_argument("graph " + std::to_string(g.id) + ": global dim differs from pool");
  }
}

NormalizedAdjacency normalized_adjacency(const AttributedGraph& g, int num_relations) {
  validate(g, num_relations);
  const int n = g.num_nodes;
  NormalizedAdjacency out;
  out.rel.reserve(static_cast<std::size_t>(num_relations));
  for (int r = 0; r < num_relations; ++r) {
    Mat a(n, n);
    for (int i = 0; i < n; ++i) a.at(i, i) = 1.0;
    for (const Edge& e : g.edges) {
      if (e.type != r) continue;
      a.at(e.u, e.v) = 1.0;
      a.at(e.v, e.u) = 1.0;
    }
    Vec dinv(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      double deg = 0.0;
      for (int j = 0; j < n; ++j) deg += a.at(i, j);
      dinv[static_cast<std::size_t>(i)] = 1.0 / std::sqrt(deg);
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        a.at(i, j) *= dinv[static_cast<std::size_t>(i)] * dinv[static_cast<std::size_t>(j)];
    out.rel.push_back(std::move(a));
  }
  return out;
}

NormalizedAdjacency normalized_adjacency(const AttributedGraph& g) {
  int max_type = 0;
  for (const Edge& e : g.edges) max_type = std::max(max_type, e.type);
  return normalized_adjacency(g, max_type + 1);
}

namespace {

// deduplicated union of all relations, as adjacency lists
std::vector<std::vector<int>> union_adjacency(const AttributedGraph& g) {
  std::vector<std::set<int>> nb(static_cast<std::size_t>(g.num_nodes));
  for (const Edge& e : g.edges) {
    nb[static_cast<std::size_t>(e.u)].insert(e.v);
    nb[static_cast<std::size_t>(e.v)].insert(e.u);
  }
  std::vector<std::vector<int>> adj(nb.size());
  for (std::size_t i = 0; i < nb.size(); ++i) adj[i].assign(nb[i].begin(), nb[i].end());
  return adj;
}

double mean(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace

Vec degree_centrality(const AttributedGraph& g) {
  if (g.num_nodes < 2) throw std::invalid_argument("degree_centrality: needs at least 2 nodes");
  const auto adj = union_adjacency(g);
  Vec out(static_cast<std::size_t>(g.num_nodes));
  for (int i = 0; i < g.num_nodes; ++i)
    out[static_cast<std::size_t>(i)] =
        static_cast<double>(adj[static_cast<std::size_t>(i)].size()) / (g.num_nodes - 1);
  return out;
}

double mean_degree_centrality(const AttributedGraph& g) { return mean(degree_centrality(g)); }

Vec betweenness_centrality(const AttributedGraph& g) {
  const int n = g.num_nodes;
  if (n < 3) throw std::invalid_argument("betweenness_centrality: needs at least 3 nodes");
  const auto adj = union_adjacency(g);
  Vec cb(static_cast<std::size_t>(n), 0.0);
  std::vector<int> stack_order;
  std::vector<std::vector<int>> pred(static_cast<std::size_t>(n));
  std::vector<double> sigma(static_cast<std::size_t>(n));
  std::vector<int> dist(static_cast<std::size_t>(n));
  std::vector<double> delta(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    stack_order.clear();
    for (int i = 0; i < n; ++i) {
      pred[static_cast<std::size_t>(i)].clear();
      sigma[static_cast<std::size_t>(i)] = 0.0;
      dist[static_cast<std::size_t>(i)] = -1;
      delta[static_cast<std::size_t>(i)] = 0.0;
    }
    sigma[static_cast<std::size_t>(s)] = 1.0;
    dist[static_cast<std::size_t>(s)] = 0;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      stack_order.push_back(v);
      for (int w : adj[static_cast<std::size_t>(v)]) {
        if (dist[static_cast<std::size_t>(w)] < 0) {
          dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
          queue.push_back(w);
        }
        if (dist[static_cast<std::size_t>(w)] == dist[static_cast<std::size_t>(v)] + 1) {
          sigma[static_cast<std::size_t>(w)] += sigma[static_cast<std::size_t>(v)];
          pred[static_cast<std::size_t>(w)].push_back(v);
        }
      }
    }
    for (auto it = stack_order.rbegin(); it != stack_order.rend(); ++it) {
      const int w = *it;
      for (int v : pred[static_cast<std::size_t>(w)])
        delta[static_cast<std::size_t>(v)] += sigma[static_cast<std::size_t>(v)] /
                                              sigma[static_cast<std::size_t>(w)] *
                                              (1.0 + delta[static_cast<std::size_t>(w)]);
      if (w != s) cb[static_cast<std::size_t>(w)] += delta[static_cast<std::size_t>(w)];
    }
  }
  // undirected: each pair was accumulated from both endpoints; together with
  // the 2/((n-1)(n-2)) convention this reduces to 1/((n-1)(n-2))
  const double norm = 1.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
  for (double& x : cb) x *= norm;
  return cb;
}

double mean_betweenness(const AttributedGraph& g) { return mean(betweenness_centrality(g)); }

Vec clustering_coefficient(const AttributedGraph& g) {
  const auto adj = union_adjacency(g);
  const int n = g.num_nodes;
  std::vector<std::set<int>> nb(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    nb[static_cast<std::size_t>(i)].insert(adj[static_cast<std::size_t>(i)].begin(),
                                           adj[static_cast<std::size_t>(i)].end());
  Vec out(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const auto& ni = adj[static_cast<std::size_t>(i)];
    const int d = static_cast<int>(ni.size());
    if (d < 2) continue;
    int tri = 0;
    for (std::size_t a = 0; a < ni.size(); ++a)
      for (std::size_t b = a + 1; b < ni.size(); ++b)
        if (nb[static_cast<std::size_t>(ni[a])].count(ni[b])) ++tri;
    out[static_cast<std::size_t>(i)] = 2.0 * tri / (static_cast<double>(d) * (d - 1));
  }
  return out;
}

double mean_clustering(const AttributedGraph& g) { return mean(clustering_coefficient(g)); }

Vec extract_global_attributes(const AttributedGraph& g, const std::vector<std::string>& names,
                              double x6) {
  if (names.empty()) throw std::invalid_argument("extract_global_attributes: empty attribute list");
  Vec out;
  out.reserve(names.size());
  for (const std::string& name : names) {
    if (name == "x1") {
      out.push_back(static_cast<double>(g.num_nodes));
    } else if (name == "x2") {
      std::set<std::pair<int, int>> uniq;
      for (const Edge& e : g.edges) uniq.insert({e.u, e.v});
      out.push_back(static_cast<double>(uniq.size()));
    } else if (name == "x3") {
      out.push_back(mean_degree_centrality(g));
    } else if (name == "x4") {
      out.push_back(mean_betweenness(g));
    } else if (name == "x5") {
      out.push_back(mean_clustering(g));
    } else if (name == "x6") {
      if (!std::isfinite(x6))
        throw std::invalid_argument("extract_global_attributes: x6 requested but not supplied");
      out.push_back(x6);
    } else {
      throw std::invalid_argument("extract_global_attributes: unknown attribute " + name);
    }
  }
  return out;
}

std::vector<std::pair<double, double>> minmax_normalize(Mat& attrs) {
  std::vector<std::pair<double, double>> ranges;
  ranges.reserve(static_cast<std::size_t>(attrs.cols));
  for (int j = 0; j < attrs.cols; ++j) {
    double lo = attrs.at(0, j), hi = attrs.at(0, j);
    for (int i = 1; i < attrs.rows; ++i) {
      lo = std::min(lo, attrs.at(i, j));
      hi = std::max(hi, attrs.at(i, j));
    }
    if (!(hi > lo))
      throw std::runtime_error("minmax_normalize: column " + std::to_string(j) + " is constant");
    // divide rather than multiply by a reciprocal so the extremes land exactly on 0 and 1
    const double span = hi - lo;
    for (int i = 0; i < attrs.rows; ++i) attrs.at(i, j) = (attrs.at(i, j) - lo) / span;
    ranges.emplace_back(lo, hi);
  }
  return ranges;
}

}  // namespace graphbo
