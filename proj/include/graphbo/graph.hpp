#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "graphbo/mat.hpp"

namespace graphbo {

struct Edge {
  int u = 0;
  int v = 0;
  int type = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Undirected attributed graph. Edges are stored once with u < v; relation
// membership is the only edge feature (discrete type index). Self-connections
// are not stored; adjacency normalization injects them.
struct AttributedGraph {
  int id = 0;
  int num_nodes = 0;
  std::vector<Edge> edges;
  Mat node_features;        // num_nodes x D_V
  Vec global_attributes;    // D_G entries
};

struct GraphPool {
  std::vector<AttributedGraph> graphs;
  int node_feature_dim = 0;  // D_V
  int num_relations = 1;     // D_E
  int global_dim = 0;        // D_G
};

// One dense |V|x|V| matrix per relation: D̃^{-1/2} (A_r + I) D̃^{-1/2}.
struct NormalizedAdjacency {
  std::vector<Mat> rel;
};

// First violated invariant as a message, or nullopt when the graph is valid.
std::optional<std::string> validate_error(const AttributedGraph& g, int num_relations);
void validate(const AttributedGraph& g, int num_relations);
void validate(const GraphPool& pool);

NormalizedAdjacency normalized_adjacency(const AttributedGraph& g, int num_relations);
NormalizedAdjacency normalized_adjacency(const AttributedGraph& g);  // D_E = max type + 1

// Structural statistics. Multi-relation graphs are reduced to the deduplicated
// union of their edges; the statistics describe the plain topology.
Vec degree_centrality(const AttributedGraph& g);        // |V| >= 2
double mean_degree_centrality(const AttributedGraph& g);
Vec betweenness_centrality(const AttributedGraph& g);   // |V| >= 3
double mean_betweenness(const AttributedGraph& g);
Vec clustering_coefficient(const AttributedGraph& g);
double mean_clustering(const AttributedGraph& g);

// Named attribute extraction in declared order. Supported names: x1 (node
// count), x2 (edge count), x3 (mean degree centrality), x4 (mean betweenness),
// x5 (mean clustering), x6 (an externally drawn uniform scalar, passed in by
// the pool generator and stored with the graph).
Vec extract_global_attributes(const AttributedGraph& g, const std::vector<std::string>& names,
                              double x6 = std::numeric_limits<double>::quiet_NaN());

// Column-wise min-max normalization of a pool attribute matrix. Returns the
// (min, max) per column so unseen values can be mapped later. A constant
// column is an error; the caller decides how to regenerate or drop it.
std::vector<std::pair<double, double>> minmax_normalize(Mat& attrs);

}  // namespace graphbo
