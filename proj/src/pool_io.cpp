#include "graphbo/pool_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace graphbo {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_pool_jsonl(const GraphPool& pool, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  std::string line;
  for (const AttributedGraph& g : pool.graphs) {
    line.clear();
    line += "{\"id\":" + std::to_string(g.id) + ",\"n\":" + std::to_string(g.num_nodes);
    std::vector<Edge> edges = g.edges;
    std::sort(edges.begin(), edges.end());
    line += ",\"edges\":[";
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (i) line += ',';
      line += '[' + std::to_string(edges[i].u) + ',' + std::to_string(edges[i].v) + ',' +
              std::to_string(edges[i].type) + ']';
    }
    line += "],\"node_features\":[";
    for (int i = 0; i < g.node_features.rows; ++i) {
      if (i) line += ',';
      line += '[';
      for (int j = 0; j < g.node_features.cols; ++j) {
        if (j) line += ',';
        line += format_double(g.node_features.at(i, j));
      }
      line += ']';
    }
    line += "],\"global\":[";
    for (std::size_t i = 0; i < g.global_attributes.size(); ++i) {
      if (i) line += ',';
      line += format_double(g.global_attributes[i]);
    }
    line += "]}\n";
    out << line;
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

GraphPool read_pool_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open pool file: " + path);
  GraphPool pool;
  std::string line;
  int max_type = 0;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    AttributedGraph g;
    g.id = j.at("id").get<int>();
    g.num_nodes = j.at("n").get<int>();
    for (const auto& e : j.at("edges")) {
      if (e.size() != 3)
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": edge needs [u,v,type]");
      g.edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<int>()});
      max_type = std::max(max_type, g.edges.back().type);
    }
    const auto& nf = j.at("node_features");
    const int rows = static_cast<int>(nf.size());
    const int cols = rows > 0 ? static_cast<int>(nf[0].size()) : 0;
    g.node_features = Mat(rows, cols);
    for (int i = 0; i < rows; ++i) {
      if (static_cast<int>(nf[i].size()) != cols)
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": ragged node_features");
      for (int c = 0; c < cols; ++c) g.node_features.at(i, c) = nf[i][c].get<double>();
    }
    for (const auto& x : j.at("global")) g.global_attributes.push_back(x.get<double>());
    pool.graphs.push_back(std::move(g));
  }
  if (pool.graphs.empty()) throw std::runtime_error("empty pool file: " + path);
  pool.node_feature_dim = pool.graphs.front().node_features.cols;
  pool.num_relations = max_type + 1;
  pool.global_dim = static_cast<int>(pool.graphs.front().global_attributes.size());
  validate(pool);
  return pool;
}

}  // namespace graphbo
