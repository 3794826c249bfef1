#pragma once

#include <string>

#include "graphbo/graph.hpp"

namespace graphbo {

// JSON-lines pool format, one graph per line:
//   {"id":0,"n":3,"edges":[[0,1,0],...],"node_features":[[...],...],"global":[...]}
// The writer emits keys in a fixed order, edges sorted lexicographically, and
// doubles in shortest round-trip form, so identical pools serialize to
// identical bytes.
void write_pool_jsonl(const GraphPool& pool, const std::string& path);
GraphPool read_pool_jsonl(const std::string& path);

std::string format_double(double v);  // shortest round-trip decimal form

}  // namespace graphbo
