#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "veriplan/query.hpp"

namespace veriplan {

// Partially ordered set of queries. Node id equals its index in nodes;
// an edge (u, v) means u must be satisfied before v.
struct TaskGraph {
  std::vector<Query> nodes;
  std::vector<std::pair<int, int>> edges;  // kept sorted and unique

  bool operator==(const TaskGraph&) const = default;
};

// Throws on structural violations: empty graph, edge endpoints out of range,
// self or duplicate edges, cycles.
void validate(const TaskGraph& g);

// Line-oriented serialization, e.g.
//   Step 0: StateQuery(apple,hot), Step 1: StateQuery(apple,clean),
//   Step 0 -> Step 1
// Nodes come first in ascending id order, then edges in ascending (from, to)
// order; entries are joined with ", ". Output is byte-deterministic and
// injective over valid graphs.
std::string graph_to_dot(const TaskGraph& g);

// Accepts entries separated by top-level commas or newlines. strict is
// forwarded to parse_query.
TaskGraph parse_dot(std::string_view text, bool strict = true);

}  // namespace veriplan
