#pragma once

#include <cstddef>

#include "veriplan/task_graph.hpp"

namespace veriplan {

// Exact graph edit distance under unit costs: vertex insert/delete cost 1,
// vertex relabel costs 1 when the queries differ, edge insert/delete cost 1.
// Raw (unnormalized) cost. Exhaustive over injective node mappings with
// branch-and-bound, so both graphs are bounded to max_nodes.
int ged(const TaskGraph& a, const TaskGraph& b, std::size_t max_nodes = 8);

}  // namespace veriplan
