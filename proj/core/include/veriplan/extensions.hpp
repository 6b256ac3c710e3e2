#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "veriplan/task_graph.hpp"

namespace veriplan {

struct ExtensionSet {
  // Topological orders in lexicographic node-id order. Each is a candidate
  // way the task may legally unfold.
  std::vector<std::vector<int>> sequences;
  bool truncated = false;  // enumeration stopped at the cap
};

inline constexpr std::size_t kDefaultExtensionCap = 64;

ExtensionSet linear_extensions(const TaskGraph& g, std::size_t cap = kDefaultExtensionCap);

// Exact count via dynamic programming over downsets (bitmask-bounded).
std::uint64_t count_extensions(const TaskGraph& g);

}  // namespace veriplan
