#include "veriplan/extensions.hpp"

#include <string>

#include "veriplan/error.hpp"

namespace veriplan {

namespace {

struct Enumerator {
  int n;
  const std::vector<std::uint32_t>& preds;  // predecessor mask per node
  std::size_t cap;
  ExtensionSet out;
  std::vector<int> prefix;
  std::uint32_t placed = 0;

  // Trying candidates in ascending id yields lexicographic order.
  void walk() {
    if (out.truncated) return;
    if (prefix.size() == static_cast<std::size_t>(n)) {
      if (out.sequences.size() == cap) {
        out.truncated = true;
        return;
      }
      out.sequences.push_back(prefix);
      return;
    }
    for (int v = 0; v < n; ++v) {
      const std::uint32_t bit = 1u << v;
      if ((placed & bit) || (preds[v] & ~placed)) continue;
      placed |= bit;
      prefix.push_back(v);
      walk();
      prefix.pop_back();
      placed &= ~bit;
      if (out.truncated) return;
    }
  }
};

std::vector<std::uint32_t> predecessor_masks(const TaskGraph& g) {
  std::vector<std::uint32_t> preds(g.nodes.size(), 0);
  for (const auto& [u, v] : g.edges) preds[v] |= 1u << u;
  return preds;
}

constexpr int kMaxNodesForMasks = 20;

}  // namespace

ExtensionSet linear_extensions(const TaskGraph& g, std::size_t cap) {
  validate(g);
  const int n = static_cast<int>(g.nodes.size());
  if (n > kMaxNodesForMasks) {
    raise(Errc::size_limit_exceeded,
          "extension enumeration supports up to " + std::to_string(kMaxNodesForMasks) + " nodes");
  }
  if (cap == 0) raise(Errc::invalid_argument, "extension cap must be positive");
  const std::vector<std::uint32_t> preds = predecessor_masks(g);
  Enumerator e{n, preds, cap, {}, {}, 0};
  e.prefix.reserve(static_cast<std::size_t>(n));
  e.walk();
  return std::move(e.out);
}

std::uint64_t count_extensions(const TaskGraph& g) {
  validate(g);
  const int n = static_cast<int>(g.nodes.size());
  if (n > kMaxNodesForMasks) {
    raise(Errc::size_limit_exceeded,
          "extension counting supports up to " + std::to_string(kMaxNodesForMasks) + " nodes");
  }
  const std::vector<std::uint32_t> preds = predecessor_masks(g);

  // ways[S] = number of completions once the downset S is placed.
  std::vector<std::uint64_t> ways(std::size_t{1} << n, 0);
  const std::uint32_t full = static_cast<std::uint32_t>((std::uint64_t{1} << n) - 1);
  ways[full] = 1;
  for (std::uint32_t s = full; s-- > 0;) {
    std::uint64_t total = 0;
    for (int v = 0; v < n; ++v) {
      const std::uint32_t bit = 1u << v;
      if ((s & bit) || (preds[v] & ~s)) continue;
      total += ways[s | bit];
    }
    ways[s] = total;
  }
  return ways[0];
}

}  // namespace veriplan
