#include "veriplan/ged.hpp"

#include <algorithm>
#include <array>
#include <vector>

#include "veriplan/error.hpp"

namespace veriplan {
namespace {

constexpr std::size_t kHardCap = 8;
constexpr int kUnassigned = -2;
constexpr int kDeleted = -1;

struct Adj {
  std::size_t n = 0;
  std::array<std::array<bool, kHardCap>, kHardCap> at{};
};

Adj adjacency(const TaskGraph& g) {
  Adj adj;
  adj.n = g.nodes.size();
  for (const auto& [u, v] : g.edges) {
    adj.at[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = true;
  }
  return adj;
}

struct Search {
  const TaskGraph& a;
  const TaskGraph& b;
  Adj adj_a;
  Adj adj_b;
  std::vector<int> map;      // A node -> B node, kDeleted, or kUnassigned
  std::vector<bool> used;    // B nodes already covered
  int best = 0;

  // Edit cost of extending the current partial mapping with f(i) = j.
  // Edges are charged once, when their later endpoint gets assigned.
  int step_cost(std::size_t i, int j) const {
    int cost = 0;
    if (j == kDeleted) {
      cost += 1;
      for (std::size_t k = 0; k < i; ++k) {
        cost += adj_a.at[i][k] ? 1 : 0;
        cost += adj_a.at[k][i] ? 1 : 0;
      }
      return cost;
    }
    const auto ju = static_cast<std::size_t>(j);
    if (!(a.nodes[i] == b.nodes[ju])) cost += 1;
    for (std::size_t k = 0; k < i; ++k) {
      if (map[k] == kDeleted) {
        cost += adj_a.at[i][k] ? 1 : 0;
        cost += adj_a.at[k][i] ? 1 : 0;
        continue;
      }
      const auto ku = static_cast<std::size_t>(map[k]);
      cost += (adj_a.at[i][k] != adj_b.at[ju][ku]) ? 1 : 0;
      cost += (adj_a.at[k][i] != adj_b.at[ku][ju]) ? 1 : 0;
    }
    return cost;
  }

  // Cost of inserting everything in B the finished mapping never touched.
  int leaf_cost() const {
    int cost = 0;
    for (std::size_t j = 0; j < adj_b.n; ++j) {
      cost += used[j] ? 0 : 1;
    }
    for (std::size_t u = 0; u < adj_b.n; ++u) {
      for (std::size_t v = 0; v < adj_b.n; ++v) {
        if (adj_b.at[u][v] && (!used[u] || !used[v])) cost += 1;
      }
    }
    return cost;
  }

  int pending_insertions(std::size_t next) const {
    const auto remaining_a = adj_a.n - next;
    std::size_t uncovered = 0;
    for (std::size_t j = 0; j < adj_b.n; ++j) {
      uncovered += used[j] ? 0 : 1;
    }
    return uncovered > remaining_a ? static_cast<int>(uncovered - remaining_a) : 0;
  }

  void walk(std::size_t i, int cost) {
    if (cost + pending_insertions(i) >= best) return;
    if (i == adj_a.n) {
      best = std::min(best, cost + leaf_cost());
      return;
    }
    for (std::size_t j = 0; j < adj_b.n; ++j) {
      if (used[j]) continue;
      map[i] = static_cast<int>(j);
      used[j] = true;
      walk(i + 1, cost + step_cost(i, static_cast<int>(j)));
      used[j] = false;
    }
    map[i] = kDeleted;
    walk(i + 1, cost + step_cost(i, kDeleted));
    map[i] = kUnassigned;
  }
};

}  // namespace

int ged(const TaskGraph& a, const TaskGraph& b, std::size_t max_nodes) {
  validate(a);
  validate(b);
  const auto cap = std::min(max_nodes, kHardCap);
  if (a.nodes.size() > cap || b.nodes.size() > cap) {
    raise(Errc::size_limit_exceeded,
          "graph edit distance is exact and limited to " + std::to_string(cap) + " nodes");
  }
  Search s{a, b, adjacency(a), adjacency(b), {}, {}, 0};
  s.map.assign(a.nodes.size(), kUnassigned);
  s.used.assign(b.nodes.size(), false);
  // Deleting all of A and inserting all of B is always a valid edit path.
  s.best = static_cast<int>(a.nodes.size() + a.edges.size() + b.nodes.size() + b.edges.size()) + 1;
  s.walk(0, 0);
  return s.best;
}

}  // namespace veriplan
