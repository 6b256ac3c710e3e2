#include "veriplan/ged.hpp"

#include "doctest.h"

#include <algorithm>
#include <set>
#include <vector>

#include "veriplan/error.hpp"
#include "veriplan/query.hpp"
#include "veriplan/rng.hpp"

using namespace veriplan;

namespace {

const std::vector<Query> kLabels = {
    parse_query("StateQuery(apple,hot)"),
    parse_query("StateQuery(apple,clean)"),
    parse_query("StateQuery(potato,sliced)"),
    parse_query("RelationQuery(apple,plate,on)"),
};

TaskGraph random_graph(Rng& rng, int max_nodes) {
  const int n = rng.uniform_int(1, max_nodes);
  TaskGraph g;
  for (int i = 0; i < n; ++i) g.nodes.push_back(kLabels[rng.index(kLabels.size())]);
  std::set<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    const int u = rng.uniform_int(0, n - 1);
    const int v = rng.uniform_int(0, n - 1);
    if (u < v) edges.insert({u, v});
  }
  g.edges.assign(edges.begin(), edges.end());
  return g;
}

bool has_edge(const TaskGraph& g, int u, int v) {
  return std::find(g.edges.begin(), g.edges.end(), std::make_pair(u, v)) != g.edges.end();
}

// Plain enumeration over every partial injective node mapping, with no
// pruning: each node of `a` is deleted or mapped, leftovers of `b` are
// inserted, and edges are charged by comparing both edge sets under the map.
int slow_ged(const TaskGraph& a, const TaskGraph& b) {
  const int na = static_cast<int>(a.nodes.size());
  const int nb = static_cast<int>(b.nodes.size());
  std::vector<int> map(static_cast<std::size_t>(na), -1);
  std::vector<bool> used(static_cast<std::size_t>(nb), false);
  int best = 1 << 20;

  const auto total_cost = [&]() {
    int cost = 0;
    for (int i = 0; i < na; ++i) {
      const int j = map[static_cast<std::size_t>(i)];
      if (j < 0) {
        cost += 1;  // vertex deletion
      } else if (!(a.nodes[static_cast<std::size_t>(i)] == b.nodes[static_cast<std::size_t>(j)])) {
        cost += 1;  // relabel
      }
    }
    for (bool u : used) {
      if (!u) cost += 1;  // vertex insertion
    }
    for (const auto& [u, v] : a.edges) {
      const int mu = map[static_cast<std::size_t>(u)];
      const int mv = map[static_cast<std::size_t>(v)];
      if (mu < 0 || mv < 0 || !has_edge(b, mu, mv)) cost += 1;  // edge deletion
    }
    for (const auto& [u, v] : b.edges) {
      int pu = -1, pv = -1;
      for (int i = 0; i < na; ++i) {
        if (map[static_cast<std::size_t>(i)] == u) pu = i;
        if (map[static_cast<std::size_t>(i)] == v) pv = i;
      }
      if (pu < 0 || pv < 0 || !has_edge(a, pu, pv)) cost += 1;  // edge insertion
    }
    return cost;
  };

  const auto walk = [&](auto&& self, int i) -> void {
    if (i == na) {
      best = std::min(best, total_cost());
      return;
    }
    for (int j = 0; j < nb; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      used[static_cast<std::size_t>(j)] = true;
      map[static_cast<std::size_t>(i)] = j;
      self(self, i + 1);
      used[static_cast<std::size_t>(j)] = false;
    }
    map[static_cast<std::size_t>(i)] = -1;
    self(self, i + 1);
  };
  walk(walk, 0);
  return best;
}

TaskGraph chain(int n) {
  TaskGraph g;
  for (int i = 0; i < n; ++i) g.nodes.push_back(kLabels[0]);
  for (int i = 0; i + 1 < n; ++i) g.edges.push_back({i, i + 1});
  return g;
}

}  // namespace

TEST_CASE("a graph has distance zero to itself") {
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const TaskGraph g = random_graph(rng, 5);
    CHECK(ged(g, g) == 0);
  }
}

TEST_CASE("single edits cost one") {
  const TaskGraph base = chain(3);

  TaskGraph extra_node = base;
  extra_node.nodes.push_back(kLabels[1]);
  CHECK(ged(base, extra_node) == 1);
  CHECK(ged(extra_node, base) == 1);

  TaskGraph relabeled = base;
  relabeled.nodes[1] = kLabels[2];
  CHECK(ged(base, relabeled) == 1);

  TaskGraph missing_edge = base;
  missing_edge.edges.pop_back();
  CHECK(ged(base, missing_edge) == 1);

  TaskGraph extra_edge = base;
  extra_edge.edges.push_back({0, 2});
  std::sort(extra_edge.edges.begin(), extra_edge.edges.end());
  CHECK(ged(base, extra_edge) == 1);
}

TEST_CASE("matches the unpruned enumerator on random pairs up to four nodes") {
  Rng rng(17);
  for (int i = 0; i < 300; ++i) {
    const TaskGraph a = random_graph(rng, 4);
    const TaskGraph b = random_graph(rng, 4);
    const int expected = slow_ged(a, b);
    CHECK(ged(a, b) == expected);
    CHECK(ged(b, a) == expected);
  }
}

TEST_CASE("swapping two node labels costs at most two") {
  TaskGraph a = chain(2);
  a.nodes[0] = kLabels[0];
  a.nodes[1] = kLabels[1];
  TaskGraph b = a;
  std::swap(b.nodes[0], b.nodes[1]);
  CHECK(ged(a, b) == 2);
}

TEST_CASE("size guard rejects oversized graphs") {
  const TaskGraph big = chain(9);
  const TaskGraph small = chain(2);
  try {
    ged(big, small);
    FAIL("expected SizeLimitExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::size_limit_exceeded);
  }
  // A tighter explicit bound applies to both sides.
  CHECK_THROWS_AS(ged(chain(5), small, 4), Error);
  CHECK_NOTHROW(ged(chain(8), small));
}

TEST_CASE("invalid graphs are rejected before searching") {
  TaskGraph bad = chain(2);
  bad.edges.push_back({1, 0});
  CHECK_THROWS_AS(ged(bad, chain(2)), Error);
}
