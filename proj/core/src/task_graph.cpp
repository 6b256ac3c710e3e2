#include "veriplan/task_graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include "veriplan/error.hpp"

namespace veriplan {

namespace {

// Kahn's algorithm; true when every node is reachable in topological order.
bool is_acyclic(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<int>> out(n);
  for (const auto& [u, v] : edges) {
    out[u].push_back(v);
    ++indegree[v];
  }
  std::vector<int> ready;
  for (int i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  int seen = 0;
  while (!ready.empty()) {
    const int u = ready.back();
    ready.pop_back();
    ++seen;
    for (int v : out[u]) {
      if (--indegree[v] == 0) ready.push_back(v);
    }
  }
  return seen == n;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Splits on commas and newlines that sit outside parentheses, so query
// argument lists survive intact.
std::vector<std::string_view> split_entries(std::string_view text) {
  std::vector<std::string_view> entries;
  std::size_t start = 0;
  int depth = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    const bool at_end = i == text.size();
    const char c = at_end ? '\0' : text[i];
    if (!at_end && c == '(') ++depth;
    if (!at_end && c == ')') --depth;
    if (at_end || ((c == ',' || c == '\n') && depth == 0)) {
      const std::string_view piece = trim(text.substr(start, i - start));
      if (!piece.empty()) entries.push_back(piece);
      start = i + 1;
    }
  }
  return entries;
}

bool parse_step_id(std::string_view& s, int& id) {
  constexpr std::string_view kPrefix = "Step ";
  if (!s.starts_with(kPrefix)) return false;
  s.remove_prefix(kPrefix.size());
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(begin, end, id);
  if (ec != std::errc{} || ptr == begin || id < 0) return false;
  s.remove_prefix(static_cast<std::size_t>(ptr - begin));
  return true;
}

}  // namespace

void validate(const TaskGraph& g) {
  const int n = static_cast<int>(g.nodes.size());
  if (n == 0) raise(Errc::syntax_error, "graph has no nodes");
  std::set<std::pair<int, int>> seen;
  for (const auto& [u, v] : g.edges) {
    if (u < 0 || u >= n || v < 0 || v >= n) {
      raise(Errc::dangling_edge,
            "edge " + std::to_string(u) + " -> " + std::to_string(v) + " leaves the node range");
    }
    if (u == v) raise(Errc::cycle_detected, "self edge on node " + std::to_string(u));
    if (!seen.insert({u, v}).second) {
      raise(Errc::syntax_error,
            "duplicate edge " + std::to_string(u) + " -> " + std::to_string(v));
    }
  }
  if (!is_acyclic(n, g.edges)) raise(Errc::cycle_detected, "ordering constraints form a cycle");
}

std::string graph_to_dot(const TaskGraph& g) {
  validate(g);
  std::vector<std::pair<int, int>> edges = g.edges;
  std::sort(edges.begin(), edges.end());

  std::string out;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (i) out += ", ";
    out += "Step " + std::to_string(i) + ": " + to_string(g.nodes[i]);
  }
  for (const auto& [u, v] : edges) {
    out += ", Step " + std::to_string(u) + " -> Step " + std::to_string(v);
  }
  return out;
}

TaskGraph parse_dot(std::string_view text, bool strict) {
  const std::vector<std::string_view> entries = split_entries(text);
  if (entries.empty()) raise(Errc::syntax_error, "empty graph text");

  std::vector<std::pair<int, Query>> nodes;
  std::vector<std::pair<int, int>> edges;
  for (std::string_view entry : entries) {
    std::string_view rest = entry;
    int id = 0;
    if (!parse_step_id(rest, id)) {
      raise(Errc::syntax_error, "expected 'Step <i>' in '" + std::string(entry) + "'");
    }
    if (rest.starts_with(":")) {
      nodes.emplace_back(id, parse_query(trim(rest.substr(1)), strict));
    } else if (trim(rest).starts_with("->")) {
      std::string_view target = trim(rest);
      target.remove_prefix(2);
      target = trim(target);
      int to = 0;
      if (!parse_step_id(target, to) || !trim(target).empty()) {
        raise(Errc::syntax_error, "bad edge entry '" + std::string(entry) + "'");
      }
      edges.emplace_back(id, to);
    } else {
      raise(Errc::syntax_error, "unrecognized entry '" + std::string(entry) + "'");
    }
  }

  TaskGraph g;
  g.nodes.resize(nodes.size());
  std::vector<bool> filled(nodes.size(), false);
  for (auto& [id, query] : nodes) {
    if (id >= static_cast<int>(nodes.size())) {
      raise(Errc::syntax_error, "node ids must be contiguous from 0, got " + std::to_string(id));
    }
    if (filled[id]) raise(Errc::syntax_error, "duplicate node id " + std::to_string(id));
    filled[id] = true;
    g.nodes[id] = std::move(query);
  }

  std::sort(edges.begin(), edges.end());
  g.edges = std::move(edges);
  validate(g);
  return g;
}

}  // namespace veriplan
