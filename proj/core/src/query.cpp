#include "veriplan/query.hpp"

#include <algorithm>
#include <cctype>

#include "veriplan/error.hpp"

namespace veriplan {

namespace {

template <std::size_t N>
int index_of(const std::array<std::string_view, N>& table, std::string_view name) {
  for (std::size_t i = 0; i < N; ++i) {
    if (table[i] == name) return static_cast<int>(i);
  }
  return -1;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_identifier(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

int action_index(std::string_view name) { return index_of(kActions, name); }
int state_index(std::string_view name) { return index_of(kStates, name); }
int relation_index(std::string_view name) { return index_of(kRelations, name); }

std::string_view state_for_action(std::string_view action) {
  if (action == "heat") return "hot";
  if (action == "cool") return "cold";
  if (action == "clean") return "clean";
  if (action == "slice") return "sliced";
  if (action == "pick") return "picked";
  return {};  // place maps to a relation query, not a state
}

std::string_view action_for_state(std::string_view state) {
  if (state == "hot") return "heat";
  if (state == "cold") return "cool";
  if (state == "clean") return "clean";
  if (state == "sliced") return "slice";
  if (state == "picked") return "pick";
  return {};
}

std::string_view type_name(QueryType t) {
  switch (t) {
    case QueryType::State: return "StateQuery";
    case QueryType::Relation: return "RelationQuery";
    case QueryType::Action: return "ActionQuery";
  }
  return {};
}

std::string to_string(const Query& q) {
  std::string out{type_name(q.type)};
  out += '(';
  for (std::size_t i = 0; i < q.args.size(); ++i) {
    if (i) out += ',';
    out += q.args[i];
  }
  out += ')';
  return out;
}

Query parse_query(std::string_view text, bool strict) {
  const std::string_view body = trim(text);
  const std::size_t open = body.find('(');
  if (open == std::string_view::npos || body.back() != ')') {
    raise(Errc::syntax_error, "expected <QueryType>(<args>), got '" + std::string(text) + "'");
  }

  const std::string_view name = trim(body.substr(0, open));
  Query q;
  if (name == "StateQuery") {
    q.type = QueryType::State;
  } else if (name == "RelationQuery") {
    q.type = QueryType::Relation;
  } else if (name == "ActionQuery") {
    q.type = QueryType::Action;
  } else {
    raise(Errc::unknown_query_type, "'" + std::string(name) + "'");
  }

  std::string_view args = body.substr(open + 1, body.size() - open - 2);
  while (true) {
    const std::size_t comma = args.find(',');
    const std::string_view piece = comma == std::string_view::npos ? args : args.substr(0, comma);
    q.args.push_back(lower(trim(piece)));
    if (comma == std::string_view::npos) break;
    args.remove_prefix(comma + 1);
  }

  for (const std::string& a : q.args) {
    if (!valid_identifier(a)) {
      raise(Errc::syntax_error, "bad identifier '" + a + "' in '" + std::string(text) + "'");
    }
  }

  const std::size_t arity = q.args.size();
  switch (q.type) {
    case QueryType::State:
      if (arity != 2) raise(Errc::arity_mismatch, "StateQuery takes 2 args, got " + std::to_string(arity));
      if (strict && state_index(q.args[1]) < 0) {
        raise(Errc::invalid_vocabulary, "unknown state '" + q.args[1] + "'");
      }
      break;
    case QueryType::Relation:
      if (arity != 3) raise(Errc::arity_mismatch, "RelationQuery takes 3 args, got " + std::to_string(arity));
      if (strict && relation_index(q.args[2]) < 0) {
        raise(Errc::invalid_vocabulary, "unknown relation '" + q.args[2] + "'");
      }
      break;
    case QueryType::Action:
      if (arity != 2 && arity != 3) {
        raise(Errc::arity_mismatch, "ActionQuery takes 2 or 3 args, got " + std::to_string(arity));
      }
      if (strict && action_index(q.args[0]) < 0) {
        raise(Errc::invalid_vocabulary, "unknown action '" + q.args[0] + "'");
      }
      if (strict && q.args[0] == "place" && arity != 3) {
        raise(Errc::arity_mismatch, "ActionQuery(place,..) takes a receptacle");
      }
      break;
  }
  return q;
}

std::string_view query_action(const Query& q) {
  switch (q.type) {
    case QueryType::State: return action_for_state(q.args[1]);
    case QueryType::Relation: return "place";
    case QueryType::Action: return q.args[0];
  }
  return {};
}

std::string_view query_object(const Query& q) {
  switch (q.type) {
    case QueryType::State:
    case QueryType::Relation: return q.args[0];
    case QueryType::Action: return q.args[1];
  }
  return {};
}

}  // namespace veriplan
