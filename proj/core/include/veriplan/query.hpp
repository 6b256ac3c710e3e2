#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace veriplan {

// Closed vocabularies of the task query DSL. Action order is canonical: it
// fixes node ordering inside task graphs and row ordering in reports.
inline constexpr std::array<std::string_view, 6> kActions = {
    "heat", "clean", "slice", "cool", "place", "pick"};
inline constexpr std::array<std::string_view, 5> kStates = {
    "hot", "cold", "clean", "sliced", "picked"};
inline constexpr std::array<std::string_view, 2> kRelations = {"in", "on"};

int action_index(std::string_view name);    // -1 when unknown
int state_index(std::string_view name);
int relation_index(std::string_view name);

// heat -> hot, cool -> cold, ... Empty for place, which produces a relation.
std::string_view state_for_action(std::string_view action);
std::string_view action_for_state(std::string_view state);

enum class QueryType { State, Relation, Action };

std::string_view type_name(QueryType t);

struct Query {
  QueryType type = QueryType::State;
  // State:    object, state
  // Relation: object, receptacle, relation
  // Action:   action, object[, receptacle]
  std::vector<std::string> args;

  bool operator==(const Query&) const = default;
};

std::string to_string(const Query& q);

// Parses "StateQuery(apple,hot)" style text. Arguments are trimmed,
// lowercased and must match [a-z0-9_]+. strict additionally rejects
// out-of-lexicon state/relation/action names.
Query parse_query(std::string_view text, bool strict = true);

// The sub-task verb a query tracks; drives per-sub-task reporting.
std::string_view query_action(const Query& q);

// Target object of the query.
std::string_view query_object(const Query& q);

}  // namespace veriplan
