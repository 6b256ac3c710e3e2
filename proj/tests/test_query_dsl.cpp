#include "veriplan/query.hpp"

#include "doctest.h"

#include <string>

#include "veriplan/error.hpp"

using namespace veriplan;

namespace {

template <typename Fn>
Errc code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a veriplan::Error");
  return Errc::invalid_argument;
}

}  // namespace

TEST_CASE("vocabulary tables index both ways") {
  CHECK(kActions.size() == 6);
  CHECK(kStates.size() == 5);
  CHECK(kRelations.size() == 2);

  for (std::size_t i = 0; i < kActions.size(); ++i) {
    CHECK(action_index(kActions[i]) == static_cast<int>(i));
  }
  for (std::size_t i = 0; i < kStates.size(); ++i) {
    CHECK(state_index(kStates[i]) == static_cast<int>(i));
  }
  for (std::size_t i = 0; i < kRelations.size(); ++i) {
    CHECK(relation_index(kRelations[i]) == static_cast<int>(i));
  }

  CHECK(action_index("fry") == -1);
  CHECK(state_index("fried") == -1);
  CHECK(relation_index("under") == -1);
}

TEST_CASE("action/state correspondence") {
  CHECK(state_for_action("heat") == "hot");
  CHECK(state_for_action("cool") == "cold");
  CHECK(state_for_action("clean") == "clean");
  CHECK(state_for_action("slice") == "sliced");
  CHECK(state_for_action("pick") == "picked");
  CHECK(state_for_action("place").empty());

  for (std::string_view s : kStates) {
    CHECK(state_for_action(action_for_state(s)) == s);
  }
}

TEST_CASE("parse_query round-trips each query type") {
  const Query state = parse_query("StateQuery(apple,hot)");
  CHECK(state.type == QueryType::State);
  CHECK(state.args == std::vector<std::string>{"apple", "hot"});
  CHECK(to_string(state) == "StateQuery(apple,hot)");

  const Query rel = parse_query("RelationQuery(apple,plate,on)");
  CHECK(rel.type == QueryType::Relation);
  CHECK(rel.args == std::vector<std::string>{"apple", "plate", "on"});
  CHECK(to_string(rel) == "RelationQuery(apple,plate,on)");

  const Query act = parse_query("ActionQuery(heat,apple)");
  CHECK(act.type == QueryType::Action);
  CHECK(to_string(act) == "ActionQuery(heat,apple)");

  const Query placed = parse_query("ActionQuery(place,apple,plate)");
  CHECK(placed.args.size() == 3);
  CHECK(to_string(placed) == "ActionQuery(place,apple,plate)");
}

TEST_CASE("parse_query normalizes whitespace and case") {
  const Query q = parse_query("  StateQuery( Apple , HOT )  ");
  CHECK(q.args == std::vector<std::string>{"apple", "hot"});
  CHECK(parse_query("StateQuery(apple,hot)") == q);
}

TEST_CASE("parse_query rejects malformed text") {
  CHECK(code_of([] { parse_query("StateQuery apple hot"); }) == Errc::syntax_error);
  CHECK(code_of([] { parse_query("StateQuery(apple,hot"); }) == Errc::syntax_error);
  CHECK(code_of([] { parse_query("StateQuery(ap ple,hot)"); }) == Errc::syntax_error);
  CHECK(code_of([] { parse_query("StateQuery(,hot)"); }) == Errc::syntax_error);
  CHECK(code_of([] { parse_query("GoalQuery(apple,hot)"); }) == Errc::unknown_query_type);
  CHECK(code_of([] { parse_query("StateQuery(apple)"); }) == Errc::arity_mismatch);
  CHECK(code_of([] { parse_query("StateQuery(apple,hot,extra)"); }) == Errc::arity_mismatch);
  CHECK(code_of([] { parse_query("RelationQuery(apple,on)"); }) == Errc::arity_mismatch);
  CHECK(code_of([] { parse_query("ActionQuery(heat)"); }) == Errc::arity_mismatch);
}

TEST_CASE("strict mode gates the closed vocabularies") {
  CHECK(code_of([] { parse_query("StateQuery(apple,fried)"); }) == Errc::invalid_vocabulary);
  CHECK(code_of([] { parse_query("RelationQuery(apple,plate,under)"); }) == Errc::invalid_vocabulary);
  CHECK(code_of([] { parse_query("ActionQuery(fry,apple)"); }) == Errc::invalid_vocabulary);
  // place asserts a destination, so the two-argument form is rejected.
  CHECK(code_of([] { parse_query("ActionQuery(place,apple)"); }) == Errc::arity_mismatch);

  // Lenient mode admits any well-formed identifier; object names are always
  // open-vocabulary.
  CHECK(parse_query("StateQuery(apple,fried)", false).args[1] == "fried");
  CHECK(parse_query("StateQuery(zucchini,hot)").args[0] == "zucchini");
}

TEST_CASE("query_action and query_object read through each type") {
  CHECK(query_action(parse_query("StateQuery(apple,hot)")) == "heat");
  CHECK(query_action(parse_query("StateQuery(apple,picked)")) == "pick");
  CHECK(query_action(parse_query("RelationQuery(apple,plate,on)")) == "place");
  CHECK(query_action(parse_query("ActionQuery(slice,tomato)")) == "slice");

  CHECK(query_object(parse_query("StateQuery(apple,hot)")) == "apple");
  CHECK(query_object(parse_query("RelationQuery(egg,bowl,in)")) == "egg");
  CHECK(query_object(parse_query("ActionQuery(heat,potato)")) == "potato");
}
