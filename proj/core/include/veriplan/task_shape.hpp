#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "veriplan/task_graph.hpp"

namespace veriplan {

enum class QueryScheme { StateRelation, Action };

QueryScheme scheme_from_name(std::string_view name);
std::string_view scheme_name(QueryScheme scheme);

// The composition structure of a task: ordered groups of distinct canonical
// action indices. Groups execute in order; members of one group are
// unordered. "heat_then_clean_and_slice" is [[heat], [clean, slice]].
struct TaskShape {
  std::vector<std::vector<int>> groups;

  std::string name() const;
  int complexity() const;           // node count
  int ordering() const;             // edge count under the adjacent-group rule
  std::vector<int> actions() const; // flattened in group order
  bool contains(int action) const;

  bool operator==(const TaskShape&) const = default;
};

TaskShape shape_from_name(std::string_view name);

// Structural rules shape_from_name enforces, as a predicate: nonempty groups,
// distinct known actions, pick strictly before place.
bool shape_valid(const TaskShape& shape);

// A shape bound to its target object and, when place is involved, the
// destination receptacle and spatial relation.
struct TaskSpec {
  TaskShape shape;
  std::string object;
  std::string receptacle;  // when shape contains place
  std::string relation;    // "in" | "on"
};

// Nodes flatten the groups (canonical action order within a group); edges
// connect every member of each group to every member of the next one.
TaskGraph spec_graph(const TaskSpec& spec, QueryScheme scheme);

Query query_for(int action, const TaskSpec& spec, QueryScheme scheme);

// Verb surface forms used by both the description renderer and the template
// matcher.
struct ActionPhrase {
  std::string_view past;       // "heated"
  std::string_view gerund;     // "heating"
  std::string_view adjective;  // "hot"; empty when the goal form cannot name it
  std::string_view appliance;  // "microwave"; empty when there is none
};

const ActionPhrase& action_phrase(int action);

enum class DescriptionForm {
  then_chain,    // "{obj} is heated in a microwave, then cleaned ..."
  after_pair,    // two groups: "{obj} is cleaned ... after heating ..."
  before_pair,   // two groups: "{obj} is heated ... before cleaning ..."
  goal,          // single all-adjective group: "hot, clean {obj}"
};

// Forms applicable to a shape, in a fixed order.
std::vector<DescriptionForm> description_forms(const TaskShape& shape);

// Renders natural text for the spec. abstracted drops appliance phrases
// ("heated" instead of "heated in a microwave"); the goal form is inherently
// abstract. Place keeps its receptacle either way, since the relation it
// asserts is part of the task itself.
std::string render_description(const TaskSpec& spec, DescriptionForm form, bool abstracted);

// Fixed catalogue of task shapes the synthetic environment draws from:
// every single action, canonical chains and antichains per complexity, and a
// deterministic spread over group structures up to six sub-tasks. Shapes
// containing both pick and place always schedule pick strictly earlier.
const std::vector<TaskShape>& default_task_pool();

}  // namespace veriplan
