#include "veriplan/task_shape.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "veriplan/error.hpp"
#include "veriplan/extensions.hpp"
#include "veriplan/rng.hpp"

namespace veriplan {

namespace {

constexpr int kHeat = 0, kClean = 1, kSlice = 2, kCool = 3, kPlace = 4, kPick = 5;

const std::array<ActionPhrase, 6> kPhrases = {{
    {"heated", "heating", "hot", "microwave"},
    {"cleaned", "cleaning", "clean", "sinkbasin"},
    {"sliced", "slicing", "sliced", ""},
    {"cooled", "cooling", "cold", "fridge"},
    {"placed", "placing", "", ""},  // receptacle phrase supplied by the spec
    {"picked", "picking", "picked", ""},
}};

std::vector<std::string_view> split(std::string_view s, std::string_view sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t hit = s.find(sep, pos);
    if (hit == std::string_view::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, hit - pos));
    pos = hit + sep.size();
  }
}

// pick must complete strictly before place can start.
bool pick_place_ok(const TaskShape& shape) {
  int pick_group = -1, place_group = -1;
  for (std::size_t g = 0; g < shape.groups.size(); ++g) {
    for (int a : shape.groups[g]) {
      if (a == kPick) pick_group = static_cast<int>(g);
      if (a == kPlace) place_group = static_cast<int>(g);
    }
  }
  if (pick_group < 0 || place_group < 0) return true;
  return pick_group < place_group;
}

void check_shape(const TaskShape& shape) {
  if (shape.groups.empty()) raise(Errc::invalid_argument, "task shape has no groups");
  std::set<int> seen;
  for (const auto& group : shape.groups) {
    if (group.empty()) raise(Errc::invalid_argument, "task shape has an empty group");
    for (int a : group) {
      if (a < 0 || a >= static_cast<int>(kActions.size())) {
        raise(Errc::invalid_argument, "bad action index " + std::to_string(a));
      }
      if (!seen.insert(a).second) {
        raise(Errc::invalid_argument, "sub-task '" + std::string(kActions[a]) + "' repeats");
      }
    }
  }
  if (!pick_place_ok(shape)) {
    raise(Errc::invalid_argument, "pick must be ordered before place in '" + shape.name() + "'");
  }
}

std::string phrase_text(int action, const TaskSpec& spec, bool gerund, bool abstracted) {
  const ActionPhrase& p = kPhrases[static_cast<std::size_t>(action)];
  std::string out{gerund ? p.gerund : p.past};
  if (action == kPlace) {
    out += ' ';
    out += spec.relation;
    out += " a ";
    out += spec.receptacle;
  } else if (!p.appliance.empty() && !abstracted) {
    out += " in a ";
    out += p.appliance;
  }
  return out;
}

std::string group_text(const std::vector<int>& group, const TaskSpec& spec, bool gerund,
                       bool abstracted) {
  std::string out;
  for (std::size_t i = 0; i < group.size(); ++i) {
    if (i) out += " and ";
    out += phrase_text(group[i], spec, gerund, abstracted);
  }
  return out;
}

}  // namespace

QueryScheme scheme_from_name(std::string_view name) {
  if (name == "state_relation") return QueryScheme::StateRelation;
  if (name == "action") return QueryScheme::Action;
  raise(Errc::invalid_argument, "unknown query scheme '" + std::string(name) + "'");
}

std::string_view scheme_name(QueryScheme scheme) {
  return scheme == QueryScheme::StateRelation ? "state_relation" : "action";
}

std::string TaskShape::name() const {
  std::string out;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (g) out += "_then_";
    for (std::size_t i = 0; i < groups[g].size(); ++i) {
      if (i) out += "_and_";
      out += kActions[static_cast<std::size_t>(groups[g][i])];
    }
  }
  return out;
}

int TaskShape::complexity() const {
  int n = 0;
  for (const auto& group : groups) n += static_cast<int>(group.size());
  return n;
}

int TaskShape::ordering() const {
  int edges = 0;
  for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
    edges += static_cast<int>(groups[g].size() * groups[g + 1].size());
  }
  return edges;
}

std::vector<int> TaskShape::actions() const {
  std::vector<int> out;
  for (const auto& group : groups) out.insert(out.end(), group.begin(), group.end());
  return out;
}

bool TaskShape::contains(int action) const {
  for (const auto& group : groups) {
    if (std::find(group.begin(), group.end(), action) != group.end()) return true;
  }
  return false;
}

bool shape_valid(const TaskShape& shape) {
  if (shape.groups.empty()) return false;
  std::set<int> seen;
  for (const auto& group : shape.groups) {
    if (group.empty()) return false;
    for (int a : group) {
      if (a < 0 || a >= static_cast<int>(kActions.size())) return false;
      if (!seen.insert(a).second) return false;
    }
  }
  return pick_place_ok(shape);
}

TaskShape shape_from_name(std::string_view name) {
  TaskShape shape;
  for (std::string_view group_text : split(name, "_then_")) {
    std::vector<int> group;
    for (std::string_view action_text : split(group_text, "_and_")) {
      const int a = action_index(action_text);
      if (a < 0) raise(Errc::invalid_argument, "unknown sub-task '" + std::string(action_text) + "'");
      group.push_back(a);
    }
    std::sort(group.begin(), group.end());
    shape.groups.push_back(std::move(group));
  }
  check_shape(shape);
  return shape;
}

Query query_for(int action, const TaskSpec& spec, QueryScheme scheme) {
  const std::string_view verb = kActions[static_cast<std::size_t>(action)];
  if (scheme == QueryScheme::Action) {
    Query q{QueryType::Action, {std::string(verb), spec.object}};
    if (action == kPlace) q.args.push_back(spec.receptacle);
    return q;
  }
  if (action == kPlace) {
    return Query{QueryType::Relation, {spec.object, spec.receptacle, spec.relation}};
  }
  return Query{QueryType::State, {spec.object, std::string(state_for_action(verb))}};
}

TaskGraph spec_graph(const TaskSpec& spec, QueryScheme scheme) {
  check_shape(spec.shape);
  TaskGraph g;
  std::vector<std::vector<int>> node_ids(spec.shape.groups.size());
  for (std::size_t gi = 0; gi < spec.shape.groups.size(); ++gi) {
    std::vector<int> group = spec.shape.groups[gi];
    std::sort(group.begin(), group.end());
    for (int action : group) {
      node_ids[gi].push_back(static_cast<int>(g.nodes.size()));
      g.nodes.push_back(query_for(action, spec, scheme));
    }
  }
  for (std::size_t gi = 0; gi + 1 < node_ids.size(); ++gi) {
    for (int u : node_ids[gi]) {
      for (int v : node_ids[gi + 1]) g.edges.emplace_back(u, v);
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

const ActionPhrase& action_phrase(int action) {
  if (action < 0 || action >= static_cast<int>(kPhrases.size())) {
    raise(Errc::invalid_argument, "bad action index " + std::to_string(action));
  }
  return kPhrases[static_cast<std::size_t>(action)];
}

std::vector<DescriptionForm> description_forms(const TaskShape& shape) {
  std::vector<DescriptionForm> forms{DescriptionForm::then_chain};
  if (shape.groups.size() == 2) {
    forms.push_back(DescriptionForm::after_pair);
    forms.push_back(DescriptionForm::before_pair);
  }
  if (shape.groups.size() == 1) {
    const bool all_named = std::all_of(shape.groups[0].begin(), shape.groups[0].end(), [](int a) {
      return !kPhrases[static_cast<std::size_t>(a)].adjective.empty();
    });
    if (all_named) forms.push_back(DescriptionForm::goal);
  }
  return forms;
}

std::string render_description(const TaskSpec& spec, DescriptionForm form, bool abstracted) {
  check_shape(spec.shape);
  const auto& groups = spec.shape.groups;
  switch (form) {
    case DescriptionForm::then_chain: {
      std::string out = spec.object + " is ";
      for (std::size_t g = 0; g < groups.size(); ++g) {
        if (g) out += ", then ";
        out += group_text(groups[g], spec, false, abstracted);
      }
      return out;
    }
    case DescriptionForm::after_pair: {
      if (groups.size() != 2) raise(Errc::invalid_argument, "after form needs exactly two groups");
      return spec.object + " is " + group_text(groups[1], spec, false, abstracted) + " after " +
             group_text(groups[0], spec, true, abstracted);
    }
    case DescriptionForm::before_pair: {
      if (groups.size() != 2) raise(Errc::invalid_argument, "before form needs exactly two groups");
      return spec.object + " is " + group_text(groups[0], spec, false, abstracted) + " before " +
             group_text(groups[1], spec, true, abstracted);
    }
    case DescriptionForm::goal: {
      if (groups.size() != 1) raise(Errc::invalid_argument, "goal form needs a single group");
      std::string out;
      for (std::size_t i = 0; i < groups[0].size(); ++i) {
        const ActionPhrase& p = kPhrases[static_cast<std::size_t>(groups[0][i])];
        if (p.adjective.empty()) {
          raise(Errc::invalid_argument, "no goal adjective for '" +
                                            std::string(kActions[static_cast<std::size_t>(groups[0][i])]) + "'");
        }
        if (i) out += ", ";
        out += p.adjective;
      }
      out += ' ';
      out += spec.object;
      return out;
    }
  }
  raise(Errc::invalid_argument, "bad description form");
}

namespace {

void compositions_of(int total, std::vector<int>& prefix, std::vector<std::vector<int>>& out) {
  if (total == 0) {
    out.push_back(prefix);
    return;
  }
  for (int part = 1; part <= total; ++part) {
    prefix.push_back(part);
    compositions_of(total - part, prefix, out);
    prefix.pop_back();
  }
}

// A chain of unordered groups has exactly prod |group|! linear extensions.
// Shapes beyond the enumeration cap are kept out of the pool so the generator
// can sample extensions uniformly without ever truncating.
bool within_extension_cap(const TaskShape& shape) {
  std::size_t count = 1;
  for (const auto& group : shape.groups) {
    for (std::size_t i = 2; i <= group.size(); ++i) count *= i;
    if (count > kDefaultExtensionCap) return false;
  }
  return true;
}

std::vector<TaskShape> build_default_pool() {
  std::vector<TaskShape> pool;
  std::set<std::string> names;
  const auto add = [&](const TaskShape& shape) {
    if (!pick_place_ok(shape) || !within_extension_cap(shape)) return;
    if (names.insert(shape.name()).second) pool.push_back(shape);
  };
  const auto add_name = [&](std::string_view name) { add(shape_from_name(name)); };

  // Canonical coverage: all singles, one chain and one antichain per
  // complexity, and the fork/diamond family used throughout the tests.
  for (std::string_view a : kActions) add_name(a);
  add_name("heat_then_clean");
  add_name("cool_then_clean");
  add_name("pick_then_place");
  add_name("heat_and_clean");
  add_name("clean_and_cool");
  add_name("heat_then_clean_then_slice");
  add_name("heat_and_clean_and_slice");
  add_name("heat_then_clean_and_slice_then_place");
  add_name("heat_then_clean_then_slice_then_cool");
  add_name("heat_and_clean_and_slice_and_cool");
  add_name("heat_then_clean_then_slice_then_cool_then_pick");
  add_name("pick_then_heat_then_clean_then_slice_then_cool_then_place");

  // Deterministic spread over group structures. The fixed seed freezes the
  // catalogue across builds.
  Rng rng(0x7a11ad5e11e7ull);
  const std::array<int, 7> per_composition = {0, 0, 4, 3, 2, 1, 1};
  for (int complexity = 2; complexity <= 6; ++complexity) {
    std::vector<std::vector<int>> comps;
    std::vector<int> prefix;
    compositions_of(complexity, prefix, comps);
    for (const std::vector<int>& comp : comps) {
      int produced = 0;
      for (int attempt = 0; attempt < 64 && produced < per_composition[static_cast<std::size_t>(complexity)];
           ++attempt) {
        std::vector<int> actions(kActions.size());
        for (std::size_t i = 0; i < actions.size(); ++i) actions[i] = static_cast<int>(i);
        rng.shuffle(actions);
        TaskShape shape;
        std::size_t cursor = 0;
        for (int size : comp) {
          std::vector<int> group(actions.begin() + static_cast<std::ptrdiff_t>(cursor),
                                 actions.begin() + static_cast<std::ptrdiff_t>(cursor + size));
          std::sort(group.begin(), group.end());
          shape.groups.push_back(std::move(group));
          cursor += static_cast<std::size_t>(size);
        }
        if (!pick_place_ok(shape) || !within_extension_cap(shape)) continue;
        if (names.insert(shape.name()).second) {
          pool.push_back(shape);
          ++produced;
        }
      }
    }
  }
  return pool;
}

}  // namespace

const std::vector<TaskShape>& default_task_pool() {
  static const std::vector<TaskShape> pool = build_default_pool();
  return pool;
}

}  // namespace veriplan
