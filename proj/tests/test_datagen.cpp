#include "veriplan/datagen.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "veriplan/dataset_io.hpp"
#include "veriplan/error.hpp"
#include "veriplan/semparse.hpp"
#include "veriplan/verify.hpp"

using namespace veriplan;

namespace {

TaskSpec spec_for(const std::string& shape_name, const std::string& object) {
  TaskSpec spec;
  spec.shape = shape_from_name(shape_name);
  spec.object = object;
  if (spec.shape.contains(action_index("place"))) {
    spec.receptacle = "plate";
    spec.relation = "in";  // matches the default receptacle table
  }
  return spec;
}

Sample positive_sample(const std::string& shape_name, const std::string& object,
                       const DatasetConfig& cfg, std::uint64_t seed) {
  const TaskSpec spec = spec_for(shape_name, object);
  Sample s;
  s.id = "unit-000000";
  s.split = "train";
  s.graph = spec_graph(spec, QueryScheme::StateRelation);
  s.shape_name = spec.shape.name();
  s.complexity = static_cast<int>(s.graph.nodes.size());
  s.ordering = static_cast<int>(s.graph.edges.size());
  s.description = render_description(spec, DescriptionForm::then_chain, false);
  s.trace = execute_plan(spec, cfg, seed);
  s.trace.id = s.id;
  s.label = true;
  return s;
}

bool oracle_label(const Sample& s, const DatasetConfig& cfg) {
  try {
    return verify(s.graph, segment(s.trace, cfg.window_frames), OracleScorer()).label;
  } catch (const Error& e) {
    if (e.code() == Errc::too_few_segments) return false;
    throw;
  }
}

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

TEST_CASE("execute_plan lays one sub-task block per fixed slot") {
  const DatasetConfig cfg;
  const RawTrace t = execute_plan(spec_for("heat_then_clean_then_slice", "apple"), cfg, 5);

  REQUIRE(t.events.size() == 3);
  CHECK(t.frames.size() == 3 * static_cast<std::size_t>(cfg.slot_frames));
  for (std::size_t k = 0; k < t.events.size(); ++k) {
    const Event& ev = t.events[k];
    CHECK(ev.start == static_cast<int>(k) * cfg.slot_frames);
    const int len = ev.end - ev.start;
    CHECK(len >= cfg.min_block_frames);
    CHECK(len <= cfg.max_block_frames);
    CHECK(ev.object == "apple");
  }
  // The chain admits a single extension, so the order is forced.
  CHECK(t.events[0].action == "heat");
  CHECK(t.events[1].action == "clean");
  CHECK(t.events[2].action == "slice");

  for (const auto& frame : t.frames) {
    CHECK(frame.size() == cfg.feature_dim);
  }
}

TEST_CASE("block frames carry their event one-hots, padding stays zero") {
  DatasetConfig cfg;
  cfg.feature_noise = 0.0;
  const RawTrace t = execute_plan(spec_for("place", "apple"), cfg, 3);
  const FeatureLayout l = FeatureLayout::make(vocabulary_for(cfg), cfg.feature_dim);
  const Event& ev = t.events[0];

  const auto& inside = t.frames[static_cast<std::size_t>(ev.start)];
  CHECK(inside[l.action0 + static_cast<std::size_t>(action_index("place"))] == 1.0);
  CHECK(inside[l.object0 + 0] == 1.0);  // apple is object 0
  CHECK(inside[l.relation0 + static_cast<std::size_t>(relation_index("in"))] == 1.0);
  CHECK(inside[l.nav] == 0.0);

  const auto& nav = t.frames[static_cast<std::size_t>(ev.end)];
  CHECK(nav[l.nav] == 1.0);
  CHECK(nav[l.action0 + static_cast<std::size_t>(action_index("place"))] == 0.0);

  for (const auto& frame : t.frames) {
    for (std::size_t c = l.used; c < l.dim; ++c) CHECK(frame[c] == 0.0);
  }
}

TEST_CASE("with noise on, only populated channels fluctuate") {
  const DatasetConfig cfg;  // feature_noise 0.1
  const RawTrace t = execute_plan(spec_for("heat", "egg"), cfg, 11);
  const FeatureLayout l = FeatureLayout::make(vocabulary_for(cfg), cfg.feature_dim);
  bool saw_noise = false;
  for (const auto& frame : t.frames) {
    for (std::size_t c = 0; c < l.used; ++c) {
      if (frame[c] != 0.0 && frame[c] != 1.0) saw_noise = true;
    }
    for (std::size_t c = l.used; c < l.dim; ++c) CHECK(frame[c] == 0.0);
  }
  CHECK(saw_noise);
}

TEST_CASE("execute_plan is deterministic per seed") {
  const DatasetConfig cfg;
  const TaskSpec spec = spec_for("heat_and_clean_then_slice", "potato");
  const RawTrace a = execute_plan(spec, cfg, 99);
  const RawTrace b = execute_plan(spec, cfg, 99);
  CHECK(a.frames == b.frames);
  CHECK(a.events == b.events);

  const RawTrace c = execute_plan(spec, cfg, 100);
  CHECK(a.frames != c.frames);
}

TEST_CASE("extensions of an unordered pair are sampled uniformly") {
  const DatasetConfig cfg;
  const TaskSpec spec = spec_for("heat_and_clean", "apple");
  int heat_first = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const RawTrace t = execute_plan(spec, cfg, seed);
    if (t.events[0].action == "heat") ++heat_first;
  }
  CHECK(heat_first > 450);
  CHECK(heat_first < 550);
}

TEST_CASE("incompatible action/object pairs are refused") {
  const DatasetConfig cfg;
  CHECK(code_of([&] { execute_plan(spec_for("heat", "book"), cfg, 1); }) ==
        Errc::incompatible_action_object);
  CHECK(code_of([&] { execute_plan(spec_for("slice", "cup"), cfg, 1); }) ==
        Errc::incompatible_action_object);
  CHECK_NOTHROW(execute_plan(spec_for("pick_then_place", "book"), cfg, 1));
}

TEST_CASE("every positive verifies under the noiseless oracle") {
  const DatasetConfig cfg;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Sample s = positive_sample("heat_then_clean_and_slice_then_place", "tomato", cfg, seed);
    CHECK(oracle_label(s, cfg));
  }
}

TEST_CASE("claim-side negatives keep the trace and break the claim") {
  const DatasetConfig cfg;
  const Sample pos = positive_sample("heat_then_clean", "apple", cfg, 7);

  const Sample reordered = make_negative(pos, "reordered", 1, cfg);
  CHECK_FALSE(reordered.label);
  CHECK(reordered.negative_kind == "reordered");
  CHECK(reordered.trace.frames == pos.trace.frames);
  CHECK(reordered.shape_name == "clean_then_heat");
  CHECK_FALSE(oracle_label(reordered, cfg));

  const Sample substituted = make_negative(pos, "substituted", 2, cfg);
  CHECK_FALSE(substituted.label);
  CHECK(substituted.trace.frames == pos.trace.frames);
  CHECK(substituted.graph.nodes.size() == pos.graph.nodes.size());
  CHECK_FALSE(substituted.graph == pos.graph);
  CHECK_FALSE(oracle_label(substituted, cfg));

  // The claimed object never changes.
  for (const Query& q : substituted.graph.nodes) CHECK(query_object(q) == "apple");

  // Mutated descriptions still parse to the mutated graph.
  const Lexicon lex{{"apple"}, {"plate"}, false};
  CHECK(parse_description(reordered.description, lex) == reordered.graph);
  CHECK(parse_description(substituted.description, lex) == substituted.graph);
}

TEST_CASE("trace-side negatives keep the claim and break the trace") {
  const DatasetConfig cfg;
  const Sample pos = positive_sample("heat_then_clean_then_slice", "apple", cfg, 13);

  const Sample shuffled = make_negative(pos, "trace_shuffled", 3, cfg);
  CHECK(shuffled.graph == pos.graph);
  CHECK(shuffled.description == pos.description);
  CHECK(shuffled.trace.frames.size() == pos.trace.frames.size());
  CHECK(shuffled.trace.events.size() == pos.trace.events.size());
  CHECK_FALSE(oracle_label(shuffled, cfg));

  const Sample dropped = make_negative(pos, "trace_dropped", 4, cfg);
  CHECK(dropped.graph == pos.graph);
  CHECK(dropped.trace.events.size() == pos.trace.events.size() - 1);
  CHECK(dropped.trace.frames.size() < pos.trace.frames.size());
  CHECK_FALSE(oracle_label(dropped, cfg));
}

TEST_CASE("unfalsifiable kinds raise CannotFalsify") {
  const DatasetConfig cfg;
  const Sample single = positive_sample("heat", "apple", cfg, 21);
  CHECK(code_of([&] { make_negative(single, "reordered", 1, cfg); }) == Errc::cannot_falsify);
  CHECK(code_of([&] { make_negative(single, "trace_shuffled", 1, cfg); }) == Errc::cannot_falsify);
  // Substitution and dropping still falsify a one-step task.
  CHECK_FALSE(make_negative(single, "substituted", 1, cfg).label);
  CHECK_FALSE(make_negative(single, "trace_dropped", 1, cfg).label);

  const Sample unordered = positive_sample("heat_and_clean", "apple", cfg, 22);
  CHECK(code_of([&] { make_negative(unordered, "reordered", 1, cfg); }) == Errc::cannot_falsify);
}

TEST_CASE("negative context constraints are honored") {
  const DatasetConfig cfg;
  const Sample pos = positive_sample("heat_then_clean", "apple", cfg, 31);

  NegativeContext ctx;
  ctx.forbidden_shapes = {"clean_then_heat"};
  CHECK(code_of([&] { make_negative(pos, "reordered", 1, cfg, ctx); }) == Errc::cannot_falsify);

  NegativeContext steps;
  steps.preserve_steps = {{"heat", "apple"}, {"clean", "apple"}};
  CHECK(code_of([&] { make_negative(pos, "substituted", 1, cfg, steps); }) ==
        Errc::cannot_falsify);

  NegativeContext forbid;
  forbid.forbidden_steps = {{"slice", "apple"}, {"cool", "apple"},
                            {"pick", "apple"},  {"place", "apple"}};
  CHECK(code_of([&] { make_negative(pos, "substituted", 1, cfg, forbid); }) ==
        Errc::cannot_falsify);
}

TEST_CASE("config validation rejects impossible geometry") {
  DatasetConfig cfg;
  cfg.slot_frames = 15;  // smaller than the window
  CHECK(code_of([&] { execute_plan(spec_for("heat", "apple"), cfg, 1); }) ==
        Errc::invalid_argument);

  DatasetConfig tiny;
  tiny.feature_dim = 8;
  CHECK(code_of([&] { execute_plan(spec_for("heat", "apple"), tiny, 1); }) ==
        Errc::dimension_mismatch);

  DatasetConfig frac;
  frac.negative_fraction = 1.5;
  CHECK(code_of([&] { build_dataset(frac); }) == Errc::invalid_argument);
}

TEST_CASE("build_dataset fills every split with balanced labels") {
  DatasetConfig cfg;
  cfg.train = 48;
  cfg.novel_tasks = 16;
  cfg.novel_steps = 16;
  cfg.abstraction = 16;
  const Dataset ds = build_dataset(cfg);

  CHECK(ds.train.size() == 48);
  CHECK(ds.novel_tasks.size() == 16);
  CHECK(ds.novel_steps.size() == 16);
  CHECK(ds.abstraction.size() == 16);
  CHECK(ds.all().size() == 96);

  for (std::string_view split : kSplitNames) {
    const auto& samples = ds.split(split);
    const auto positives = std::count_if(samples.begin(), samples.end(),
                                         [](const Sample& s) { return s.label; });
    CHECK(positives == static_cast<std::ptrdiff_t>(samples.size() / 2));
    for (const Sample& s : samples) CHECK(s.split == split);
  }

  // All four falsification kinds occur in a 24-negative train split.
  std::set<std::string> kinds;
  for (const Sample& s : ds.train) {
    if (!s.label) kinds.insert(s.negative_kind);
  }
  CHECK(kinds.size() == kNegativeKinds.size());

  // Soundness: labels agree with the noiseless oracle on every sample.
  for (const Sample* s : ds.all()) {
    CHECK(oracle_label(*s, cfg) == s->label);
  }
}

TEST_CASE("splits respect their holdout rules") {
  DatasetConfig cfg;
  cfg.train = 40;
  cfg.novel_tasks = 16;
  cfg.novel_steps = 16;
  cfg.abstraction = 16;
  const Dataset ds = build_dataset(cfg);

  CHECK(ds.holdout_shape_names.size() == cfg.holdout_shapes);
  CHECK(ds.holdout_step_pairs.size() == cfg.holdout_steps);

  const std::set<std::string> held(ds.holdout_shape_names.begin(), ds.holdout_shape_names.end());
  std::set<std::string> train_shapes;
  for (const TaskShape& shape : default_task_pool()) {
    if (!held.count(shape.name())) train_shapes.insert(shape.name());
  }

  const auto claims_holdout_step = [&](const Sample& s) {
    for (const Query& q : s.graph.nodes) {
      for (const auto& [action, object] : ds.holdout_step_pairs) {
        if (query_action(q) == action && query_object(q) == object) return true;
      }
    }
    return false;
  };

  for (const Sample& s : ds.train) {
    CHECK_FALSE(held.count(s.shape_name));
    CHECK_FALSE(claims_holdout_step(s));
  }
  for (const Sample& s : ds.abstraction) {
    CHECK_FALSE(held.count(s.shape_name));
    CHECK_FALSE(claims_holdout_step(s));
    for (const char* appliance : {"microwave", "sinkbasin", "fridge"}) {
      CHECK(s.description.find(appliance) == std::string::npos);
    }
  }
  for (const Sample& s : ds.novel_tasks) {
    // Claimed compositions never collide with train compositions, and the
    // positives are exactly the held-out shapes.
    CHECK_FALSE(train_shapes.count(s.shape_name));
    if (s.label) CHECK(held.count(s.shape_name));
    CHECK_FALSE(claims_holdout_step(s));
  }
  for (const Sample& s : ds.novel_steps) {
    CHECK_FALSE(held.count(s.shape_name));
    CHECK(claims_holdout_step(s));
  }
}

TEST_CASE("infeasible holdouts are reported") {
  DatasetConfig cfg;
  cfg.holdout_shapes = 10000;
  CHECK(code_of([&] { build_dataset(cfg); }) == Errc::infeasible_split);

  DatasetConfig steps;
  steps.holdout_steps = 10000;
  CHECK(code_of([&] { build_dataset(steps); }) == Errc::infeasible_split);
}

TEST_CASE("dataset statistics land in the designed difficulty band") {
  DatasetConfig cfg;
  cfg.train = 96;
  cfg.novel_tasks = 16;
  cfg.novel_steps = 16;
  cfg.abstraction = 16;
  const Dataset ds = build_dataset(cfg);
  const DatasetStats st = dataset_stats(ds);

  CHECK(st.samples == 144);
  CHECK(st.positives == 72);
  CHECK(st.negatives == 72);
  CHECK(st.per_split.at("train") == 96);
  CHECK(st.mean_subtasks > 3.6);
  CHECK(st.mean_subtasks < 5.6);
  CHECK(st.mean_extensions >= 1.0);
  CHECK(st.mean_description_words > 3.0);
}

TEST_CASE("generation is byte-reproducible per seed") {
  DatasetConfig cfg;
  cfg.train = 12;
  cfg.novel_tasks = 6;
  cfg.novel_steps = 6;
  cfg.abstraction = 6;

  const Dataset a = build_dataset(cfg);
  const Dataset b = build_dataset(cfg);
  const auto sa = a.all();
  const auto sb = b.all();
  REQUIRE(sa.size() == sb.size());
  for (std::size_t i = 0; i < sa.size(); ++i) {
    CHECK(sample_to_json(*sa[i]) == sample_to_json(*sb[i]));
  }

  cfg.seed = 8;
  const Dataset c = build_dataset(cfg);
  bool any_difference = false;
  const auto sc = c.all();
  for (std::size_t i = 0; i < sa.size() && !any_difference; ++i) {
    any_difference = sample_to_json(*sa[i]) != sample_to_json(*sc[i]);
  }
  CHECK(any_difference);
}

TEST_CASE("the tightest negative still clears the decision margin") {
  // A six-query claim with one unsatisfied query is the closest any negative
  // comes to the threshold: sigmoid((5 log .99 + log .01) / 6) = 0.31521,
  // which stays below the 1/3 decision line.
  const double p = sigmoid((5.0 * std::log(0.99) + std::log(0.01)) / 6.0);
  CHECK(p == doctest::Approx(0.31521).epsilon(1e-4));
  CHECK(p < default_decision_threshold());
}
