#include "veriplan/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <utility>

#include "veriplan/error.hpp"
#include "veriplan/extensions.hpp"
#include "veriplan/rng.hpp"
#include "veriplan/verify.hpp"

namespace veriplan {

namespace {

constexpr int kHeat = 0, kClean = 1, kCool = 3, kPlace = 4;

// Uniform extension sampling enumerates the full set first, so refuse specs
// whose extension count is out of all proportion to the task pool.
constexpr std::size_t kMaxSampledExtensions = 4096;

const ObjectSpec& object_for(const DatasetConfig& cfg, std::string_view name) {
  for (const ObjectSpec& obj : cfg.objects) {
    if (obj.name == name) return obj;
  }
  raise(Errc::unknown_object, "object '" + std::string(name) + "' is not in the dataset config");
}

void validate_config(const DatasetConfig& cfg) {
  const auto bad = [](const std::string& what) { raise(Errc::invalid_argument, what); };
  if (cfg.objects.empty()) bad("dataset config lists no objects");
  if (cfg.receptacles.empty()) bad("dataset config lists no receptacles");
  for (const ObjectSpec& obj : cfg.objects) {
    if (obj.actions.empty()) bad("object '" + obj.name + "' supports no actions");
    for (const std::string& a : obj.actions) {
      if (action_index(a) < 0) bad("object '" + obj.name + "' lists unknown action '" + a + "'");
    }
  }
  for (const ReceptacleSpec& r : cfg.receptacles) {
    if (relation_index(r.relation) < 0) {
      bad("receptacle '" + r.name + "' has unknown relation '" + r.relation + "'");
    }
  }
  if (cfg.negative_fraction < 0.0 || cfg.negative_fraction > 1.0) {
    bad("negative_fraction must lie in [0, 1]");
  }
  if (cfg.feature_noise < 0.0) bad("feature_noise must be non-negative");
  if (cfg.min_block_frames < 1 || cfg.max_block_frames < cfg.min_block_frames) {
    bad("block frame range must satisfy 1 <= min <= max");
  }
  if (cfg.window_frames < 1) bad("window_frames must be positive");
  if (cfg.slot_frames < cfg.max_block_frames) {
    bad("slot_frames must fit the longest block");
  }
  if (cfg.slot_frames < cfg.window_frames) {
    bad("slot_frames must cover the segmentation window");
  }
  double weight_sum = 0.0;
  for (double w : cfg.complexity_weights) {
    if (w < 0.0) bad("complexity weights must be non-negative");
    weight_sum += w;
  }
  if (weight_sum <= 0.0) bad("complexity weights sum to zero");
  (void)FeatureLayout::make(vocabulary_for(cfg), cfg.feature_dim);
}

struct GenContext {
  const DatasetConfig& cfg;
  Vocabulary vocab;
  FeatureLayout layout;

  explicit GenContext(const DatasetConfig& config)
      : cfg(config),
        vocab(vocabulary_for(config)),
        layout(FeatureLayout::make(vocab, config.feature_dim)) {}
};

void round_frame(std::vector<double>& frame) {
  for (double& v : frame) v = std::nearbyint(v * 1e4) / 1e4;
}

// Noise covers the populated channels only; the padding tail stays exactly
// zero so it carries no signal a scorer could latch onto.
std::vector<double> noise_frame(const GenContext& gc, Rng& rng) {
  std::vector<double> frame(gc.layout.dim, 0.0);
  if (gc.cfg.feature_noise > 0.0) {
    for (std::size_t c = 0; c < gc.layout.used; ++c) {
      frame[c] = rng.gaussian(0.0, gc.cfg.feature_noise);
    }
  }
  return frame;
}

void emit_nav(std::vector<std::vector<double>>& frames, std::size_t count, const GenContext& gc,
              Rng& rng) {
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> frame = noise_frame(gc, rng);
    frame[gc.layout.nav] += 1.0;
    round_frame(frame);
    frames.push_back(std::move(frame));
  }
}

void emit_block(RawTrace& trace, int action, const TaskSpec& spec, const GenContext& gc, Rng& rng) {
  const int duration = rng.uniform_int(gc.cfg.min_block_frames, gc.cfg.max_block_frames);
  Event ev;
  ev.start = static_cast<int>(trace.frames.size());
  ev.end = ev.start + duration;
  ev.action = std::string(kActions[static_cast<std::size_t>(action)]);
  ev.object = spec.object;
  if (action == kPlace) {
    ev.receptacle = spec.receptacle;
    ev.relation = spec.relation;
  }
  const int object_ch = gc.vocab.object_index(spec.object);
  for (int i = 0; i < duration; ++i) {
    std::vector<double> frame = noise_frame(gc, rng);
    frame[gc.layout.action0 + static_cast<std::size_t>(action)] += 1.0;
    frame[gc.layout.object0 + static_cast<std::size_t>(object_ch)] += 1.0;
    if (action == kPlace) {
      frame[gc.layout.relation0 + static_cast<std::size_t>(relation_index(spec.relation))] += 1.0;
      frame[gc.layout.receptacle0 +
            static_cast<std::size_t>(gc.vocab.receptacle_index(spec.receptacle))] += 1.0;
    }
    round_frame(frame);
    trace.frames.push_back(std::move(frame));
  }
  trace.events.push_back(std::move(ev));
}

void check_spec(const TaskSpec& spec, const DatasetConfig& cfg) {
  const ObjectSpec& obj = object_for(cfg, spec.object);
  for (int a : spec.shape.actions()) {
    const std::string_view verb = kActions[static_cast<std::size_t>(a)];
    if (!obj.supports(verb)) {
      raise(Errc::incompatible_action_object,
            std::string(verb) + "(" + spec.object + ") is not a valid sub-task");
    }
  }
  if (spec.shape.contains(kPlace)) {
    const auto hit = std::find_if(cfg.receptacles.begin(), cfg.receptacles.end(),
                                  [&](const ReceptacleSpec& r) { return r.name == spec.receptacle; });
    if (hit == cfg.receptacles.end()) {
      raise(Errc::unknown_object,
            "receptacle '" + spec.receptacle + "' is not in the dataset config");
    }
    if (relation_index(spec.relation) < 0) {
      raise(Errc::invalid_argument, "place needs a spatial relation of 'in' or 'on'");
    }
  }
}

bool oracle_passes(const TaskGraph& graph, const RawTrace& trace, const DatasetConfig& cfg) {
  try {
    const SegmentedTrace st = segment(trace, cfg.window_frames);
    const OracleScorer oracle;
    return verify(graph, st, oracle).label;
  } catch (const Error& e) {
    if (e.code() == Errc::too_few_segments) return false;
    throw;
  }
}

TaskSpec spec_of(const Sample& sample) {
  TaskSpec spec;
  spec.shape = shape_from_name(sample.shape_name);
  if (sample.graph.nodes.empty()) raise(Errc::invalid_argument, "sample has an empty graph");
  spec.object = std::string(query_object(sample.graph.nodes.front()));
  for (const Query& q : sample.graph.nodes) {
    if (q.type == QueryType::Relation) {
      spec.receptacle = q.args[1];
      spec.relation = q.args[2];
    }
  }
  return spec;
}

std::string render_for(const TaskSpec& spec, std::string_view split, Rng& rng) {
  std::vector<DescriptionForm> forms = description_forms(spec.shape);
  const bool abstracted = split == "abstraction";
  if (!abstracted) std::erase(forms, DescriptionForm::goal);
  return render_description(spec, forms[rng.index(forms.size())], abstracted);
}

void set_claim(Sample& sample, const TaskSpec& spec, Rng& rng) {
  sample.graph = spec_graph(spec, QueryScheme::StateRelation);
  sample.description = render_for(spec, sample.split, rng);
  sample.shape_name = spec.shape.name();
  sample.complexity = static_cast<int>(sample.graph.nodes.size());
  sample.ordering = static_cast<int>(sample.graph.edges.size());
}

bool has_step(const std::vector<std::pair<std::string, std::string>>& steps,
              std::string_view action, std::string_view object) {
  return std::any_of(steps.begin(), steps.end(), [&](const auto& p) {
    return p.first == action && p.second == object;
  });
}

RawTrace reorder_blocks(const RawTrace& trace, const std::vector<std::size_t>& perm) {
  using Rows = std::vector<std::vector<double>>;
  const auto slice = [&](int lo, int hi) {
    return Rows(trace.frames.begin() + lo, trace.frames.begin() + hi);
  };
  const auto& ev = trace.events;
  RawTrace out;
  out.id = trace.id;
  out.has_annotations = trace.has_annotations;
  out.frames = slice(0, ev.front().start);
  std::vector<Rows> gaps;
  for (std::size_t i = 0; i + 1 < ev.size(); ++i) {
    gaps.push_back(slice(ev[i].end, ev[i + 1].start));
  }
  for (std::size_t k = 0; k < perm.size(); ++k) {
    Event moved = ev[perm[k]];
    const Rows block = slice(moved.start, moved.end);
    moved.start = static_cast<int>(out.frames.size());
    moved.end = moved.start + static_cast<int>(block.size());
    out.frames.insert(out.frames.end(), block.begin(), block.end());
    out.events.push_back(std::move(moved));
    if (k < gaps.size()) out.frames.insert(out.frames.end(), gaps[k].begin(), gaps[k].end());
  }
  const Rows tail = slice(ev.back().end, static_cast<int>(trace.frames.size()));
  out.frames.insert(out.frames.end(), tail.begin(), tail.end());
  return out;
}

RawTrace drop_block(const RawTrace& trace, std::size_t victim, std::size_t min_frames,
                    const GenContext& gc, Rng& rng) {
  const Event& gone = trace.events[victim];
  const int len = gone.end - gone.start;
  RawTrace out;
  out.id = trace.id;
  out.has_annotations = trace.has_annotations;
  out.frames.reserve(trace.frames.size());
  for (std::size_t t = 0; t < trace.frames.size(); ++t) {
    const int ti = static_cast<int>(t);
    if (ti >= gone.start && ti < gone.end) continue;
    out.frames.push_back(trace.frames[t]);
  }
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    if (i == victim) continue;
    Event ev = trace.events[i];
    if (ev.start >= gone.end) {
      ev.start -= len;
      ev.end -= len;
    }
    out.events.push_back(std::move(ev));
  }
  if (out.frames.size() < min_frames) emit_nav(out.frames, min_frames - out.frames.size(), gc, rng);
  return out;
}

}  // namespace

bool ObjectSpec::supports(std::string_view action) const {
  return std::find(actions.begin(), actions.end(), action) != actions.end();
}

std::vector<ObjectSpec> default_objects() {
  const std::vector<std::string> all = {"heat", "clean", "slice", "cool", "place", "pick"};
  std::vector<ObjectSpec> out;
  for (const char* food : {"apple", "egg", "potato", "tomato", "bread", "lettuce"}) {
    out.push_back({food, all});
  }
  out.push_back({"cup", {"clean", "cool", "place", "pick"}});
  out.push_back({"book", {"place", "pick"}});
  return out;
}

std::vector<ReceptacleSpec> default_receptacles() {
  return {{"plate", "in"},  {"bowl", "in"},       {"pan", "in"},  {"box", "in"},
          {"shelf", "on"},  {"countertop", "on"}, {"grill", "on"}};
}

Vocabulary vocabulary_for(const DatasetConfig& cfg) {
  Vocabulary vocab;
  for (const ObjectSpec& obj : cfg.objects) vocab.objects.push_back(obj.name);
  for (const ReceptacleSpec& r : cfg.receptacles) vocab.receptacles.push_back(r.name);
  return vocab;
}

RawTrace execute_plan(const TaskSpec& spec, const DatasetConfig& cfg, std::uint64_t seed) {
  validate_config(cfg);
  check_spec(spec, cfg);
  const GenContext gc(cfg);
  const TaskGraph graph = spec_graph(spec, QueryScheme::StateRelation);
  const std::size_t count = count_extensions(graph);
  if (count > kMaxSampledExtensions) {
    raise(Errc::size_limit_exceeded,
          "task has " + std::to_string(count) + " linear extensions; uniform sampling caps at " +
              std::to_string(kMaxSampledExtensions));
  }
  const ExtensionSet exts = linear_extensions(graph, count);
  Rng rng(seed);
  const std::vector<int>& order = exts.sequences[rng.index(exts.sequences.size())];
  const std::vector<int> actions = spec.shape.actions();

  RawTrace trace;
  for (std::size_t k = 0; k < order.size(); ++k) {
    emit_block(trace, actions[static_cast<std::size_t>(order[k])], spec, gc, rng);
    const std::size_t slot_end = (k + 1) * static_cast<std::size_t>(cfg.slot_frames);
    emit_nav(trace.frames, slot_end - trace.frames.size(), gc, rng);
  }
  return trace;
}

Sample make_negative(const Sample& positive, std::string_view kind, std::uint64_t seed,
                     const DatasetConfig& cfg, const NegativeContext& ctx) {
  if (std::find(kNegativeKinds.begin(), kNegativeKinds.end(), kind) == kNegativeKinds.end()) {
    raise(Errc::invalid_argument, "unknown negative kind '" + std::string(kind) + "'");
  }
  if (!positive.label) raise(Errc::invalid_argument, "negatives derive from positive samples");

  Rng rng(seed);
  const TaskSpec spec = spec_of(positive);
  Sample neg = positive;
  neg.label = false;
  neg.negative_kind = std::string(kind);

  const auto forbidden_shape = [&](const std::string& name) {
    return std::find(ctx.forbidden_shapes.begin(), ctx.forbidden_shapes.end(), name) !=
           ctx.forbidden_shapes.end();
  };

  if (kind == "reordered") {
    if (spec.shape.groups.size() > 1) {
      std::vector<std::size_t> positions(spec.shape.groups.size() - 1);
      std::iota(positions.begin(), positions.end(), std::size_t{0});
      rng.shuffle(positions);
      for (std::size_t pos : positions) {
        TaskSpec mutated = spec;
        std::swap(mutated.shape.groups[pos], mutated.shape.groups[pos + 1]);
        if (!shape_valid(mutated.shape)) continue;
        if (forbidden_shape(mutated.shape.name())) continue;
        Sample candidate = neg;
        set_claim(candidate, mutated, rng);
        if (!oracle_passes(candidate.graph, candidate.trace, cfg)) return candidate;
      }
    }
    raise(Errc::cannot_falsify, "no group swap falsifies '" + positive.shape_name + "'");
  }

  if (kind == "substituted") {
    const ObjectSpec& obj = object_for(cfg, spec.object);
    struct Candidate {
      std::size_t group;
      std::size_t slot;
      int action;
    };
    std::vector<Candidate> candidates;
    for (std::size_t g = 0; g < spec.shape.groups.size(); ++g) {
      for (std::size_t s = 0; s < spec.shape.groups[g].size(); ++s) {
        const int old = spec.shape.groups[g][s];
        const std::string_view old_verb = kActions[static_cast<std::size_t>(old)];
        if (has_step(ctx.preserve_steps, old_verb, spec.object)) continue;
        for (int next = 0; next < static_cast<int>(kActions.size()); ++next) {
          const std::string_view verb = kActions[static_cast<std::size_t>(next)];
          if (spec.shape.contains(next)) continue;
          if (!obj.supports(verb)) continue;
          if (has_step(ctx.forbidden_steps, verb, spec.object)) continue;
          candidates.push_back({g, s, next});
        }
      }
    }
    rng.shuffle(candidates);
    for (const Candidate& c : candidates) {
      TaskSpec mutated = spec;
      mutated.shape.groups[c.group][c.slot] = c.action;
      std::sort(mutated.shape.groups[c.group].begin(), mutated.shape.groups[c.group].end());
      if (!shape_valid(mutated.shape)) continue;
      if (forbidden_shape(mutated.shape.name())) continue;
      if (c.action == kPlace && mutated.receptacle.empty()) {
        const ReceptacleSpec& r = cfg.receptacles[rng.index(cfg.receptacles.size())];
        mutated.receptacle = r.name;
        mutated.relation = r.relation;
      }
      Sample candidate = neg;
      set_claim(candidate, mutated, rng);
      if (!oracle_passes(candidate.graph, candidate.trace, cfg)) return candidate;
    }
    raise(Errc::cannot_falsify, "no sub-task substitution falsifies '" + positive.shape_name + "'");
  }

  if (kind == "trace_shuffled") {
    const std::size_t blocks = positive.trace.events.size();
    if (blocks < 2) {
      raise(Errc::cannot_falsify, "single-block trace cannot be order-violated");
    }
    std::vector<std::size_t> identity(blocks);
    std::iota(identity.begin(), identity.end(), std::size_t{0});
    for (int attempt = 0; attempt < 24; ++attempt) {
      std::vector<std::size_t> perm = identity;
      rng.shuffle(perm);
      if (perm == identity) continue;
      Sample candidate = neg;
      candidate.trace = reorder_blocks(positive.trace, perm);
      if (!oracle_passes(candidate.graph, candidate.trace, cfg)) return candidate;
    }
    raise(Errc::cannot_falsify, "no block order falsifies '" + positive.shape_name + "'");
  }

  // trace_dropped
  const GenContext gc(cfg);
  const std::size_t min_frames =
      positive.graph.nodes.size() * static_cast<std::size_t>(cfg.window_frames);
  std::vector<std::size_t> victims(positive.trace.events.size());
  std::iota(victims.begin(), victims.end(), std::size_t{0});
  rng.shuffle(victims);
  for (std::size_t victim : victims) {
    Sample candidate = neg;
    candidate.trace = drop_block(positive.trace, victim, min_frames, gc, rng);
    if (!oracle_passes(candidate.graph, candidate.trace, cfg)) return candidate;
  }
  raise(Errc::cannot_falsify, "no dropped block falsifies '" + positive.shape_name + "'");
}

const std::vector<Sample>& Dataset::split(std::string_view name) const {
  if (name == "train") return train;
  if (name == "novel_tasks") return novel_tasks;
  if (name == "novel_steps") return novel_steps;
  if (name == "abstraction") return abstraction;
  raise(Errc::invalid_argument, "unknown split '" + std::string(name) + "'");
}

std::vector<const Sample*> Dataset::all() const {
  std::vector<const Sample*> out;
  out.reserve(train.size() + novel_tasks.size() + novel_steps.size() + abstraction.size());
  for (const auto* split : {&train, &novel_tasks, &novel_steps, &abstraction}) {
    for (const Sample& s : *split) out.push_back(&s);
  }
  return out;
}

namespace {

struct SplitPlan {
  std::string name;
  std::size_t size = 0;
  std::array<std::vector<std::size_t>, 6> shapes_by_complexity;
  NegativeContext ctx;
};

bool abstract_render_differs(const TaskShape& shape) {
  for (int a : {kHeat, kClean, kCool}) {
    if (shape.contains(a)) return true;
  }
  return description_forms(shape).back() == DescriptionForm::goal;
}

}  // namespace

Dataset build_dataset(const DatasetConfig& cfg) {
  validate_config(cfg);
  Dataset ds;
  ds.vocab = vocabulary_for(cfg);
  const std::vector<TaskShape>& pool = default_task_pool();

  // Hold out mid-size compositions for novel_tasks. Complexity 1 and 6 stay
  // on the train side so every difficulty bucket keeps coverage there.
  std::vector<std::size_t> holdable;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const int c = pool[i].complexity();
    if (c >= 2 && c <= 5) holdable.push_back(i);
  }
  if (cfg.holdout_shapes > holdable.size()) {
    raise(Errc::infeasible_split, "cannot hold out " + std::to_string(cfg.holdout_shapes) +
                                      " task shapes from a pool of " +
                                      std::to_string(holdable.size()) + " candidates");
  }
  Rng shape_rng(derive_seed(cfg.seed, "holdout_shapes", 0));
  shape_rng.shuffle(holdable);
  std::set<std::string> holdout_shapes;
  for (std::size_t i = 0; i < cfg.holdout_shapes; ++i) {
    holdout_shapes.insert(pool[holdable[i]].name());
  }
  ds.holdout_shape_names.assign(holdout_shapes.begin(), holdout_shapes.end());

  // Hold out (action, object) steps for novel_steps: state-changing actions
  // only, at most one per object so no object loses broad coverage.
  std::vector<std::pair<std::string, std::string>> step_pool;
  for (const ObjectSpec& obj : cfg.objects) {
    for (const char* action : {"heat", "clean", "slice", "cool"}) {
      if (obj.supports(action)) step_pool.emplace_back(action, obj.name);
    }
  }
  Rng step_rng(derive_seed(cfg.seed, "holdout_steps", 0));
  step_rng.shuffle(step_pool);
  std::set<std::string> step_objects;
  for (const auto& pair : step_pool) {
    if (ds.holdout_step_pairs.size() == cfg.holdout_steps) break;
    if (step_objects.insert(pair.second).second) ds.holdout_step_pairs.push_back(pair);
  }
  if (ds.holdout_step_pairs.size() < cfg.holdout_steps) {
    raise(Errc::infeasible_split,
          "cannot hold out " + std::to_string(cfg.holdout_steps) + " (action, object) steps");
  }
  std::sort(ds.holdout_step_pairs.begin(), ds.holdout_step_pairs.end());

  std::vector<std::string> train_shape_names;
  for (const TaskShape& shape : pool) {
    if (!holdout_shapes.count(shape.name())) train_shape_names.push_back(shape.name());
  }

  // Objects usable for a shape under the split's step rule: novel_steps
  // samples must exhibit a held-out step, every other split must avoid them.
  const auto eligible_objects = [&](const TaskShape& shape, bool want_novel_step) {
    std::vector<const ObjectSpec*> out;
    for (const ObjectSpec& obj : cfg.objects) {
      bool supported = true;
      bool novel = false;
      for (int a : shape.actions()) {
        const std::string_view verb = kActions[static_cast<std::size_t>(a)];
        if (!obj.supports(verb)) {
          supported = false;
          break;
        }
        if (has_step(ds.holdout_step_pairs, verb, obj.name)) novel = true;
      }
      if (supported && novel == want_novel_step) out.push_back(&obj);
    }
    return out;
  };

  const auto plan_for = [&](std::string_view name, std::size_t size) {
    SplitPlan plan;
    plan.name = std::string(name);
    plan.size = size;
    const bool novel_steps = name == "novel_steps";
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const TaskShape& shape = pool[i];
      const bool held = holdout_shapes.count(shape.name()) > 0;
      if ((name == "novel_tasks") != held) continue;
      if (name == "abstraction" && !abstract_render_differs(shape)) continue;
      if (eligible_objects(shape, novel_steps).empty()) continue;
      plan.shapes_by_complexity[static_cast<std::size_t>(shape.complexity() - 1)].push_back(i);
    }
    if (name == "novel_tasks") {
      plan.ctx.forbidden_shapes = train_shape_names;
      plan.ctx.forbidden_steps = ds.holdout_step_pairs;
    } else {
      plan.ctx.forbidden_shapes = ds.holdout_shape_names;
      if (novel_steps) {
        plan.ctx.preserve_steps = ds.holdout_step_pairs;
      } else {
        plan.ctx.forbidden_steps = ds.holdout_step_pairs;
      }
    }
    if (size > 0) {
      double weight = 0.0;
      for (std::size_t c = 0; c < plan.shapes_by_complexity.size(); ++c) {
        if (!plan.shapes_by_complexity[c].empty()) weight += cfg.complexity_weights[c];
      }
      if (weight <= 0.0) {
        raise(Errc::infeasible_split, "no eligible task shapes for split '" + plan.name + "'");
      }
    }
    return plan;
  };

  const auto gen_sample = [&](const SplitPlan& plan, std::size_t index) {
    Rng rng(derive_seed(cfg.seed, plan.name, index));
    const double frac = cfg.negative_fraction;
    const auto di = static_cast<double>(index);
    const bool negative = std::floor((di + 1.0) * frac) > std::floor(di * frac);
    // Round-robin over the negative's ordinal, not the sample index: at
    // fraction 1/2 the raw indices of negatives share one parity and would
    // starve half the kinds.
    const auto negative_ordinal = static_cast<std::size_t>(std::floor(di * frac));

    for (int attempt = 0; attempt < 64; ++attempt) {
      double total = 0.0;
      for (std::size_t c = 0; c < plan.shapes_by_complexity.size(); ++c) {
        if (!plan.shapes_by_complexity[c].empty()) total += cfg.complexity_weights[c];
      }
      double roll = rng.uniform(0.0, total);
      std::size_t chosen = 0;
      for (std::size_t c = 0; c < plan.shapes_by_complexity.size(); ++c) {
        if (plan.shapes_by_complexity[c].empty()) continue;
        chosen = c;
        roll -= cfg.complexity_weights[c];
        if (roll < 0.0) break;
      }
      const auto& bucket = plan.shapes_by_complexity[chosen];
      const TaskShape& shape = pool[bucket[rng.index(bucket.size())]];
      const auto objects = eligible_objects(shape, plan.name == "novel_steps");
      if (objects.empty()) continue;

      TaskSpec spec;
      spec.shape = shape;
      spec.object = objects[rng.index(objects.size())]->name;
      if (shape.contains(kPlace)) {
        const ReceptacleSpec& r = cfg.receptacles[rng.index(cfg.receptacles.size())];
        spec.receptacle = r.name;
        spec.relation = r.relation;
      }

      Sample sample;
      sample.split = plan.name;
      char id[32];
      std::snprintf(id, sizeof id, "%s-%06zu", plan.name.c_str(), index);
      sample.id = id;

      // Segment geometry can defeat a valid plan (two blocks sharing every
      // window they touch), so realization is rejection-checked.
      const TaskGraph claim = spec_graph(spec, QueryScheme::StateRelation);
      bool realized = false;
      for (int t = 0; t < 50 && !realized; ++t) {
        sample.trace = execute_plan(spec, cfg, rng.next_u64());
        realized = oracle_passes(claim, sample.trace, cfg);
      }
      if (!realized) continue;
      sample.trace.id = sample.id;
      sample.label = true;
      set_claim(sample, spec, rng);
      if (!negative) return sample;

      for (std::size_t k = 0; k < kNegativeKinds.size(); ++k) {
        const std::string_view kind = kNegativeKinds[(negative_ordinal + k) % kNegativeKinds.size()];
        try {
          return make_negative(sample, kind, rng.next_u64(), cfg, plan.ctx);
        } catch (const Error& e) {
          if (e.code() != Errc::cannot_falsify) throw;
        }
      }
    }
    raise(Errc::infeasible_split,
          "could not generate sample " + std::to_string(index) + " of split '" + plan.name + "'");
  };

  const std::array<std::pair<std::vector<Sample>*, std::size_t>, 4> splits = {{
      {&ds.train, cfg.train},
      {&ds.novel_tasks, cfg.novel_tasks},
      {&ds.novel_steps, cfg.novel_steps},
      {&ds.abstraction, cfg.abstraction},
  }};
  for (std::size_t s = 0; s < splits.size(); ++s) {
    const SplitPlan plan = plan_for(kSplitNames[s], splits[s].second);
    splits[s].first->reserve(splits[s].second);
    for (std::size_t i = 0; i < splits[s].second; ++i) {
      splits[s].first->push_back(gen_sample(plan, i));
    }
  }
  return ds;
}

DatasetStats dataset_stats(const Dataset& ds) {
  DatasetStats st;
  for (const Sample* s : ds.all()) {
    ++st.samples;
    ++st.per_split[s->split];
    if (s->label) {
      ++st.positives;
    } else {
      ++st.negatives;
      ++st.per_negative_kind[s->negative_kind];
    }
    st.mean_subtasks += s->complexity;
    st.mean_orderings += s->ordering;
    st.mean_extensions += static_cast<double>(count_extensions(s->graph));
    st.mean_description_words +=
        1.0 + static_cast<double>(std::count(s->description.begin(), s->description.end(), ' '));
  }
  if (st.samples > 0) {
    const auto n = static_cast<double>(st.samples);
    st.mean_subtasks /= n;
    st.mean_orderings /= n;
    st.mean_extensions /= n;
    st.mean_description_words /= n;
  }
  return st;
}

}  // namespace veriplan
