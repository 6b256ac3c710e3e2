#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "veriplan/scorer.hpp"
#include "veriplan/task_graph.hpp"
#include "veriplan/task_shape.hpp"
#include "veriplan/trace.hpp"

namespace veriplan {

struct ObjectSpec {
  std::string name;
  std::vector<std::string> actions;

  bool supports(std::string_view action) const;
};

struct ReceptacleSpec {
  std::string name;
  std::string relation;
};

std::vector<ObjectSpec> default_objects();
std::vector<ReceptacleSpec> default_receptacles();

struct DatasetConfig {
  std::uint64_t seed = 7;
  std::size_t train = 500;
  std::size_t novel_tasks = 100;
  std::size_t novel_steps = 100;
  std::size_t abstraction = 100;
  double negative_fraction = 0.5;
  std::size_t feature_dim = 64;
  double feature_noise = 0.1;
  int min_block_frames = 10;
  int max_block_frames = 18;
  // Each sub-task block starts its own fixed-length slot; navigation frames
  // fill the remainder. Slot alignment keeps one event per window at every
  // window length up to slot_frames, so window sweeps stay comparable.
  int slot_frames = 40;
  int window_frames = 20;
  // Draw weights for task complexity 1..6; the default mix averages ~4.6
  // sub-tasks per task.
  std::array<double, 6> complexity_weights{1, 1, 2, 4, 6, 6};
  std::size_t holdout_shapes = 6;
  std::size_t holdout_steps = 4;
  std::vector<ObjectSpec> objects = default_objects();
  std::vector<ReceptacleSpec> receptacles = default_receptacles();
};

Vocabulary vocabulary_for(const DatasetConfig& cfg);

struct Sample {
  std::string id;
  std::string split;
  std::string description;
  TaskGraph graph;
  RawTrace trace;
  bool label = true;
  std::string negative_kind;  // empty for positives
  std::string shape_name;
  int complexity = 0;
  int ordering = 0;
};

inline constexpr std::array<std::string_view, 4> kNegativeKinds = {
    "reordered", "substituted", "trace_shuffled", "trace_dropped"};

// Split-hygiene constraints applied when mutating a positive into a negative:
// the mutated claim may not collide with forbidden shape signatures, may not
// introduce forbidden (action, object) steps, and may not substitute away a
// step the sample's split is required to exhibit.
struct NegativeContext {
  std::vector<std::string> forbidden_shapes;
  std::vector<std::pair<std::string, std::string>> forbidden_steps;
  std::vector<std::pair<std::string, std::string>> preserve_steps;
};

// Emits the annotated trace realizing one uniformly drawn linear extension of
// the task: one feature block per sub-task, navigation filler between blocks
// and at the tail so the trace always yields at least N segments.
RawTrace execute_plan(const TaskSpec& spec, const DatasetConfig& cfg, std::uint64_t seed);

// Derives a label=false sample of the requested kind from a verified positive,
// rejection-checking with the noiseless oracle that no linear extension of the
// claimed graph is realized by the trace.
Sample make_negative(const Sample& positive, std::string_view kind, std::uint64_t seed,
                     const DatasetConfig& cfg, const NegativeContext& ctx = {});

struct Dataset {
  Vocabulary vocab;
  std::vector<Sample> train;
  std::vector<Sample> novel_tasks;
  std::vector<Sample> novel_steps;
  std::vector<Sample> abstraction;
  std::vector<std::string> holdout_shape_names;
  std::vector<std::pair<std::string, std::string>> holdout_step_pairs;

  const std::vector<Sample>& split(std::string_view name) const;
  std::vector<const Sample*> all() const;
};

inline constexpr std::array<std::string_view, 4> kSplitNames = {
    "train", "novel_tasks", "novel_steps", "abstraction"};

Dataset build_dataset(const DatasetConfig& cfg);

struct DatasetStats {
  std::size_t samples = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  double mean_subtasks = 0.0;
  double mean_orderings = 0.0;
  double mean_extensions = 0.0;
  double mean_description_words = 0.0;
  std::map<std::string, std::size_t> per_split;
  std::map<std::string, std::size_t> per_negative_kind;
};

DatasetStats dataset_stats(const Dataset& ds);

}  // namespace veriplan
