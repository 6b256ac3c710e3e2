#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "veriplan/align.hpp"
#include "veriplan/datagen.hpp"
#include "veriplan/extensions.hpp"
#include "veriplan/scorer.hpp"
#include "veriplan/trace.hpp"

namespace veriplan {

struct TrainConfig {
  double lr = 1e-3;
  std::size_t epochs = 50;
  std::size_t batch = 64;
  std::uint64_t seed = 0;
  int window = 20;
  std::size_t extension_cap = kDefaultExtensionCap;
};

// A sample readied for the epoch loop: segmented once, extensions enumerated
// once. Scores change every step; this does not.
struct PreparedSample {
  std::string id;
  bool label = false;
  std::vector<Query> queries;
  SegmentedTrace trace;
  ExtensionSet extensions;
};

PreparedSample prepare_sample(const Sample& sample, int window, std::size_t extension_cap);

// Snapshot of step (i) for one sample: the winning extension, the score
// matrix it saw (rows in extension order, frozen before the update), and the
// alignment chosen on it.
struct StepTrace {
  std::size_t epoch = 0;
  std::size_t sample = 0;
  std::vector<int> extension;
  ScoreMatrix scores;
  Alignment alignment;
  double probability = 0.0;
  double loss = 0.0;
};
using StepObserver = std::function<void(const StepTrace&)>;

// Flat parameter order: state.w, state.b, relation.w, relation.b, action.w,
// action.b. The trainer and the finite-difference tests share this layout.
std::size_t param_count(const ParametricParams& params);
std::vector<double> flatten(const ParametricParams& params);
void unflatten(const std::vector<double>& flat, ParametricParams& params);

// BCE of one sample's verification probability at the given parameters, with
// the analytic gradient at the frozen argmax (extension, alignment) added
// into grad when non-null. grad must have param_count entries.
double sample_loss(const PreparedSample& prep, const ParametricParams& params,
                   std::vector<double>* grad, StepTrace* trace = nullptr);

struct TrainResult {
  ParametricParams params;
  std::vector<double> epoch_loss;  // mean BCE per epoch
};

// Two-step alternation per mini-batch: (i) parameters frozen, pick each
// sample's best alignment over its extensions; (ii) choices frozen, one Adam
// step on the mean BCE of p = sigmoid(mean aligned log-score). Deterministic
// under seed.
TrainResult train(const std::vector<Sample>& dataset, ParametricParams params,
                  const TrainConfig& config, const StepObserver& observer = {});

}  // namespace veriplan
