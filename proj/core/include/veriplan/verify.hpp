#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "veriplan/align.hpp"
#include "veriplan/extensions.hpp"
#include "veriplan/scorer.hpp"
#include "veriplan/task_graph.hpp"
#include "veriplan/trace.hpp"

namespace veriplan {

double sigmoid(double x);

// Decision threshold sigmoid(log 0.5) = 1/3: a trace verifies when the
// geometric mean of the aligned per-query probabilities reaches 0.5.
double default_decision_threshold();

struct VerifyOptions {
  double threshold = default_decision_threshold();
  std::size_t extension_cap = kDefaultExtensionCap;
};

struct Verdict {
  double probability = 0.0;
  bool label = false;
  std::vector<int> best_extension;       // node ids in execution order
  std::size_t best_extension_index = 0;  // rank within enumeration order
  Alignment best_alignment;              // rows follow best_extension
  std::size_t extensions_tried = 0;
  bool extensions_truncated = false;
};

// Per-(node, segment) clamped log scores; row r is node id r.
ScoreMatrix node_score_matrix(const TaskGraph& graph, const SegmentedTrace& trace,
                              const Scorer& scorer);

// Maximizes the alignment score over every enumerated linear extension, then
// squashes the per-query mean: probability = sigmoid(best / N). Ties across
// extensions keep the lexicographically first one.
Verdict verify(const TaskGraph& graph, const SegmentedTrace& trace, const Scorer& scorer,
               const VerifyOptions& options = {});

// One row per aligned pair of the winning extension:
// extension_index,query_id,segment_index,log_score
std::string alignment_csv(const Verdict& verdict, const ScoreMatrix& node_scores);

}  // namespace veriplan
