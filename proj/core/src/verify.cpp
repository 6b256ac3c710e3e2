#include "veriplan/verify.hpp"

#include <cmath>
#include <sstream>

#include "veriplan/error.hpp"

namespace veriplan {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double default_decision_threshold() { return sigmoid(std::log(0.5)); }

ScoreMatrix node_score_matrix(const TaskGraph& graph, const SegmentedTrace& trace,
                              const Scorer& scorer) {
  ScoreMatrix m = ScoreMatrix::filled(graph.nodes.size(), trace.segments.size(), 0.0);
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      m.at(r, c) = clamp_log_prob(scorer.score(graph.nodes[r], trace.segments[c]));
    }
  }
  return m;
}

Verdict verify(const TaskGraph& graph, const SegmentedTrace& trace, const Scorer& scorer,
               const VerifyOptions& options) {
  validate(graph);
  const std::size_t n = graph.nodes.size();
  if (trace.segments.size() < n) {
    raise(Errc::too_few_segments, std::to_string(trace.segments.size()) + " segments for " +
                                      std::to_string(n) + " queries");
  }

  const ScoreMatrix by_node = node_score_matrix(graph, trace, scorer);
  const ExtensionSet extensions = linear_extensions(graph, options.extension_cap);

  Verdict verdict;
  verdict.extensions_tried = extensions.sequences.size();
  verdict.extensions_truncated = extensions.truncated;

  bool first = true;
  ScoreMatrix ordered = ScoreMatrix::filled(n, by_node.cols, 0.0);
  for (std::size_t e = 0; e < extensions.sequences.size(); ++e) {
    const std::vector<int>& extension = extensions.sequences[e];
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t node = static_cast<std::size_t>(extension[j]);
      for (std::size_t c = 0; c < by_node.cols; ++c) ordered.at(j, c) = by_node.at(node, c);
    }
    Alignment alignment = align_dp(ordered);
    // Strict improvement keeps the lexicographically first extension on ties.
    if (first || alignment.score > verdict.best_alignment.score) {
      verdict.best_alignment = std::move(alignment);
      verdict.best_extension = extension;
      verdict.best_extension_index = e;
      first = false;
    }
  }

  verdict.probability = sigmoid(verdict.best_alignment.score / static_cast<double>(n));
  verdict.label = verdict.probability >= options.threshold;
  return verdict;
}

std::string alignment_csv(const Verdict& verdict, const ScoreMatrix& node_scores) {
  std::ostringstream out;
  out << "extension_index,query_id,segment_index,log_score\n";
  for (std::size_t j = 0; j < verdict.best_extension.size(); ++j) {
    const int node = verdict.best_extension[j];
    const int seg = verdict.best_alignment.segment_of[j];
    out << verdict.best_extension_index << ',' << node << ',' << seg << ','
        << node_scores.at(static_cast<std::size_t>(node), static_cast<std::size_t>(seg)) << '\n';
  }
  return out.str();
}

}  // namespace veriplan
