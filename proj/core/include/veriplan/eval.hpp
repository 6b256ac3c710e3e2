#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "veriplan/datagen.hpp"
#include "veriplan/extensions.hpp"
#include "veriplan/scorer.hpp"
#include "veriplan/semparse.hpp"
#include "veriplan/task_shape.hpp"
#include "veriplan/verify.hpp"

namespace veriplan {

struct EvalOptions {
  double threshold = default_decision_threshold();
  int window = 20;
  std::size_t extension_cap = kDefaultExtensionCap;
  // Per-pair cutoff for the query-detection confusion matrices; unrelated to
  // the verification threshold.
  double detection_threshold = 0.5;
};

struct BinaryCounts {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

  std::size_t support() const { return tp + fp + tn + fn; }
  double accuracy() const;
  double precision() const;
  double recall() const;
  double f1() const;  // 2PR/(P+R), 0 when P+R = 0
};

struct SplitMetrics {
  std::string split;
  BinaryCounts counts;
};

struct BucketMetrics {
  int bucket = 0;  // complexity or ordering value
  BinaryCounts counts;
};

struct DetectionRow {
  std::string cls;  // sub-task action, fixed order heat..pick
  BinaryCounts counts;
};

struct MetricsReport {
  std::string scorer;
  double threshold = 0.0;
  int window = 0;
  BinaryCounts overall;
  std::vector<SplitMetrics> per_split;
  std::vector<BucketMetrics> per_complexity;  // ascending
  std::vector<BucketMetrics> per_ordering;    // ascending
  std::vector<DetectionRow> detection;
  // Samples whose trace yields fewer segments than queries; predicted
  // negative rather than dropped, so window sweeps stay comparable.
  std::size_t too_few_segments = 0;
};

MetricsReport evaluate(const std::vector<Sample>& samples, const Scorer& scorer,
                       const EvalOptions& options = {});

// Re-segments and re-evaluates per window size.
std::vector<std::pair<int, MetricsReport>> sweep_window(const std::vector<Sample>& samples,
                                                        const Scorer& scorer,
                                                        const std::vector<int>& ks,
                                                        const EvalOptions& base = {});

// Per-sub-task confusion of scorer decisions against annotation truth over
// the aligned pairs of every sample's best alignment.
std::vector<DetectionRow> detection_report(const std::vector<Sample>& samples,
                                           const Scorer& scorer, const EvalOptions& options = {});

std::string report_to_json(const MetricsReport& report);
std::string metrics_csv(const MetricsReport& report);
std::string detection_csv(const std::vector<DetectionRow>& rows);
std::string sweep_csv(const std::vector<std::pair<int, MetricsReport>>& table);

// Re-parses every description under another query scheme, for the
// State+Relation vs Action comparison.
std::vector<Sample> samples_with_scheme(const std::vector<Sample>& samples, QueryScheme scheme,
                                        const Lexicon& lexicon);

}  // namespace veriplan
