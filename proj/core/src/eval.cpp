#include "veriplan/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "veriplan/error.hpp"

namespace veriplan {

double BinaryCounts::accuracy() const {
  const std::size_t n = support();
  return n == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(n);
}

double BinaryCounts::precision() const {
  return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double BinaryCounts::recall() const {
  return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double BinaryCounts::f1() const {
  const double p = precision();
  const double r = recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

namespace {

void tally(BinaryCounts& counts, bool truth, bool predicted) {
  if (truth) {
    predicted ? ++counts.tp : ++counts.fn;
  } else {
    predicted ? ++counts.fp : ++counts.tn;
  }
}

void tally_detection(std::map<std::string, BinaryCounts>& classes, const Sample& sample,
                     const Verdict& verdict, const SegmentedTrace& trace, const Scorer& scorer,
                     double cutoff) {
  for (std::size_t j = 0; j < verdict.best_extension.size(); ++j) {
    const Query& query = sample.graph.nodes[static_cast<std::size_t>(verdict.best_extension[j])];
    const Segment& seg = trace.segments[static_cast<std::size_t>(verdict.best_alignment.segment_of[j])];
    const bool truth = query_holds(query, seg);
    const bool predicted = scorer.score(query, seg) >= cutoff;
    tally(classes[std::string(query_action(query))], truth, predicted);
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

MetricsReport run_eval(const std::vector<Sample>& samples, const Scorer& scorer,
                       const EvalOptions& options, bool want_detection, bool strict_annotations) {
  if (samples.empty()) raise(Errc::empty_dataset, "no samples to evaluate");

  MetricsReport report;
  report.scorer = scorer.name();
  report.threshold = options.threshold;
  report.window = options.window;

  std::map<std::string, BinaryCounts> splits;
  std::map<int, BinaryCounts> by_complexity;
  std::map<int, BinaryCounts> by_ordering;
  std::map<std::string, BinaryCounts> detection;

  const VerifyOptions vopts{options.threshold, options.extension_cap};
  for (const Sample& sample : samples) {
    bool predicted = false;
    try {
      const SegmentedTrace trace = segment(sample.trace, options.window);
      const Verdict verdict = verify(sample.graph, trace, scorer, vopts);
      predicted = verdict.label;
      if (want_detection) {
        if (sample.trace.has_annotations) {
          tally_detection(detection, sample, verdict, trace, scorer, options.detection_threshold);
        } else if (strict_annotations) {
          raise(Errc::missing_annotations, "sample '" + sample.id + "' has no annotations");
        }
      }
    } catch (const Error& e) {
      if (e.code() != Errc::too_few_segments) throw;
      ++report.too_few_segments;
    }
    tally(splits[sample.split], sample.label, predicted);
    tally(by_complexity[sample.complexity], sample.label, predicted);
    tally(by_ordering[sample.ordering], sample.label, predicted);
    tally(report.overall, sample.label, predicted);
  }

  for (std::string_view name : kSplitNames) {
    const auto hit = splits.find(std::string(name));
    if (hit == splits.end()) continue;
    report.per_split.push_back({hit->first, hit->second});
    splits.erase(hit);
  }
  for (const auto& [name, counts] : splits) report.per_split.push_back({name, counts});
  for (const auto& [bucket, counts] : by_complexity) report.per_complexity.push_back({bucket, counts});
  for (const auto& [bucket, counts] : by_ordering) report.per_ordering.push_back({bucket, counts});
  for (std::string_view action : kActions) {
    const auto hit = detection.find(std::string(action));
    if (hit != detection.end()) report.detection.push_back({hit->first, hit->second});
  }
  return report;
}

}  // namespace

MetricsReport evaluate(const std::vector<Sample>& samples, const Scorer& scorer,
                       const EvalOptions& options) {
  return run_eval(samples, scorer, options, true, false);
}

std::vector<std::pair<int, MetricsReport>> sweep_window(const std::vector<Sample>& samples,
                                                        const Scorer& scorer,
                                                        const std::vector<int>& ks,
                                                        const EvalOptions& base) {
  if (ks.empty()) raise(Errc::invalid_argument, "window sweep needs at least one k");
  std::vector<std::pair<int, MetricsReport>> table;
  for (int k : ks) {
    if (k < 1) raise(Errc::invalid_argument, "window size must be positive");
    EvalOptions options = base;
    options.window = k;
    table.emplace_back(k, evaluate(samples, scorer, options));
  }
  return table;
}

std::vector<DetectionRow> detection_report(const std::vector<Sample>& samples,
                                           const Scorer& scorer, const EvalOptions& options) {
  return run_eval(samples, scorer, options, true, true).detection;
}

std::string report_to_json(const MetricsReport& report) {
  using json = nlohmann::ordered_json;
  const auto counts_json = [](const BinaryCounts& c) {
    json j;
    j["support"] = c.support();
    j["tp"] = c.tp;
    j["fp"] = c.fp;
    j["tn"] = c.tn;
    j["fn"] = c.fn;
    j["accuracy"] = c.accuracy();
    j["precision"] = c.precision();
    j["recall"] = c.recall();
    j["f1"] = c.f1();
    return j;
  };
  json j;
  j["scorer"] = report.scorer;
  j["threshold"] = report.threshold;
  j["window"] = report.window;
  j["overall"] = counts_json(report.overall);
  j["per_split"] = json::array();
  for (const SplitMetrics& row : report.per_split) {
    json entry = counts_json(row.counts);
    entry["split"] = row.split;
    j["per_split"].push_back(std::move(entry));
  }
  const auto buckets = [&](const std::vector<BucketMetrics>& rows, const char* key) {
    json arr = json::array();
    for (const BucketMetrics& row : rows) {
      json entry = counts_json(row.counts);
      entry[key] = row.bucket;
      arr.push_back(std::move(entry));
    }
    return arr;
  };
  j["per_complexity"] = buckets(report.per_complexity, "complexity");
  j["per_ordering"] = buckets(report.per_ordering, "ordering");
  j["detection"] = json::array();
  for (const DetectionRow& row : report.detection) {
    json entry;
    entry["class"] = row.cls;
    entry["pairs"] = row.counts.support();
    entry["precision"] = row.counts.precision();
    entry["recall"] = row.counts.recall();
    j["detection"].push_back(std::move(entry));
  }
  j["too_few_segments"] = report.too_few_segments;
  j["notes"] = "samples with fewer segments than queries are predicted negative";
  return j.dump(2);
}

std::string metrics_csv(const MetricsReport& report) {
  std::ostringstream out;
  out << "section,key,support,accuracy,precision,recall,f1\n";
  const auto row = [&](const std::string& section, const std::string& key,
                       const BinaryCounts& c) {
    out << section << ',' << key << ',' << c.support() << ',' << format_double(c.accuracy())
        << ',' << format_double(c.precision()) << ',' << format_double(c.recall()) << ','
        << format_double(c.f1()) << '\n';
  };
  row("overall", "all", report.overall);
  for (const SplitMetrics& split : report.per_split) row("split", split.split, split.counts);
  for (const BucketMetrics& b : report.per_complexity) {
    row("complexity", std::to_string(b.bucket), b.counts);
  }
  for (const BucketMetrics& b : report.per_ordering) {
    row("ordering", std::to_string(b.bucket), b.counts);
  }
  return out.str();
}

std::string detection_csv(const std::vector<DetectionRow>& rows) {
  std::ostringstream out;
  out << "class,pairs,tp,fp,tn,fn,precision,recall\n";
  for (const DetectionRow& row : rows) {
    out << row.cls << ',' << row.counts.support() << ',' << row.counts.tp << ',' << row.counts.fp
        << ',' << row.counts.tn << ',' << row.counts.fn << ','
        << format_double(row.counts.precision()) << ',' << format_double(row.counts.recall())
        << '\n';
  }
  return out.str();
}

std::string sweep_csv(const std::vector<std::pair<int, MetricsReport>>& table) {
  std::ostringstream out;
  out << "k,split,support,accuracy,f1,too_few_segments\n";
  for (const auto& [k, report] : table) {
    out << k << ",all," << report.overall.support() << ','
        << format_double(report.overall.accuracy()) << ',' << format_double(report.overall.f1())
        << ',' << report.too_few_segments << '\n';
    for (const SplitMetrics& split : report.per_split) {
      out << k << ',' << split.split << ',' << split.counts.support() << ','
          << format_double(split.counts.accuracy()) << ',' << format_double(split.counts.f1())
          << ',' << report.too_few_segments << '\n';
    }
  }
  return out.str();
}

std::vector<Sample> samples_with_scheme(const std::vector<Sample>& samples, QueryScheme scheme,
                                        const Lexicon& lexicon) {
  std::vector<Sample> out;
  out.reserve(samples.size());
  for (const Sample& sample : samples) {
    Sample converted = sample;
    converted.graph = parse_description(sample.description, lexicon, scheme);
    out.push_back(std::move(converted));
  }
  return out;
}

}  // namespace veriplan
