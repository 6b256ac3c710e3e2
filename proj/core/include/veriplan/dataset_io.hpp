#pragma once

#include <string>
#include <vector>

#include "veriplan/datagen.hpp"

namespace veriplan {

// One sample as a single JSON object: id, split, label, negative_kind, shape,
// complexity, ordering, description, graph (DOT text), trace {frames, events}.
std::string sample_to_json(const Sample& sample);
Sample sample_from_json(const std::string& text);

// JSON-lines: one sample per line, order preserved.
void write_samples(const std::vector<Sample>& samples, const std::string& path);
std::vector<Sample> read_samples(const std::string& path);

// A bare annotated trace, for feeding single verifications.
std::string trace_to_json(const RawTrace& trace);
RawTrace trace_from_json(const std::string& text);
void write_trace(const RawTrace& trace, const std::string& path);
RawTrace read_trace(const std::string& path);

std::string stats_to_json(const DatasetStats& stats);

// Writes <dir>/<split>.jsonl for each split plus <dir>/stats.json.
DatasetStats write_dataset(const Dataset& ds, const std::string& dir);

}  // namespace veriplan
