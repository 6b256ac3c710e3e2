#include "veriplan/dataset_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "veriplan/error.hpp"
#include "veriplan/task_graph.hpp"

namespace veriplan {

namespace {

using json = nlohmann::ordered_json;

json event_to_json(const Event& ev) {
  json j;
  j["start"] = ev.start;
  j["end"] = ev.end;
  j["action"] = ev.action;
  j["object"] = ev.object;
  if (!ev.receptacle.empty()) j["receptacle"] = ev.receptacle;
  if (!ev.relation.empty()) j["relation"] = ev.relation;
  return j;
}

Event event_from_json(const json& j) {
  Event ev;
  ev.start = j.at("start").get<int>();
  ev.end = j.at("end").get<int>();
  ev.action = j.at("action").get<std::string>();
  ev.object = j.at("object").get<std::string>();
  ev.receptacle = j.value("receptacle", "");
  ev.relation = j.value("relation", "");
  return ev;
}

json trace_body(const RawTrace& trace) {
  json j;
  j["id"] = trace.id;
  j["has_annotations"] = trace.has_annotations;
  j["frames"] = trace.frames;
  json events = json::array();
  for (const Event& ev : trace.events) events.push_back(event_to_json(ev));
  j["events"] = std::move(events);
  return j;
}

RawTrace trace_from(const json& j) {
  RawTrace trace;
  trace.id = j.value("id", "");
  trace.has_annotations = j.value("has_annotations", true);
  trace.frames = j.at("frames").get<std::vector<std::vector<double>>>();
  for (const json& ev : j.at("events")) trace.events.push_back(event_from_json(ev));
  return trace;
}

json parse_text(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::syntax_error, std::string(what) + ": " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::invalid_argument, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::string sample_to_json(const Sample& sample) {
  json j;
  j["id"] = sample.id;
  j["split"] = sample.split;
  j["label"] = sample.label;
  j["negative_kind"] = sample.negative_kind;
  j["shape"] = sample.shape_name;
  j["complexity"] = sample.complexity;
  j["ordering"] = sample.ordering;
  j["description"] = sample.description;
  j["graph"] = graph_to_dot(sample.graph);
  j["trace"] = trace_body(sample.trace);
  return j.dump();
}

Sample sample_from_json(const std::string& text) {
  const json j = parse_text(text, "bad sample json");
  try {
    Sample sample;
    sample.id = j.at("id").get<std::string>();
    sample.split = j.at("split").get<std::string>();
    sample.label = j.at("label").get<bool>();
    sample.negative_kind = j.value("negative_kind", "");
    sample.shape_name = j.value("shape", "");
    sample.complexity = j.at("complexity").get<int>();
    sample.ordering = j.at("ordering").get<int>();
    sample.description = j.at("description").get<std::string>();
    sample.graph = parse_dot(j.at("graph").get<std::string>());
    sample.trace = trace_from(j.at("trace"));
    return sample;
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::syntax_error, std::string("bad sample json: ") + e.what());
  }
}

void write_samples(const std::vector<Sample>& samples, const std::string& path) {
  std::ofstream out(path);
  if (!out) raise(Errc::invalid_argument, "cannot write '" + path + "'");
  for (const Sample& sample : samples) out << sample_to_json(sample) << '\n';
}

std::vector<Sample> read_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::invalid_argument, "cannot read '" + path + "'");
  std::vector<Sample> samples;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    samples.push_back(sample_from_json(line));
  }
  return samples;
}

std::string trace_to_json(const RawTrace& trace) { return trace_body(trace).dump(); }

RawTrace trace_from_json(const std::string& text) {
  const json j = parse_text(text, "bad trace json");
  try {
    return trace_from(j);
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::syntax_error, std::string("bad trace json: ") + e.what());
  }
}

void write_trace(const RawTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) raise(Errc::invalid_argument, "cannot write '" + path + "'");
  out << trace_to_json(trace) << '\n';
}

RawTrace read_trace(const std::string& path) { return trace_from_json(read_file(path)); }

std::string stats_to_json(const DatasetStats& stats) {
  json j;
  j["samples"] = stats.samples;
  j["positives"] = stats.positives;
  j["negatives"] = stats.negatives;
  j["mean_subtasks"] = stats.mean_subtasks;
  j["mean_orderings"] = stats.mean_orderings;
  j["mean_extensions"] = stats.mean_extensions;
  j["mean_description_words"] = stats.mean_description_words;
  j["per_split"] = stats.per_split;
  j["per_negative_kind"] = stats.per_negative_kind;
  return j.dump(2);
}

DatasetStats write_dataset(const Dataset& ds, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) raise(Errc::invalid_argument, "cannot create directory '" + dir + "': " + ec.message());
  const std::filesystem::path base(dir);
  for (std::string_view name : kSplitNames) {
    write_samples(ds.split(name), (base / (std::string(name) + ".jsonl")).string());
  }
  const DatasetStats stats = dataset_stats(ds);
  std::ofstream out(base / "stats.json");
  if (!out) raise(Errc::invalid_argument, "cannot write '" + (base / "stats.json").string() + "'");
  out << stats_to_json(stats) << '\n';
  return stats;
}

}  // namespace veriplan
