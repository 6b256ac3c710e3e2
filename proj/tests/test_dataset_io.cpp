#include "veriplan/dataset_io.hpp"

#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "veriplan/error.hpp"
#include "veriplan/semparse.hpp"

using namespace veriplan;

namespace {

Dataset small_dataset() {
  DatasetConfig cfg;
  cfg.train = 12;
  cfg.novel_tasks = 6;
  cfg.novel_steps = 6;
  cfg.abstraction = 6;
  return build_dataset(cfg);
}

std::filesystem::path temp_dir(const char* leaf) {
  const auto dir = std::filesystem::temp_directory_path() / leaf;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
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

TEST_CASE("sample json round-trips byte for byte") {
  const Dataset ds = small_dataset();
  for (const Sample* s : ds.all()) {
    const std::string text = sample_to_json(*s);
    const Sample back = sample_from_json(text);
    CHECK(sample_to_json(back) == text);
    CHECK(back.graph == s->graph);
    CHECK(back.trace.frames == s->trace.frames);
    CHECK(back.trace.events == s->trace.events);
  }
}

TEST_CASE("stored descriptions parse back to the stored graph") {
  const Dataset ds = small_dataset();
  Lexicon lex;
  for (const ObjectSpec& o : default_objects()) lex.objects.push_back(o.name);
  for (const ReceptacleSpec& r : default_receptacles()) lex.receptacles.push_back(r.name);
  for (const Sample* s : ds.all()) {
    CAPTURE(s->description);
    CHECK(parse_description(s->description, lex) == s->graph);
  }
}

TEST_CASE("jsonl files preserve sample order") {
  const Dataset ds = small_dataset();
  const auto dir = temp_dir("veriplan_io_order");
  const std::string path = (dir / "train.jsonl").string();

  write_samples(ds.train, path);
  const std::vector<Sample> back = read_samples(path);
  REQUIRE(back.size() == ds.train.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].id == ds.train[i].id);
    CHECK(sample_to_json(back[i]) == sample_to_json(ds.train[i]));
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("blank lines in a jsonl file are skipped") {
  const Dataset ds = small_dataset();
  const auto dir = temp_dir("veriplan_io_blank");
  const std::string path = (dir / "sparse.jsonl").string();
  {
    std::ofstream out(path);
    out << '\n' << sample_to_json(ds.train[0]) << "\n\n" << sample_to_json(ds.train[1]) << '\n';
  }
  const std::vector<Sample> back = read_samples(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].id == ds.train[0].id);
  CHECK(back[1].id == ds.train[1].id);
  std::filesystem::remove_all(dir);
}

TEST_CASE("trace json round-trips, optional event fields stay optional") {
  const Dataset ds = small_dataset();
  const RawTrace& trace = ds.train.front().trace;
  const std::string text = trace_to_json(trace);
  const RawTrace back = trace_from_json(text);
  CHECK(back.id == trace.id);
  CHECK(back.frames == trace.frames);
  CHECK(back.events == trace.events);
  CHECK(trace_to_json(back) == text);

  // An event without a receptacle serializes without the key.
  RawTrace bare;
  bare.id = "t";
  bare.frames = {{1.0, 0.0}};
  bare.events = {{0, 1, "heat", "apple", "", ""}};
  const std::string bare_text = trace_to_json(bare);
  CHECK(bare_text.find("receptacle") == std::string::npos);
  CHECK(trace_from_json(bare_text).events == bare.events);

  const auto dir = temp_dir("veriplan_io_trace");
  const std::string path = (dir / "trace.json").string();
  write_trace(trace, path);
  const RawTrace reread = read_trace(path);
  CHECK(trace_to_json(reread) == text);
  std::filesystem::remove_all(dir);
}

TEST_CASE("malformed payloads are rejected with syntax errors") {
  CHECK(code_of([] { sample_from_json("not json"); }) == Errc::syntax_error);
  CHECK(code_of([] { sample_from_json("{}"); }) == Errc::syntax_error);
  CHECK(code_of([] { trace_from_json("[1,2,3]"); }) == Errc::syntax_error);
  CHECK(code_of([] { read_samples("/nonexistent/nowhere.jsonl"); }) == Errc::invalid_argument);
  CHECK(code_of([] { read_trace("/nonexistent/nowhere.json"); }) == Errc::invalid_argument);
}

TEST_CASE("stats json carries every field") {
  const Dataset ds = small_dataset();
  const DatasetStats stats = dataset_stats(ds);
  const auto j = nlohmann::json::parse(stats_to_json(stats));
  CHECK(j.at("samples").get<std::size_t>() == stats.samples);
  CHECK(j.at("positives").get<std::size_t>() == stats.positives);
  CHECK(j.at("negatives").get<std::size_t>() == stats.negatives);
  CHECK(j.at("mean_subtasks").get<double>() == doctest::Approx(stats.mean_subtasks));
  CHECK(j.at("per_split").at("train").get<std::size_t>() == ds.train.size());
  CHECK(j.at("per_negative_kind").size() == stats.per_negative_kind.size());
  for (const auto& [kind, count] : stats.per_negative_kind) {
    CHECK(j.at("per_negative_kind").at(kind).get<std::size_t>() == count);
  }
}

TEST_CASE("write_dataset lays out one jsonl per split plus stats") {
  const Dataset ds = small_dataset();
  const auto dir = temp_dir("veriplan_io_dataset");
  const DatasetStats stats = write_dataset(ds, dir.string());
  CHECK(stats.samples == 30);

  for (std::string_view split : kSplitNames) {
    const auto path = dir / (std::string(split) + ".jsonl");
    CAPTURE(path.string());
    REQUIRE(std::filesystem::exists(path));
    const std::vector<Sample> back = read_samples(path.string());
    CHECK(back.size() == ds.split(split).size());
    for (const Sample& s : back) CHECK(s.split == split);
  }

  REQUIRE(std::filesystem::exists(dir / "stats.json"));
  std::ifstream in(dir / "stats.json");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(nlohmann::json::parse(text).at("samples").get<std::size_t>() == 30);
  std::filesystem::remove_all(dir);
}
