#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "veriplan/datagen.hpp"
#include "veriplan/dataset_io.hpp"
#include "veriplan/semparse.hpp"
#include "veriplan/task_graph.hpp"

using namespace veriplan;

namespace {

struct RunResult {
  int status = -1;
  std::string output;  // stdout and stderr interleaved
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(VERIPLAN_BIN) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) result.output.append(buf, n);
  const int rc = pclose(pipe);
  result.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return result;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

std::filesystem::path temp_dir(const char* leaf) {
  const auto dir = std::filesystem::temp_directory_path() / leaf;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("help lists the subcommands") {
  const RunResult r = run("--help");
  CHECK(r.status == 0);
  for (const char* sub : {"generate", "parse", "verify", "align", "ged", "train", "evaluate",
                          "sweep", "templates"}) {
    CAPTURE(sub);
    CHECK(contains(r.output, sub));
  }
}

TEST_CASE("an unknown subcommand exits with 2") {
  const RunResult r = run("frobnicate");
  CHECK(r.status == 2);
}

TEST_CASE("parse prints the query graph") {
  const RunResult r = run("parse 'apple is heated, then cleaned in a sinkbasin'");
  CHECK(r.status == 0);
  CHECK(contains(r.output, "StateQuery(apple,hot)"));
  CHECK(contains(r.output, "StateQuery(apple,clean)"));
  CHECK(contains(r.output, "Step 0 -> Step 1"));

  const RunResult action = run("parse --scheme action 'apple is heated'");
  CHECK(action.status == 0);
  CHECK(contains(action.output, "ActionQuery(heat,apple)"));
}

TEST_CASE("the vocabulary gate is optional") {
  const RunResult lenient = run("parse 'pear is heated'");
  CHECK(lenient.status == 0);
  CHECK(contains(lenient.output, "StateQuery(pear,hot)"));

  const RunResult strict = run("parse --strict-vocab 'pear is heated'");
  CHECK(strict.status == 2);
  CHECK(contains(strict.output, "error: UnknownObject"));

  const RunResult nonsense = run("parse 'the apple explodes'");
  CHECK(nonsense.status == 2);
  CHECK(contains(nonsense.output, "error: NoTemplateMatch"));
}

TEST_CASE("templates dump matches the builtin registry") {
  const RunResult r = run("templates");
  CHECK(r.status == 0);
  CHECK(r.output == TemplateRegistry::builtin().to_tsv());

  const auto dir = temp_dir("veriplan_cli_tpl");
  const auto path = dir / "templates.tsv";
  const RunResult to_file = run("templates --out " + path.string());
  CHECK(to_file.status == 0);
  CHECK(slurp(path) == r.output);
  std::filesystem::remove_all(dir);
}

TEST_CASE("generate writes a reproducible dataset") {
  const auto dir_a = temp_dir("veriplan_cli_gen_a");
  const auto dir_b = temp_dir("veriplan_cli_gen_b");
  const std::string sizes = " --train 8 --novel-tasks 4 --novel-steps 4 --abstraction 4";

  const RunResult a = run("generate --out " + dir_a.string() + sizes);
  CHECK(a.status == 0);
  CHECK(contains(a.output, "train.jsonl: 8 samples"));
  CHECK(contains(a.output, "positives 10  negatives 10"));
  for (const char* split : {"train", "novel_tasks", "novel_steps", "abstraction"}) {
    CHECK(std::filesystem::exists(dir_a / (std::string(split) + ".jsonl")));
  }
  CHECK(std::filesystem::exists(dir_a / "stats.json"));

  const RunResult b = run("generate --out " + dir_b.string() + sizes);
  CHECK(b.status == 0);
  CHECK(slurp(dir_a / "train.jsonl") == slurp(dir_b / "train.jsonl"));

  const RunResult c = run("generate --seed 9 --out " + dir_b.string() + sizes);
  CHECK(c.status == 0);
  CHECK(slurp(dir_a / "train.jsonl") != slurp(dir_b / "train.jsonl"));

  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
}

TEST_CASE("verify answers through its exit code") {
  const auto dir = temp_dir("veriplan_cli_verify");
  const DatasetConfig cfg;
  TaskSpec spec;
  spec.shape = shape_from_name("heat_then_clean");
  spec.object = "apple";
  RawTrace trace = execute_plan(spec, cfg, 3);
  trace.id = "cli-verify";
  const auto trace_path = dir / "trace.json";
  write_trace(trace, trace_path.string());

  const RunResult yes =
      run("verify --description 'apple is heated, then cleaned' --trace " + trace_path.string());
  CHECK(yes.status == 0);
  CHECK(contains(yes.output, "label: verified"));
  CHECK(contains(yes.output, "query 0 -> segment 0"));
  CHECK(contains(yes.output, "query 1 -> segment "));

  const RunResult no =
      run("verify --description 'apple is cooled, then cleaned' --trace " + trace_path.string());
  CHECK(no.status == 1);
  CHECK(contains(no.output, "label: not-verified"));

  // A graph file works in place of a description.
  const auto graph_path = dir / "graph.txt";
  spit(graph_path, graph_to_dot(spec_graph(spec, QueryScheme::StateRelation)));
  const RunResult from_graph =
      run("verify --graph " + graph_path.string() + " --trace " + trace_path.string());
  CHECK(from_graph.status == 0);

  const auto csv_path = dir / "alignment.csv";
  const RunResult with_csv =
      run("verify --graph " + graph_path.string() + " --trace " + trace_path.string() +
          " --alignment-csv " + csv_path.string());
  CHECK(with_csv.status == 0);
  CHECK(contains(slurp(csv_path), "extension_index,query_id,segment_index,log_score"));

  const RunResult no_task = run("verify --trace " + trace_path.string());
  CHECK(no_task.status == 2);
  CHECK(contains(no_task.output, "error: InvalidArgument"));

  const RunResult no_trace =
      run("verify --description 'apple is heated' --trace /nonexistent/trace.json");
  CHECK(no_trace.status == 2);
  CHECK(contains(no_trace.output, "error: InvalidArgument"));

  std::filesystem::remove_all(dir);
}

TEST_CASE("align solves a score csv") {
  const auto dir = temp_dir("veriplan_cli_align");
  const auto path = dir / "scores.csv";
  spit(path,
       "-0.693147,-0.105361,-2.302585\n"
       "-1.609438,-1.203973,-0.223144\n");

  const RunResult r = run("align " + path.string());
  CHECK(r.status == 0);
  CHECK(contains(r.output, "query 0 -> segment 1"));
  CHECK(contains(r.output, "query 1 -> segment 2"));
  CHECK(contains(r.output, "score: -0.328505"));

  spit(path, "-0.1,-0.2\n-0.3\n");
  const RunResult ragged = run("align " + path.string());
  CHECK(ragged.status == 2);
  CHECK(contains(ragged.output, "error: InvalidArgument"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("ged prints a bare distance") {
  const auto dir = temp_dir("veriplan_cli_ged");
  TaskSpec chain;
  chain.shape = shape_from_name("heat_then_clean");
  chain.object = "apple";
  TaskSpec single;
  single.shape = shape_from_name("heat");
  single.object = "apple";
  spit(dir / "a.txt", graph_to_dot(spec_graph(chain, QueryScheme::StateRelation)));
  spit(dir / "b.txt", graph_to_dot(spec_graph(single, QueryScheme::StateRelation)));

  const RunResult r = run("ged " + (dir / "a.txt").string() + " " + (dir / "b.txt").string());
  CHECK(r.status == 0);
  CHECK(r.output == "2\n");  // one node plus its edge
  std::filesystem::remove_all(dir);
}

TEST_CASE("train, evaluate, and sweep run end to end") {
  const auto dir = temp_dir("veriplan_cli_pipeline");
  const RunResult gen = run("generate --out " + dir.string() +
                            " --train 6 --novel-tasks 2 --novel-steps 2 --abstraction 2");
  REQUIRE(gen.status == 0);
  const std::string train_jsonl = (dir / "train.jsonl").string();

  const auto params = dir / "params.json";
  const RunResult trained = run("train --data " + train_jsonl + " --out " + params.string() +
                                " --epochs 2 --batch 4");
  CHECK(trained.status == 0);
  CHECK(contains(trained.output, "epoch 0"));
  CHECK(contains(trained.output, "params: " + params.string()));
  CHECK(std::filesystem::exists(params));

  const RunResult oracle_eval = run("evaluate --data " + train_jsonl);
  CHECK(oracle_eval.status == 0);
  CHECK(contains(oracle_eval.output, "overall: support 6"));
  CHECK(contains(oracle_eval.output, "accuracy 1.000000"));

  const auto report = dir / "report.json";
  const RunResult trained_eval = run("evaluate --data " + train_jsonl + " --scorer " +
                                     params.string() + " --report " + report.string());
  CHECK(trained_eval.status == 0);
  CHECK(contains(slurp(report), "\"scorer\": \"parametric\""));

  const RunResult swept = run("sweep --data " + train_jsonl + " --ks 20,40");
  CHECK(swept.status == 0);
  CHECK(contains(swept.output, "k,split,support,accuracy,f1,too_few_segments"));
  CHECK(contains(swept.output, "\n20,all,"));
  CHECK(contains(swept.output, "\n40,all,"));

  const RunResult flip_on_params = run("evaluate --data " + train_jsonl + " --scorer " +
                                       params.string() + " --flip-noise 0.1");
  CHECK(flip_on_params.status == 2);
  CHECK(contains(flip_on_params.output, "error: InvalidArgument"));

  std::filesystem::remove_all(dir);
}
