#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "veriplan/align.hpp"
#include "veriplan/datagen.hpp"
#include "veriplan/dataset_io.hpp"
#include "veriplan/error.hpp"
#include "veriplan/eval.hpp"
#include "veriplan/extensions.hpp"
#include "veriplan/ged.hpp"
#include "veriplan/scorer.hpp"
#include "veriplan/semparse.hpp"
#include "veriplan/task_graph.hpp"
#include "veriplan/trace.hpp"
#include "veriplan/train.hpp"
#include "veriplan/verify.hpp"

namespace {

using namespace veriplan;

// Flags shared by every subcommand; each one registers them itself so they
// may appear before or after the subcommand name.
struct Globals {
  std::uint64_t seed = 7;
  double threshold = default_decision_threshold();
  int window = 20;
  std::size_t extension_cap = kDefaultExtensionCap;
  bool strict_vocab = false;
};

void add_globals(CLI::App* cmd, Globals& g) {
  cmd->add_option("--seed", g.seed, "Master seed for anything randomized");
  cmd->add_option("--threshold", g.threshold, "Verification decision threshold")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--window-k", g.window, "Segment window length in frames")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--extension-cap", g.extension_cap, "Max linear extensions enumerated")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--strict-vocab", g.strict_vocab,
                "Reject objects and receptacles outside the default vocabulary");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::invalid_argument, "cannot read '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::invalid_argument, "cannot write '" + path + "'");
  out << text;
}

Lexicon make_lexicon(const Globals& g) {
  Vocabulary vocab = vocabulary_for(DatasetConfig{});
  return Lexicon{vocab.objects, vocab.receptacles, g.strict_vocab};
}

// "oracle" or a parameter-file path saved by the train subcommand.
std::unique_ptr<Scorer> make_scorer(const std::string& spec, double flip_noise,
                                    std::uint64_t seed) {
  if (spec == "oracle") {
    OracleScorerConfig cfg;
    cfg.flip_noise = flip_noise;
    cfg.seed = seed;
    return std::make_unique<OracleScorer>(cfg);
  }
  if (flip_noise > 0.0)
    raise(Errc::invalid_argument, "--flip-noise applies to the oracle scorer only");
  return std::make_unique<ParametricScorer>(load_params(spec));
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::vector<Sample> load_data(const std::vector<std::string>& paths, const std::string& scheme,
                              const Globals& g) {
  std::vector<Sample> samples;
  for (const auto& path : paths) {
    auto part = read_samples(path);
    samples.insert(samples.end(), part.begin(), part.end());
  }
  if (scheme != "state_relation")
    samples = samples_with_scheme(samples, scheme_from_name(scheme), make_lexicon(g));
  return samples;
}

void add_scheme_option(CLI::App* cmd, std::string& scheme) {
  cmd->add_option("--scheme", scheme, "Query scheme: state_relation or action")
      ->check(CLI::IsMember({"state_relation", "action"}));
}

void print_counts(const std::string& name, const BinaryCounts& c) {
  std::cout << name << ": support " << c.support() << "  accuracy " << fmt(c.accuracy())
            << "  precision " << fmt(c.precision()) << "  recall " << fmt(c.recall()) << "  f1 "
            << fmt(c.f1()) << "\n";
}

int cmd_generate(const Globals& g, const DatasetConfig& base, const std::string& out_dir) {
  DatasetConfig cfg = base;
  cfg.seed = g.seed;
  cfg.window_frames = g.window;
  Dataset ds = build_dataset(cfg);
  DatasetStats stats = write_dataset(ds, out_dir);
  for (const auto& split : kSplitNames)
    std::cout << out_dir << "/" << split << ".jsonl: " << ds.split(split).size() << " samples\n";
  std::cout << "positives " << stats.positives << "  negatives " << stats.negatives
            << "\nmean sub-tasks " << fmt(stats.mean_subtasks) << "  mean orderings "
            << fmt(stats.mean_orderings) << "  mean extensions " << fmt(stats.mean_extensions)
            << "  mean description words " << fmt(stats.mean_description_words) << "\n";
  return 0;
}

int cmd_parse(const Globals& g, const std::string& text, const std::string& scheme) {
  TaskGraph graph = parse_description(text, make_lexicon(g), scheme_from_name(scheme));
  std::cout << graph_to_dot(graph) << "\n";
  return 0;
}

int cmd_templates(const std::string& out) {
  std::string tsv = TemplateRegistry::builtin().to_tsv();
  if (out == "-")
    std::cout << tsv;
  else
    write_file(out, tsv);
  return 0;
}

struct VerifyArgs {
  std::string graph_path;
  std::string description;
  std::string trace_path;
  std::string scorer = "oracle";
  double flip_noise = 0.0;
  std::string scheme = "state_relation";
  std::string csv_path;
};

int cmd_verify(const Globals& g, const VerifyArgs& args) {
  TaskGraph graph;
  if (!args.graph_path.empty())
    graph = parse_dot(read_file(args.graph_path));
  else
    graph = parse_description(args.description, make_lexicon(g), scheme_from_name(args.scheme));

  RawTrace raw = read_trace(args.trace_path);
  SegmentedTrace trace = segment(raw, g.window);
  auto scorer = make_scorer(args.scorer, args.flip_noise, g.seed);

  VerifyOptions options;
  options.threshold = g.threshold;
  options.extension_cap = g.extension_cap;
  Verdict verdict = verify(graph, trace, *scorer, options);

  std::cout << "probability: " << fmt(verdict.probability) << "\n";
  std::cout << "threshold: " << fmt(g.threshold) << "\n";
  std::cout << "label: " << (verdict.label ? "verified" : "not-verified") << "\n";
  std::cout << "extensions tried: " << verdict.extensions_tried
            << (verdict.extensions_truncated ? " (truncated)" : "") << "\n";
  std::cout << "extension:";
  for (int node : verdict.best_extension) std::cout << " " << node;
  std::cout << "\n";
  for (std::size_t j = 0; j < verdict.best_alignment.segment_of.size(); ++j)
    std::cout << "query " << verdict.best_extension[j] << " -> segment "
              << verdict.best_alignment.segment_of[j] << "\n";
  if (!args.csv_path.empty()) {
    write_file(args.csv_path, alignment_csv(verdict, node_score_matrix(graph, trace, *scorer)));
    std::cout << "alignment csv: " << args.csv_path << "\n";
  }
  return verdict.label ? 0 : 1;
}

// Rows of comma-separated log-scores, one query per row.
ScoreMatrix read_score_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        raise(Errc::syntax_error, "bad score '" + cell + "' in " + path);
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) raise(Errc::invalid_argument, "no rows in " + path);
  ScoreMatrix m = ScoreMatrix::filled(rows.size(), rows[0].size(), 0.0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols)
      raise(Errc::invalid_argument, "ragged row " + std::to_string(r) + " in " + path);
    for (std::size_t c = 0; c < m.cols; ++c) m.at(r, c) = rows[r][c];
  }
  return m;
}

int cmd_align(const std::string& path) {
  ScoreMatrix scores = read_score_csv(path);
  Alignment alignment = align_dp(scores);
  for (std::size_t j = 0; j < alignment.segment_of.size(); ++j) {
    int t = alignment.segment_of[j];
    std::cout << "query " << j << " -> segment " << t << " (log-score "
              << fmt(scores.at(j, static_cast<std::size_t>(t))) << ")\n";
  }
  std::cout << "score: " << fmt(alignment.score) << "\n";
  return 0;
}

int cmd_ged(const std::string& path_a, const std::string& path_b) {
  TaskGraph a = parse_dot(read_file(path_a));
  TaskGraph b = parse_dot(read_file(path_b));
  std::cout << ged(a, b) << "\n";
  return 0;
}

struct TrainArgs {
  std::string data;
  std::string out;
  std::string scheme = "state_relation";
  double lr = 1e-3;
  std::size_t epochs = 50;
  std::size_t batch = 64;
  std::size_t dim = 64;
  bool quiet = false;
};

int cmd_train(const Globals& g, const TrainArgs& args) {
  std::vector<Sample> samples = load_data({args.data}, args.scheme, g);
  ParametricParams params = ParametricParams::zeros(vocabulary_for(DatasetConfig{}), args.dim);
  TrainConfig cfg;
  cfg.lr = args.lr;
  cfg.epochs = args.epochs;
  cfg.batch = args.batch;
  cfg.seed = g.seed;
  cfg.window = g.window;
  cfg.extension_cap = g.extension_cap;
  TrainResult result = train(samples, std::move(params), cfg);
  if (!args.quiet)
    for (std::size_t e = 0; e < result.epoch_loss.size(); ++e)
      std::cout << "epoch " << e << "  loss " << fmt(result.epoch_loss[e]) << "\n";
  save_params(result.params, args.out);
  std::cout << "params: " << args.out << "\n";
  return 0;
}

struct EvalArgs {
  std::vector<std::string> data;
  std::string scorer = "oracle";
  double flip_noise = 0.0;
  std::string scheme = "state_relation";
  std::string report_path;
  std::string csv_path;
  std::string detection_path;
};

int cmd_evaluate(const Globals& g, const EvalArgs& args) {
  std::vector<Sample> samples = load_data(args.data, args.scheme, g);
  auto scorer = make_scorer(args.scorer, args.flip_noise, g.seed);
  EvalOptions options;
  options.threshold = g.threshold;
  options.window = g.window;
  options.extension_cap = g.extension_cap;
  MetricsReport report = evaluate(samples, *scorer, options);

  print_counts("overall", report.overall);
  for (const auto& split : report.per_split) print_counts("split " + split.split, split.counts);
  if (report.too_few_segments > 0)
    std::cout << "too few segments: " << report.too_few_segments << "\n";
  if (!args.report_path.empty()) write_file(args.report_path, report_to_json(report));
  if (!args.csv_path.empty()) write_file(args.csv_path, metrics_csv(report));
  if (!args.detection_path.empty()) write_file(args.detection_path, detection_csv(report.detection));
  return 0;
}

struct SweepArgs {
  std::vector<std::string> data;
  std::string scorer = "oracle";
  double flip_noise = 0.0;
  std::string scheme = "state_relation";
  std::vector<int> ks = {10, 20, 30, 40};
  std::string csv_path;
};

int cmd_sweep(const Globals& g, const SweepArgs& args) {
  std::vector<Sample> samples = load_data(args.data, args.scheme, g);
  auto scorer = make_scorer(args.scorer, args.flip_noise, g.seed);
  EvalOptions base;
  base.threshold = g.threshold;
  base.extension_cap = g.extension_cap;
  auto table = sweep_window(samples, *scorer, args.ks, base);
  std::string csv = sweep_csv(table);
  if (args.csv_path.empty())
    std::cout << csv;
  else {
    write_file(args.csv_path, csv);
    std::cout << "sweep csv: " << args.csv_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"veriplan: compositional task verification over annotated traces"};
  app.require_subcommand(1);
  Globals g;
  int rc = 0;

  auto* gen = app.add_subcommand("generate", "Build a synthetic dataset and write it as JSONL");
  add_globals(gen, g);
  DatasetConfig gen_cfg;
  std::string gen_out;
  gen->add_option("--out", gen_out, "Output directory")->required();
  gen->add_option("--train", gen_cfg.train, "Training split size")->check(CLI::NonNegativeNumber);
  gen->add_option("--novel-tasks", gen_cfg.novel_tasks, "Held-out-composition split size")
      ->check(CLI::NonNegativeNumber);
  gen->add_option("--novel-steps", gen_cfg.novel_steps, "Held-out-sub-task split size")
      ->check(CLI::NonNegativeNumber);
  gen->add_option("--abstraction", gen_cfg.abstraction, "Abstract-description split size")
      ->check(CLI::NonNegativeNumber);
  gen->add_option("--negative-fraction", gen_cfg.negative_fraction, "Share of negative samples")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--dim", gen_cfg.feature_dim, "Frame feature dimension")
      ->check(CLI::PositiveNumber);
  gen->add_option("--noise", gen_cfg.feature_noise, "Gaussian feature noise sigma")
      ->check(CLI::NonNegativeNumber);
  gen->add_option("--holdout-shapes", gen_cfg.holdout_shapes, "Task shapes reserved for novel_tasks")
      ->check(CLI::NonNegativeNumber);
  gen->add_option("--holdout-steps", gen_cfg.holdout_steps,
                  "(action, object) pairs reserved for novel_steps")
      ->check(CLI::NonNegativeNumber);
  gen->callback([&] { rc = cmd_generate(g, gen_cfg, gen_out); });

  auto* par = app.add_subcommand("parse", "Parse a task description into its query graph");
  add_globals(par, g);
  std::string par_text, par_scheme = "state_relation";
  par->add_option("text", par_text, "Task description")->required();
  add_scheme_option(par, par_scheme);
  par->callback([&] { rc = cmd_parse(g, par_text, par_scheme); });

  auto* tpl = app.add_subcommand("templates", "Dump the built-in description templates as TSV");
  std::string tpl_out = "-";
  tpl->add_option("--out", tpl_out, "Output path, or - for stdout");
  tpl->callback([&] { rc = cmd_templates(tpl_out); });

  auto* ver = app.add_subcommand("verify", "Check one trace against one task");
  add_globals(ver, g);
  VerifyArgs ver_args;
  auto* ver_graph = ver->add_option("--graph", ver_args.graph_path, "Query graph file");
  ver->add_option("--description", ver_args.description, "Task description text")
      ->excludes(ver_graph);
  ver->add_option("--trace", ver_args.trace_path, "Trace JSON file")->required();
  ver->add_option("--scorer", ver_args.scorer, "oracle, or a trained parameter file");
  ver->add_option("--flip-noise", ver_args.flip_noise, "Oracle flip probability")
      ->check(CLI::Range(0.0, 0.49));
  add_scheme_option(ver, ver_args.scheme);
  ver->add_option("--alignment-csv", ver_args.csv_path, "Write the winning alignment as CSV");
  ver->callback([&] {
    if (ver_args.graph_path.empty() && ver_args.description.empty())
      raise(Errc::invalid_argument, "verify needs --graph or --description");
    rc = cmd_verify(g, ver_args);
  });

  auto* ali = app.add_subcommand("align", "Align a log-score CSV (rows: queries, cols: segments)");
  std::string ali_path;
  ali->add_option("scores", ali_path, "CSV file of log-scores")->required();
  ali->callback([&] { rc = cmd_align(ali_path); });

  auto* gcmd = app.add_subcommand("ged", "Edit distance between two query graph files");
  std::string ged_a, ged_b;
  gcmd->add_option("first", ged_a, "Query graph file")->required();
  gcmd->add_option("second", ged_b, "Query graph file")->required();
  gcmd->callback([&] { rc = cmd_ged(ged_a, ged_b); });

  auto* trn = app.add_subcommand("train", "Fit the parametric scorer on a JSONL split");
  add_globals(trn, g);
  TrainArgs trn_args;
  trn->add_option("--data", trn_args.data, "Training JSONL file")->required();
  trn->add_option("--out", trn_args.out, "Where to save the trained parameters")->required();
  add_scheme_option(trn, trn_args.scheme);
  trn->add_option("--lr", trn_args.lr, "Adam learning rate")->check(CLI::PositiveNumber);
  trn->add_option("--epochs", trn_args.epochs, "Training epochs")->check(CLI::PositiveNumber);
  trn->add_option("--batch", trn_args.batch, "Mini-batch size")->check(CLI::PositiveNumber);
  trn->add_option("--dim", trn_args.dim, "Frame feature dimension")->check(CLI::PositiveNumber);
  trn->add_flag("--quiet", trn_args.quiet, "Suppress per-epoch loss lines");
  trn->callback([&] { rc = cmd_train(g, trn_args); });

  auto* evl = app.add_subcommand("evaluate", "Score JSONL splits and report metrics");
  add_globals(evl, g);
  EvalArgs evl_args;
  evl->add_option("--data", evl_args.data, "JSONL files")->required()->expected(-1);
  evl->add_option("--scorer", evl_args.scorer, "oracle, or a trained parameter file");
  evl->add_option("--flip-noise", evl_args.flip_noise, "Oracle flip probability")
      ->check(CLI::Range(0.0, 0.49));
  add_scheme_option(evl, evl_args.scheme);
  evl->add_option("--report", evl_args.report_path, "Write the full report as JSON");
  evl->add_option("--csv", evl_args.csv_path, "Write the metric table as CSV");
  evl->add_option("--detection", evl_args.detection_path, "Write per-sub-task detection CSV");
  evl->callback([&] { rc = cmd_evaluate(g, evl_args); });

  auto* swp = app.add_subcommand("sweep", "Re-evaluate across segment window lengths");
  add_globals(swp, g);
  SweepArgs swp_args;
  swp->add_option("--data", swp_args.data, "JSONL files")->required()->expected(-1);
  swp->add_option("--scorer", swp_args.scorer, "oracle, or a trained parameter file");
  swp->add_option("--flip-noise", swp_args.flip_noise, "Oracle flip probability")
      ->check(CLI::Range(0.0, 0.49));
  add_scheme_option(swp, swp_args.scheme);
  swp->add_option("--ks", swp_args.ks, "Window lengths to try")->delimiter(',');
  swp->add_option("--csv", swp_args.csv_path, "Write the sweep table as CSV");
  swp->callback([&] { rc = cmd_sweep(g, swp_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
