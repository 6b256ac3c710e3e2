#include <benchmark/benchmark.h>

#include <cstddef>
#include <vector>

#include "veriplan/align.hpp"
#include "veriplan/datagen.hpp"
#include "veriplan/extensions.hpp"
#include "veriplan/ged.hpp"
#include "veriplan/rng.hpp"
#include "veriplan/scorer.hpp"
#include "veriplan/task_shape.hpp"
#include "veriplan/trace.hpp"
#include "veriplan/verify.hpp"

namespace {

using namespace veriplan;

ScoreMatrix random_scores(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  ScoreMatrix m = ScoreMatrix::filled(rows, cols, 0.0);
  for (double& v : m.values) v = rng.uniform(-5.0, 0.0);
  return m;
}

TaskSpec bench_spec() {
  TaskSpec spec;
  spec.shape = shape_from_name("heat_and_clean_then_slice_and_cool_then_pick_then_place");
  spec.object = "apple";
  spec.receptacle = "plate";
  spec.relation = "on";
  return spec;
}

void BM_align_dp(benchmark::State& state) {
  ScoreMatrix m = random_scores(static_cast<std::size_t>(state.range(0)),
                                static_cast<std::size_t>(state.range(1)), 11);
  for (auto _ : state) benchmark::DoNotOptimize(align_dp(m));
}
BENCHMARK(BM_align_dp)->Args({4, 12})->Args({6, 24})->Args({8, 48});

void BM_align_bruteforce(benchmark::State& state) {
  ScoreMatrix m = random_scores(static_cast<std::size_t>(state.range(0)),
                                static_cast<std::size_t>(state.range(1)), 11);
  for (auto _ : state) benchmark::DoNotOptimize(align_bruteforce(m));
}
BENCHMARK(BM_align_bruteforce)->Args({4, 12})->Args({6, 16});

void BM_linear_extensions(benchmark::State& state) {
  TaskGraph graph = spec_graph(bench_spec(), QueryScheme::StateRelation);
  for (auto _ : state) benchmark::DoNotOptimize(linear_extensions(graph));
}
BENCHMARK(BM_linear_extensions);

void BM_verify(benchmark::State& state) {
  DatasetConfig cfg;
  TaskSpec spec = bench_spec();
  TaskGraph graph = spec_graph(spec, QueryScheme::StateRelation);
  RawTrace raw = execute_plan(spec, cfg, 29);
  SegmentedTrace trace = segment(raw, cfg.window_frames);
  OracleScorer scorer;
  for (auto _ : state) benchmark::DoNotOptimize(verify(graph, trace, scorer));
}
BENCHMARK(BM_verify);

void BM_ged(benchmark::State& state) {
  TaskSpec spec = bench_spec();
  TaskGraph a = spec_graph(spec, QueryScheme::StateRelation);
  TaskSpec other = spec;
  other.shape = shape_from_name("heat_then_clean_and_slice_and_cool_then_pick_then_place");
  TaskGraph b = spec_graph(other, QueryScheme::StateRelation);
  for (auto _ : state) benchmark::DoNotOptimize(ged(a, b));
}
BENCHMARK(BM_ged);

}  // namespace

BENCHMARK_MAIN();
