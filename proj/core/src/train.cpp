#include "veriplan/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "veriplan/error.hpp"
#include "veriplan/rng.hpp"
#include "veriplan/verify.hpp"

namespace veriplan {

PreparedSample prepare_sample(const Sample& sample, int window, std::size_t extension_cap) {
  validate(sample.graph);
  PreparedSample prep;
  prep.id = sample.id;
  prep.label = sample.label;
  prep.queries = sample.graph.nodes;
  prep.trace = segment(sample.trace, window);
  if (prep.trace.segments.size() < prep.queries.size()) {
    raise(Errc::too_few_segments, "sample '" + sample.id + "' yields " +
                                      std::to_string(prep.trace.segments.size()) +
                                      " segments for " + std::to_string(prep.queries.size()) +
                                      " queries");
  }
  prep.extensions = linear_extensions(sample.graph, extension_cap);
  return prep;
}

std::size_t param_count(const ParametricParams& params) {
  std::size_t n = 0;
  for (const TypeParams* block : {&params.state, &params.relation, &params.action}) {
    n += block->w.size() + 1;
  }
  return n;
}

std::vector<double> flatten(const ParametricParams& params) {
  std::vector<double> flat;
  flat.reserve(param_count(params));
  for (const TypeParams* block : {&params.state, &params.relation, &params.action}) {
    flat.insert(flat.end(), block->w.begin(), block->w.end());
    flat.push_back(block->b);
  }
  return flat;
}

void unflatten(const std::vector<double>& flat, ParametricParams& params) {
  if (flat.size() != param_count(params)) {
    raise(Errc::dimension_mismatch, "flat parameter vector has " + std::to_string(flat.size()) +
                                        " entries, expected " +
                                        std::to_string(param_count(params)));
  }
  std::size_t at = 0;
  for (TypeParams* block : {&params.state, &params.relation, &params.action}) {
    std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(at), block->w.size(), block->w.begin());
    at += block->w.size();
    block->b = flat[at++];
  }
}

namespace {

// Offset of a type's block within the flat layout.
std::size_t block_offset(const ParametricParams& params, QueryType type) {
  const std::size_t state_size = params.state.w.size() + 1;
  const std::size_t relation_size = params.relation.w.size() + 1;
  switch (type) {
    case QueryType::State: return 0;
    case QueryType::Relation: return state_size;
    case QueryType::Action: return state_size + relation_size;
  }
  return 0;
}

bool clamped(double f) { return f <= kProbClamp || f >= 1.0 - kProbClamp; }

}  // namespace

double sample_loss(const PreparedSample& prep, const ParametricParams& params,
                   std::vector<double>* grad, StepTrace* trace) {
  const ParametricScorer scorer(params);
  const std::size_t n = prep.queries.size();
  const std::size_t s = prep.trace.segments.size();

  ScoreMatrix by_node = ScoreMatrix::filled(n, s, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < s; ++c) {
      by_node.at(r, c) = clamp_log_prob(scorer.score(prep.queries[r], prep.trace.segments[c]));
    }
  }

  // Step (i): parameters frozen, best alignment over all extensions. Strict
  // improvement keeps the lexicographically first extension, as in verify.
  Alignment best;
  const std::vector<int>* best_extension = nullptr;
  ScoreMatrix best_ordered = ScoreMatrix::filled(0, 0, 0.0);
  ScoreMatrix ordered = ScoreMatrix::filled(n, s, 0.0);
  for (const std::vector<int>& extension : prep.extensions.sequences) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto node = static_cast<std::size_t>(extension[j]);
      for (std::size_t c = 0; c < s; ++c) ordered.at(j, c) = by_node.at(node, c);
    }
    Alignment alignment = align_dp(ordered);
    if (best_extension == nullptr || alignment.score > best.score) {
      best = std::move(alignment);
      best_extension = &extension;
      best_ordered = ordered;
    }
  }

  const double y = prep.label ? 1.0 : 0.0;
  const double p = sigmoid(best.score / static_cast<double>(n));
  const double loss = -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
  if (!std::isfinite(loss)) {
    raise(Errc::non_finite_loss,
          "sample '" + prep.id + "': p=" + std::to_string(p) + " score=" + std::to_string(best.score));
  }

  if (grad != nullptr) {
    // Step (ii) gradient at the frozen choice: dL/dlogit = (p - y)/N (1 - f)
    // per aligned pair, zero where the score clamp is active.
    const double upstream = (p - y) / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
      const Query& query = prep.queries[static_cast<std::size_t>((*best_extension)[j])];
      const Segment& seg = prep.trace.segments[static_cast<std::size_t>(best.segment_of[j])];
      const double f = std::exp(best_ordered.at(j, static_cast<std::size_t>(best.segment_of[j])));
      if (clamped(f)) continue;
      const double g = upstream * (1.0 - f);
      const TypeParams& block = params.for_type(query.type);
      const std::size_t base = block_offset(params, query.type);
      for (std::size_t row : query_feature_rows(query, params.vocab)) {
        const std::size_t w0 = base + row * block.cols;
        for (std::size_t c = 0; c < block.cols; ++c) (*grad)[w0 + c] += g * seg.pooled[c];
      }
      (*grad)[base + block.w.size()] += g;  // bias
    }
  }

  if (trace != nullptr) {
    trace->extension = *best_extension;
    trace->scores = std::move(best_ordered);
    trace->alignment = best;
    trace->probability = p;
    trace->loss = loss;
  }
  return loss;
}

TrainResult train(const std::vector<Sample>& dataset, ParametricParams params,
                  const TrainConfig& config, const StepObserver& observer) {
  if (dataset.empty()) raise(Errc::empty_dataset, "no training samples");
  if (config.batch == 0) raise(Errc::invalid_argument, "batch size must be positive");
  if (!(config.lr > 0.0)) raise(Errc::invalid_argument, "learning rate must be positive");

  std::vector<PreparedSample> prepared;
  prepared.reserve(dataset.size());
  for (const Sample& sample : dataset) {
    prepared.push_back(prepare_sample(sample, config.window, config.extension_cap));
  }

  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  std::vector<double> flat = flatten(params);
  std::vector<double> m(flat.size(), 0.0), v(flat.size(), 0.0), grad(flat.size(), 0.0);
  std::size_t step = 0;

  TrainResult result{std::move(params), {}};
  std::vector<std::size_t> order(prepared.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    Rng rng(derive_seed(config.seed, "epoch", epoch));
    rng.shuffle(order);
    double epoch_loss = 0.0;

    for (std::size_t begin = 0; begin < order.size(); begin += config.batch) {
      const std::size_t end = std::min(order.size(), begin + config.batch);
      std::fill(grad.begin(), grad.end(), 0.0);

      for (std::size_t i = begin; i < end; ++i) {
        StepTrace step_trace;
        step_trace.epoch = epoch;
        step_trace.sample = order[i];
        const double loss = sample_loss(prepared[order[i]], result.params, &grad,
                                        observer ? &step_trace : nullptr);
        epoch_loss += loss;
        if (observer) observer(step_trace);
      }

      const double scale = 1.0 / static_cast<double>(end - begin);
      ++step;
      const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
      for (std::size_t i = 0; i < flat.size(); ++i) {
        const double g = grad[i] * scale;
        m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * g;
        v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * g * g;
        flat[i] -= config.lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + kEps);
      }
      unflatten(flat, result.params);
    }

    result.epoch_loss.push_back(epoch_loss / static_cast<double>(order.size()));
  }
  return result;
}

}  // namespace veriplan
