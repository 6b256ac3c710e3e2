#include "veriplan/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "veriplan/error.hpp"
#include "veriplan/rng.hpp"

namespace veriplan {

bool query_holds(const Query& query, const Segment& segment) {
  if (!segment.has_annotations) {
    raise(Errc::missing_annotations, "segment " + std::to_string(segment.index) + " of trace '" +
                                         segment.trace_id + "' carries no annotations");
  }
  for (const Event& ev : segment.events) {
    switch (query.type) {
      case QueryType::State:
        if (ev.object == query.args[0] && state_for_action(ev.action) == query.args[1]) return true;
        break;
      case QueryType::Relation:
        if (ev.action == "place" && ev.object == query.args[0] &&
            ev.receptacle == query.args[1] && ev.relation == query.args[2]) {
          return true;
        }
        break;
      case QueryType::Action:
        if (ev.action == query.args[0] && ev.object == query.args[1] &&
            (query.args.size() < 3 || ev.receptacle == query.args[2])) {
          return true;
        }
        break;
    }
  }
  return false;
}

OracleScorer::OracleScorer(OracleScorerConfig config) : config_(config) {
  if (config_.flip_noise < 0.0 || config_.flip_noise >= 0.5) {
    raise(Errc::invalid_argument, "flip_noise must lie in [0, 0.5)");
  }
  if (config_.true_prob <= config_.false_prob) {
    raise(Errc::invalid_argument, "true_prob must exceed false_prob");
  }
}

double OracleScorer::score(const Query& query, const Segment& segment) const {
  bool holds = query_holds(query, segment);
  if (config_.flip_noise > 0.0) {
    std::uint64_t h = hash64(segment.trace_id, config_.seed ^ 0x5851f42d4c957f2dull);
    h = mix64(h, static_cast<std::uint64_t>(segment.index));
    h = hash64(to_string(query), h);
    Rng rng(h);
    if (rng.uniform() < config_.flip_noise) holds = !holds;
  }
  return holds ? config_.true_prob : config_.false_prob;
}

int Vocabulary::object_index(std::string_view name) const {
  const auto it = std::find(objects.begin(), objects.end(), name);
  return it == objects.end() ? -1 : static_cast<int>(it - objects.begin());
}

int Vocabulary::receptacle_index(std::string_view name) const {
  const auto it = std::find(receptacles.begin(), receptacles.end(), name);
  return it == receptacles.end() ? -1 : static_cast<int>(it - receptacles.begin());
}

std::uint64_t Vocabulary::hash() const {
  std::uint64_t h = hash64("vocabulary");
  for (const std::string& o : objects) h = hash64(o, mix64(h, 1));
  for (const std::string& r : receptacles) h = hash64(r, mix64(h, 2));
  return h;
}

FeatureLayout FeatureLayout::make(const Vocabulary& vocab, std::size_t dim) {
  FeatureLayout l;
  l.dim = dim;
  l.nav = 0;
  l.action0 = 1;
  l.relation0 = l.action0 + kActions.size();
  l.object0 = l.relation0 + kRelations.size();
  l.receptacle0 = l.object0 + vocab.objects.size();
  l.used = l.receptacle0 + vocab.receptacles.size();
  if (l.used > dim) {
    raise(Errc::dimension_mismatch, "feature dim " + std::to_string(dim) + " too small for " +
                                        std::to_string(l.used) + " channels");
  }
  return l;
}

TypeParams& ParametricParams::for_type(QueryType t) {
  switch (t) {
    case QueryType::State: return state;
    case QueryType::Relation: return relation;
    case QueryType::Action: return action;
  }
  return state;
}

const TypeParams& ParametricParams::for_type(QueryType t) const {
  return const_cast<ParametricParams*>(this)->for_type(t);
}

ParametricParams ParametricParams::zeros(const Vocabulary& vocab, std::size_t feature_dim) {
  const auto block = [feature_dim](std::size_t rows) {
    return TypeParams{rows, feature_dim, std::vector<double>(rows * feature_dim, 0.0), 0.0};
  };
  ParametricParams p;
  p.vocab = vocab;
  p.feature_dim = feature_dim;
  p.state = block(vocab.objects.size() + kStates.size());
  p.relation = block(vocab.objects.size() + vocab.receptacles.size() + kRelations.size());
  // action one-hot, object one-hot, receptacle one-hot with a "none" slot
  p.action = block(kActions.size() + vocab.objects.size() + vocab.receptacles.size() + 1);
  return p;
}

std::vector<std::size_t> query_feature_rows(const Query& query, const Vocabulary& vocab) {
  const auto object_row = [&](std::string_view name, std::size_t base) {
    const int i = vocab.object_index(name);
    if (i < 0) raise(Errc::unknown_vocabulary, "object '" + std::string(name) + "'");
    return base + static_cast<std::size_t>(i);
  };
  const auto receptacle_row = [&](std::string_view name, std::size_t base) {
    const int i = vocab.receptacle_index(name);
    if (i < 0) raise(Errc::unknown_vocabulary, "receptacle '" + std::string(name) + "'");
    return base + static_cast<std::size_t>(i);
  };

  switch (query.type) {
    case QueryType::State: {
      const int s = state_index(query.args[1]);
      if (s < 0) raise(Errc::unknown_vocabulary, "state '" + query.args[1] + "'");
      return {object_row(query.args[0], 0),
              vocab.objects.size() + static_cast<std::size_t>(s)};
    }
    case QueryType::Relation: {
      const int r = relation_index(query.args[2]);
      if (r < 0) raise(Errc::unknown_vocabulary, "relation '" + query.args[2] + "'");
      return {object_row(query.args[0], 0),
              receptacle_row(query.args[1], vocab.objects.size()),
              vocab.objects.size() + vocab.receptacles.size() + static_cast<std::size_t>(r)};
    }
    case QueryType::Action: {
      const int a = action_index(query.args[0]);
      if (a < 0) raise(Errc::unknown_vocabulary, "action '" + query.args[0] + "'");
      std::vector<std::size_t> rows = {static_cast<std::size_t>(a),
                                       object_row(query.args[1], kActions.size())};
      const std::size_t recep_base = kActions.size() + vocab.objects.size();
      if (query.args.size() > 2) {
        rows.push_back(receptacle_row(query.args[2], recep_base));
      } else {
        rows.push_back(recep_base + vocab.receptacles.size());  // "none" slot
      }
      return rows;
    }
  }
  return {};
}

ParametricScorer::ParametricScorer(ParametricParams params) : params_(std::move(params)) {}

double ParametricScorer::logit(const Query& query, const std::vector<double>& pooled) const {
  if (pooled.size() != params_.feature_dim) {
    raise(Errc::dimension_mismatch, "segment feature dim " + std::to_string(pooled.size()) +
                                        ", scorer expects " + std::to_string(params_.feature_dim));
  }
  const TypeParams& block = params_.for_type(query.type);
  double z = block.b;
  for (const std::size_t row : query_feature_rows(query, params_.vocab)) {
    const double* w = block.w.data() + row * block.cols;
    for (std::size_t i = 0; i < block.cols; ++i) z += w[i] * pooled[i];
  }
  return z;
}

double ParametricScorer::score(const Query& query, const Segment& segment) const {
  const double z = logit(query, segment.pooled);
  const double p = 1.0 / (1.0 + std::exp(-z));
  return std::clamp(p, kProbClamp, 1.0 - kProbClamp);
}

namespace {

nlohmann::ordered_json block_to_json(const TypeParams& t) {
  return nlohmann::ordered_json{{"rows", t.rows}, {"cols", t.cols}, {"w", t.w}, {"b", t.b}};
}

TypeParams block_from_json(const nlohmann::json& j) {
  TypeParams t;
  t.rows = j.at("rows").get<std::size_t>();
  t.cols = j.at("cols").get<std::size_t>();
  t.w = j.at("w").get<std::vector<double>>();
  t.b = j.at("b").get<double>();
  if (t.w.size() != t.rows * t.cols) {
    raise(Errc::dimension_mismatch, "checkpoint block storage does not match its shape");
  }
  return t;
}

}  // namespace

std::string params_to_json(const ParametricParams& params) {
  nlohmann::ordered_json j;
  j["format"] = "veriplan-params";
  j["version"] = 1;
  j["vocab_hash"] = params.vocab.hash();
  j["feature_dim"] = params.feature_dim;
  j["vocab"] = {{"objects", params.vocab.objects}, {"receptacles", params.vocab.receptacles}};
  j["state"] = block_to_json(params.state);
  j["relation"] = block_to_json(params.relation);
  j["action"] = block_to_json(params.action);
  return j.dump(2);
}

ParametricParams params_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::syntax_error, std::string("bad checkpoint JSON: ") + e.what());
  }
  try {
    if (j.value("format", "") != "veriplan-params") {
      raise(Errc::syntax_error, "not a parameter checkpoint");
    }
    ParametricParams p;
    p.vocab.objects = j.at("vocab").at("objects").get<std::vector<std::string>>();
    p.vocab.receptacles = j.at("vocab").at("receptacles").get<std::vector<std::string>>();
    p.feature_dim = j.at("feature_dim").get<std::size_t>();
    p.state = block_from_json(j.at("state"));
    p.relation = block_from_json(j.at("relation"));
    p.action = block_from_json(j.at("action"));
    if (j.at("vocab_hash").get<std::uint64_t>() != p.vocab.hash()) {
      raise(Errc::unknown_vocabulary, "checkpoint vocabulary hash mismatch");
    }
    const ParametricParams expect = ParametricParams::zeros(p.vocab, p.feature_dim);
    for (QueryType t : {QueryType::State, QueryType::Relation, QueryType::Action}) {
      if (p.for_type(t).rows != expect.for_type(t).rows ||
          p.for_type(t).cols != expect.for_type(t).cols) {
        raise(Errc::dimension_mismatch, "checkpoint shapes do not match the vocabulary");
      }
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::syntax_error, std::string("bad checkpoint JSON: ") + e.what());
  }
}

void save_params(const ParametricParams& params, const std::string& path) {
  std::ofstream out(path);
  if (!out) raise(Errc::invalid_argument, "cannot write '" + path + "'");
  out << params_to_json(params) << '\n';
}

ParametricParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::invalid_argument, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return params_from_json(buf.str());
}

}  // namespace veriplan
