#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "veriplan/query.hpp"
#include "veriplan/trace.hpp"

namespace veriplan {

// Grounding function f(query, segment): probability in (0, 1] that the
// segment satisfies the query.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual double score(const Query& query, const Segment& segment) const = 0;
  virtual std::string name() const = 0;
};

// Ground truth: does the segment's annotation list satisfy the query?
bool query_holds(const Query& query, const Segment& segment);

// Annotation-backed scorer. flip_noise inverts individual (query, segment)
// outcomes under a seeded hash, so the flip pattern is a pure function of
// (seed, trace id, segment index, query) and reproduces across runs.
struct OracleScorerConfig {
  double true_prob = 0.99;
  double false_prob = 0.01;
  double flip_noise = 0.0;  // in [0, 0.5)
  std::uint64_t seed = 0;
};

class OracleScorer : public Scorer {
 public:
  explicit OracleScorer(OracleScorerConfig config = {});
  double score(const Query& query, const Segment& segment) const override;
  std::string name() const override { return "oracle"; }

 private:
  OracleScorerConfig config_;
};

// Open vocabularies a dataset is built over; the closed ones (states,
// relations, actions) live in query.hpp.
struct Vocabulary {
  std::vector<std::string> objects;
  std::vector<std::string> receptacles;

  int object_index(std::string_view name) const;
  int receptacle_index(std::string_view name) const;
  std::uint64_t hash() const;

  bool operator==(const Vocabulary&) const = default;
};

// Frame feature layout shared by the generator and the trained scorer:
// [nav | action one-hot | relation one-hot | object one-hot | receptacle
// one-hot | zero padding up to dim].
struct FeatureLayout {
  std::size_t dim = 0;
  std::size_t nav = 0;
  std::size_t action0 = 0;
  std::size_t relation0 = 0;
  std::size_t object0 = 0;
  std::size_t receptacle0 = 0;
  std::size_t used = 0;

  static FeatureLayout make(const Vocabulary& vocab, std::size_t dim);
};

// One trainable block per query type: logit = sum of the W rows selected by
// the query's argument one-hots, dotted with the pooled segment feature,
// plus a shared bias.
struct TypeParams {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> w;  // rows x cols, row-major
  double b = 0.0;
};

struct ParametricParams {
  Vocabulary vocab;
  std::size_t feature_dim = 0;
  TypeParams state;
  TypeParams relation;
  TypeParams action;

  TypeParams& for_type(QueryType t);
  const TypeParams& for_type(QueryType t) const;

  static ParametricParams zeros(const Vocabulary& vocab, std::size_t feature_dim);
};

// Row indices of W activated by the query's arguments. Throws
// UnknownVocabulary for names outside the vocabulary.
std::vector<std::size_t> query_feature_rows(const Query& query, const Vocabulary& vocab);

inline constexpr double kProbClamp = 1e-8;  // scores clamped to [eps, 1 - eps]

class ParametricScorer : public Scorer {
 public:
  explicit ParametricScorer(ParametricParams params);

  double score(const Query& query, const Segment& segment) const override;
  std::string name() const override { return "parametric"; }

  double logit(const Query& query, const std::vector<double>& pooled) const;

  const ParametricParams& params() const { return params_; }
  ParametricParams& params() { return params_; }

 private:
  ParametricParams params_;
};

std::string params_to_json(const ParametricParams& params);
ParametricParams params_from_json(const std::string& text);
void save_params(const ParametricParams& params, const std::string& path);
ParametricParams load_params(const std::string& path);

}  // namespace veriplan
