#pragma once

#include <stdexcept>
#include <string>

namespace veriplan {

enum class Errc {
  unknown_query_type,
  arity_mismatch,
  invalid_vocabulary,
  syntax_error,
  cycle_detected,
  dangling_edge,
  size_limit_exceeded,
  no_template_match,
  unknown_object,
  empty_trace,
  too_few_segments,
  missing_annotations,
  dimension_mismatch,
  unknown_vocabulary,
  non_finite_loss,
  empty_dataset,
  incompatible_action_object,
  cannot_falsify,
  infeasible_split,
  invalid_argument,
};

constexpr const char* errc_name(Errc code) {
  switch (code) {
    case Errc::unknown_query_type: return "UnknownQueryType";
    case Errc::arity_mismatch: return "ArityMismatch";
    case Errc::invalid_vocabulary: return "InvalidVocabulary";
    case Errc::syntax_error: return "SyntaxError";
    case Errc::cycle_detected: return "CycleDetected";
    case Errc::dangling_edge: return "DanglingEdge";
    case Errc::size_limit_exceeded: return "SizeLimitExceeded";
    case Errc::no_template_match: return "NoTemplateMatch";
    case Errc::unknown_object: return "UnknownObject";
    case Errc::empty_trace: return "EmptyTrace";
    case Errc::too_few_segments: return "TooFewSegments";
    case Errc::missing_annotations: return "MissingAnnotations";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::unknown_vocabulary: return "UnknownVocabulary";
    case Errc::non_finite_loss: return "NonFiniteLoss";
    case Errc::empty_dataset: return "EmptyDataset";
    case Errc::incompatible_action_object: return "IncompatibleActionObject";
    case Errc::cannot_falsify: return "CannotFalsify";
    case Errc::infeasible_split: return "InfeasibleSplit";
    case Errc::invalid_argument: return "InvalidArgument";
  }
  return "UnknownError";
}

// Carries a machine-readable code so the CLI can emit single-line
// "error: <Code>: <detail>" diagnostics and tests can match on codes.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& detail) {
  throw Error(code, detail);
}

}  // namespace veriplan
