#pragma once

#include <cstddef>
#include <vector>

namespace veriplan {

// Log-probabilities for (query row, segment column) pairs. Rows follow the
// query order of one candidate extension.
struct ScoreMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major

  static ScoreMatrix filled(std::size_t rows, std::size_t cols, double value);

  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
};

// Probability floor applied before taking logs, so a hard zero from a scorer
// cannot poison a whole alignment.
inline constexpr double kScoreFloor = 1e-8;

double clamp_log_prob(double p);

struct Alignment {
  // segment_of[j] is the segment assigned to query row j; strictly increasing,
  // which encodes the one-segment-per-query and order-monotonicity rules.
  std::vector<int> segment_of;
  double score = 0.0;  // sum of the chosen log-probabilities
};

// Maximizing recurrence over order-preserving assignments:
//   F(j, t) = max(scores(j, t) + F(j+1, t+1), F(j, t+1))
// with F(N, .) = 0 and F infeasible when fewer segments than queries remain
// (the equal-remainder case therefore collapses to the identity assignment,
// and a final lone query takes its best remaining segment). Ties prefer the
// earlier segment. Requires rows <= cols.
Alignment align_dp(const ScoreMatrix& scores);

// Exhaustive reference: scans every strictly increasing assignment in
// lexicographic order. Guarded to small instances.
Alignment align_bruteforce(const ScoreMatrix& scores);

}  // namespace veriplan
