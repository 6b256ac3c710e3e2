#include "veriplan/align.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "veriplan/error.hpp"

namespace veriplan {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kBruteforceMaxCols = 14;

// Both implementations report the score as the same left-to-right sum over
// the chosen cells, so agreeing assignments produce bit-identical scores.
double assignment_score(const ScoreMatrix& m, const std::vector<int>& segment_of) {
  double total = 0.0;
  for (std::size_t j = 0; j < segment_of.size(); ++j) {
    total += m.at(j, static_cast<std::size_t>(segment_of[j]));
  }
  return total;
}

void check_shape(const ScoreMatrix& m) {
  if (m.rows == 0) raise(Errc::invalid_argument, "score matrix has no query rows");
  if (m.values.size() != m.rows * m.cols) {
    raise(Errc::dimension_mismatch, "score matrix storage does not match its shape");
  }
  if (m.rows > m.cols) {
    raise(Errc::too_few_segments, std::to_string(m.cols) + " segments for " +
                                      std::to_string(m.rows) + " queries");
  }
}

}  // namespace

ScoreMatrix ScoreMatrix::filled(std::size_t rows, std::size_t cols, double value) {
  return ScoreMatrix{rows, cols, std::vector<double>(rows * cols, value)};
}

double clamp_log_prob(double p) {
  const double floored = std::max(p, kScoreFloor);
  return std::min(std::log(floored), 0.0);
}

Alignment align_dp(const ScoreMatrix& scores) {
  check_shape(scores);
  const std::size_t n = scores.rows;
  const std::size_t s = scores.cols;

  // f[j][t]: best achievable for queries j.. against segments t..
  std::vector<std::vector<double>> f(n + 1, std::vector<double>(s + 1, kNegInf));
  for (std::size_t t = 0; t <= s; ++t) f[n][t] = 0.0;
  for (std::size_t j = n; j-- > 0;) {
    for (std::size_t t = s; t-- > 0;) {
      if (s - t < n - j) continue;  // not enough segments left
      const double take = scores.at(j, t) + f[j + 1][t + 1];
      const double skip = f[j][t + 1];
      f[j][t] = std::max(take, skip);
    }
  }

  Alignment out;
  out.segment_of.reserve(n);
  std::size_t t = 0;
  for (std::size_t j = 0; j < n; ++j) {
    // Matching on ties keeps the earliest segment.
    while (scores.at(j, t) + f[j + 1][t + 1] < f[j][t + 1]) ++t;
    out.segment_of.push_back(static_cast<int>(t));
    ++t;
  }
  out.score = assignment_score(scores, out.segment_of);
  return out;
}

Alignment align_bruteforce(const ScoreMatrix& scores) {
  check_shape(scores);
  if (scores.cols > kBruteforceMaxCols) {
    raise(Errc::size_limit_exceeded,
          "bruteforce alignment supports up to " + std::to_string(kBruteforceMaxCols) +
              " segments, got " + std::to_string(scores.cols));
  }
  const int n = static_cast<int>(scores.rows);
  const int s = static_cast<int>(scores.cols);

  std::vector<int> pick(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) pick[static_cast<std::size_t>(j)] = j;

  Alignment best;
  best.score = kNegInf;
  while (true) {
    const double total = assignment_score(scores, pick);
    // Strict improvement keeps the lexicographically first optimum.
    if (total > best.score) {
      best.score = total;
      best.segment_of = pick;
    }
    // Advance to the next strictly increasing assignment.
    int j = n - 1;
    while (j >= 0 && pick[static_cast<std::size_t>(j)] == s - (n - j)) --j;
    if (j < 0) break;
    ++pick[static_cast<std::size_t>(j)];
    for (int i = j + 1; i < n; ++i) {
      pick[static_cast<std::size_t>(i)] = pick[static_cast<std::size_t>(i - 1)] + 1;
    }
  }
  return best;
}

}  // namespace veriplan
