// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "vidsum/features.hpp"
#include "vidsum/types.hpp"

namespace vidsum {

enum class MatcherKind { kExact, kCosine };

std::string to_string(MatcherKind kind);
MatcherKind parse_matcher(const std::string& name);  // "ex"/"exact" or "cos"/"cosine"

/// N x M matrix of per-(prediction, reference slot) matching scores in [0, 1].
class ScoreMatrix {
 public:
  ScoreMatrix(std::size_t rows, std::size_t cols, MatcherKind kind = MatcherKind::kExact);
  ScoreMatrix(std::vector<std::vector<double>> values, MatcherKind kind = MatcherKind::kExact);

  std::size_t rows() const { return rows_; }  // N
  std::size_t cols() const { return cols_; }  // M
  MatcherKind kind() const { return kind_; }

  double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, double v);

 private:
  std::size_t rows_;
  std::size_t cols_;
  MatcherKind kind_;
  std::vector<double> values_;
};

/// Strictly increasing assignment of each prediction to a reference slot.
struct Alignment {
  std::vector<std::size_t> assign;
  double score = 0.0;
};

/// 1 if `p` is one of the slot's keyframes, else 0.
double match_exact(FrameIndex p, const ReferenceSlot& slot);

/// Best clamped cosine between the mean-centered feature of `p` and that of
/// any slot keyframe. Pairs where either centered vector has L2 norm below
/// 1e-12 contribute 0.
double match_cos(FrameIndex p, const ReferenceSlot& slot, const FeatureMatrix& fm);

/// max(0, cos) of two mean-centered frames; symmetric in its arguments.
double centered_cosine(const FeatureMatrix& fm, FrameIndex a, FrameIndex b);

ScoreMatrix akm_score_matrix(const PredictedSummary& pred, const VideoRecord& refs, MatcherKind matcher,
                             const FeatureMatrix* fm = nullptr);

/// Best mean score over strictly increasing assignments, by dynamic programming.
///
/// D[i][j] = max(D[i][j-1], D[i-1][j-1] + S[i-1][j-1]) with D[0][j] = 0 and
/// D[i][0] = -inf for i > 0. Backtracking from (N, M) takes the skip move
/// whenever it ties, so among optimal alignments the leftmost is returned.
Alignment akm_align(const ScoreMatrix& s);

/// Exhaustive reference for akm_align. Throws CombinatorialLimitError when
/// C(M, N) exceeds `limit`.
double akm_bruteforce(const ScoreMatrix& s, std::size_t limit = 1'000'000);

double akm_ex(const PredictedSummary& pred, const VideoRecord& refs);
double akm_cos(const PredictedSummary& pred, const VideoRecord& refs, const FeatureMatrix& fm);

/// C(n, k) saturating at SIZE_MAX.
std::size_t binomial(std::size_t n, std::size_t k);

}  // namespace vidsum
