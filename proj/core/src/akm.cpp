// SPDX-License-Identifier: Apache-2.0
#include "vidsum/akm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "vidsum/error.hpp"

namespace vidsum {

namespace {
constexpr double kZeroNorm = 1e-12;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}  // namespace

std::string to_string(MatcherKind kind) { return kind == MatcherKind::kExact ? "ex" : "cos"; }

MatcherKind parse_matcher(const std::string& name) {
  if (name == "ex" || name == "exact") return MatcherKind::kExact;
  if (name == "cos" || name == "cosine") return MatcherKind::kCosine;
  throw ValidationError("unknown matcher '" + name + "' (expected ex or cos)");
}

ScoreMatrix::ScoreMatrix(std::size_t rows, std::size_t cols, MatcherKind kind)
    : rows_(rows), cols_(cols), kind_(kind), values_(rows * cols, 0.0) {
  if (rows_ == 0) throw ValidationError("score matrix needs at least one prediction");
  if (rows_ > cols_) {
    throw ValidationError("prediction longer than references (N=" + std::to_string(rows_) +
                          ", M=" + std::to_string(cols_) + ")");
  }
}

ScoreMatrix::ScoreMatrix(std::vector<std::vector<double>> values, MatcherKind kind)
    : ScoreMatrix(values.size(), values.empty() ? 0 : values.front().size(), kind) {
  for (std::size_t i = 0; i < rows_; ++i) {
    if (values[i].size() != cols_) throw ValidationError("score matrix rows have different lengths");
    for (std::size_t j = 0; j < cols_; ++j) set(i, j, values[i][j]);
  }
}

void ScoreMatrix::set(std::size_t i, std::size_t j, double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("score matrix entry outside [0, 1]: " + std::to_string(v));
  values_[i * cols_ + j] = v;
}

double match_exact(FrameIndex p, const ReferenceSlot& slot) { return slot.contains(p) ? 1.0 : 0.0; }

double centered_cosine(const FeatureMatrix& fm, FrameIndex a, FrameIndex b) {
  const auto ra = fm.row(a);
  const auto rb = fm.row(b);
  const auto mean = fm.mean();
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t d = 0; d < fm.dim(); ++d) {
    const double x = static_cast<double>(ra[d]) - mean[d];
    const double y = static_cast<double>(rb[d]) - mean[d];
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  na = std::sqrt(na);
  nb = std::sqrt(nb);
  if (na < kZeroNorm || nb < kZeroNorm) return 0.0;
  return std::clamp(dot / (na * nb), 0.0, 1.0);
}

double match_cos(FrameIndex p, const ReferenceSlot& slot, const FeatureMatrix& fm) {
  double best = 0.0;
  for (auto a : slot.keyframes) best = std::max(best, centered_cosine(fm, p, a));
  return best;
}

ScoreMatrix akm_score_matrix(const PredictedSummary& pred, const VideoRecord& refs, MatcherKind matcher,
                             const FeatureMatrix* fm) {
  const std::size_t n = pred.pairs.size();
  const std::size_t m = refs.references.size();
  if (n > m) {
    throw ValidationError("video '" + refs.video_id + "': prediction longer than references (N=" + std::to_string(n) +
                          ", M=" + std::to_string(m) + ")");
  }
  if (matcher == MatcherKind::kCosine && fm == nullptr) {
    throw ValidationError("video '" + refs.video_id + "': cosine matcher requires features");
  }
  ScoreMatrix s(n, m, matcher);
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = pred.pairs[i].frame;
    for (std::size_t j = 0; j < m; ++j) {
      s.set(i, j, matcher == MatcherKind::kExact ? match_exact(p, refs.references[j])
                                                 : match_cos(p, refs.references[j], *fm));
    }
  }
  return s;
}

Alignment akm_align(const ScoreMatrix& s) {
  const std::size_t n = s.rows();
  const std::size_t m = s.cols();
  const std::size_t w = m + 1;
  std::vector<double> dp((n + 1) * w, kNegInf);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return dp[i * w + j]; };

  for (std::size_t j = 0; j <= m; ++j) at(0, j) = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      at(i, j) = std::max(at(i, j - 1), at(i - 1, j - 1) + s(i - 1, j - 1));
    }
  }

  Alignment out;
  out.assign.resize(n);
  std::size_t j = m;
  for (std::size_t i = n; i > 0; --j) {
    if (at(i, j - 1) == at(i, j)) continue;  // skip slot j-1
    out.assign[i - 1] = j - 1;
    --i;
  }
  out.score = at(n, m) / static_cast<double>(n);
  return out;
}

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    // r * (n - k + i) / i stays integral at each step.
    const std::size_t num = n - k + i;
    if (r > std::numeric_limits<std::size_t>::max() / num) return std::numeric_limits<std::size_t>::max();
    r = r * num / i;
  }
  return r;
}

double akm_bruteforce(const ScoreMatrix& s, std::size_t limit) {
  const std::size_t n = s.rows();
  const std::size_t m = s.cols();
  if (binomial(m, n) > limit) {
    throw CombinatorialLimitError("akm_bruteforce: C(" + std::to_string(m) + ", " + std::to_string(n) +
                                  ") exceeds limit " + std::to_string(limit));
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  double best = kNegInf;
  while (true) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += s(i, idx[i]);
    best = std::max(best, sum);
    // Next combination in lexicographic order.
    std::size_t k = n;
    while (k > 0 && idx[k - 1] == m - n + k - 1) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t t = k; t < n; ++t) idx[t] = idx[t - 1] + 1;
  }
  return best / static_cast<double>(n);
}

double akm_ex(const PredictedSummary& pred, const VideoRecord& refs) {
  return akm_align(akm_score_matrix(pred, refs, MatcherKind::kExact)).score;
}

double akm_cos(const PredictedSummary& pred, const VideoRecord& refs, const FeatureMatrix& fm) {
  return akm_align(akm_score_matrix(pred, refs, MatcherKind::kCosine, &fm)).score;
}

}  // namespace vidsum
