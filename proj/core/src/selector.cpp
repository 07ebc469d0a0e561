// SPDX-License-Identifier: Apache-2.0
#include "vidsum/selector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "vidsum/akm.hpp"
#include "vidsum/error.hpp"

namespace vidsum {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

bool sorted_by_end(std::span<const Candidate> c) {
  return std::is_sorted(c.begin(), c.end(), [](const Candidate& a, const Candidate& b) {
    return a.segment_end_s < b.segment_end_s;
  });
}

Selection finish(std::span<const Candidate> sorted, std::vector<std::size_t> idx, double objective,
                 SelectorMode mode) {
  Selection s;
  s.indices = std::move(idx);
  for (auto i : s.indices) s.chosen.push_back(sorted[i]);
  s.objective = objective;
  s.mode_used = mode;
  return s;
}

// The term a chosen candidate adds after `prev` (kNone for the first).
double soft_term(std::span<const Candidate> c, std::size_t prev, std::size_t cur, const SelectorConfig& cfg) {
  if (prev == kNone) return utility(c[cur], cfg);
  return utility(c[cur], cfg) - cfg.overlap_penalty_per_s * overlap_seconds(c[prev], c[cur]);
}

std::optional<Selection> hard_dp(std::span<const Candidate> c, const SelectorConfig& cfg) {
  const std::size_t count = c.size();
  const std::size_t n = cfg.n;
  if (count < n) return std::nullopt;

  // compat[c]: number of leading candidates that end no later than c starts.
  std::vector<std::size_t> compat(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto it = std::upper_bound(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(i), c[i].segment_start_s,
                                     [](double t, const Candidate& x) { return t < x.segment_end_s; });
    compat[i] = static_cast<std::size_t>(it - c.begin());
  }

  const std::size_t w = n + 1;
  std::vector<double> best((count + 1) * w, kNegInf);
  auto at = [&](std::size_t i, std::size_t k) -> double& { return best[i * w + k]; };
  for (std::size_t i = 0; i <= count; ++i) at(i, 0) = 0.0;
  for (std::size_t i = 1; i <= count; ++i) {
    for (std::size_t k = 1; k <= n; ++k) {
      at(i, k) = std::max(at(i - 1, k), at(compat[i - 1], k - 1) + utility(c[i - 1], cfg));
    }
  }
  if (at(count, n) == kNegInf) return std::nullopt;

  std::vector<std::size_t> idx;
  std::size_t i = count;
  for (std::size_t k = n; k > 0;) {
    if (at(i - 1, k) >= at(i, k)) {
      --i;
      continue;
    }
    idx.push_back(i - 1);
    i = compat[i - 1];
    --k;
  }
  std::reverse(idx.begin(), idx.end());
  return finish(c, std::move(idx), at(count, n), SelectorMode::kHard);
}

Selection soft_dp(std::span<const Candidate> c, const SelectorConfig& cfg) {
  const std::size_t count = c.size();
  const std::size_t n = cfg.n;
  if (count < n) {
    throw InfeasibleError("selector: " + std::to_string(count) + " candidates cannot supply " + std::to_string(n) +
                          " distinct picks");
  }
  // best[i][k]: best chain of k candidates ending with candidate i.
  const std::size_t w = n + 1;
  std::vector<double> best(count * w, kNegInf);
  std::vector<std::size_t> from(count * w, kNone);
  for (std::size_t i = 0; i < count; ++i) {
    best[i * w + 1] = 0.0 + soft_term(c, kNone, i, cfg);
    for (std::size_t k = 2; k <= n; ++k) {
      for (std::size_t j = 0; j < i; ++j) {
        if (!(c[j].keyframe < c[i].keyframe)) continue;
        const double prev = best[j * w + k - 1];
        if (prev == kNegInf) continue;
        const double v = prev + soft_term(c, j, i, cfg);
        if (v > best[i * w + k]) {
          best[i * w + k] = v;
          from[i * w + k] = j;
        }
      }
    }
  }
  std::size_t last = kNone;
  for (std::size_t i = 0; i < count; ++i) {
    if (best[i * w + n] == kNegInf) continue;
    if (last == kNone || best[i * w + n] > best[last * w + n]) last = i;
  }
  if (last == kNone) {
    throw InfeasibleError("selector: no chain of " + std::to_string(n) + " candidates with increasing keyframes");
  }
  std::vector<std::size_t> idx;
  for (std::size_t i = last, k = n; k > 0; --k) {
    idx.push_back(i);
    i = from[i * w + k];
  }
  std::reverse(idx.begin(), idx.end());
  return finish(c, std::move(idx), best[last * w + n], SelectorMode::kSoft);
}

}  // namespace

std::string to_string(SelectorMode mode) { return mode == SelectorMode::kHard ? "hard" : "soft"; }

SelectorMode parse_selector_mode(const std::string& name) {
  if (name == "hard") return SelectorMode::kHard;
  if (name == "soft") return SelectorMode::kSoft;
  throw ValidationError("unknown selector mode '" + name + "' (expected hard or soft)");
}

void SelectorConfig::validate() const {
  if (n == 0) throw ValidationError("selector: n must be positive");
  if (!(max_segment_fraction > 0.0 && max_segment_fraction <= 1.0)) {
    throw ValidationError("selector: max_segment_fraction must be in (0, 1]");
  }
  if (!(overlap_penalty_per_s >= 0.0) || !std::isfinite(overlap_penalty_per_s)) {
    throw ValidationError("selector: overlap_penalty_per_s must be finite and non-negative");
  }
  if (!std::isfinite(segment_weight) || !std::isfinite(caption_weight)) {
    throw ValidationError("selector: weights must be finite");
  }
}

double utility(const Candidate& c, const SelectorConfig& cfg) {
  return cfg.segment_weight * c.segment_score + cfg.caption_weight * c.caption_score;
}

std::vector<Candidate> prefilter(std::span<const Candidate> cands, double duration_s, const SelectorConfig& cfg) {
  const double cap = cfg.max_segment_fraction * duration_s;
  std::vector<Candidate> out;
  for (const auto& c : cands) {
    if (!(c.length_s() > cap)) out.push_back(c);
  }
  std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    if (a.segment_end_s != b.segment_end_s) return a.segment_end_s < b.segment_end_s;
    return a.segment_start_s < b.segment_start_s;
  });
  return out;
}

Selection select_n_dp(std::span<const Candidate> sorted, const SelectorConfig& cfg) {
  cfg.validate();
  if (sorted.empty()) throw InfeasibleError("selector: no candidates");
  if (!sorted_by_end(sorted)) throw ValidationError("selector: candidates must be sorted by segment end");
  if (cfg.mode == SelectorMode::kHard) {
    if (auto s = hard_dp(sorted, cfg)) return *s;
    auto s = soft_dp(sorted, cfg);
    s.fell_back = true;
    return s;
  }
  return soft_dp(sorted, cfg);
}

double chain_objective(std::span<const Candidate> sorted, std::span<const std::size_t> chain, SelectorMode mode,
                       const SelectorConfig& cfg) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t a = 0; a < chain.size(); ++a) {
    if (chain[a] >= sorted.size()) return nan;
    if (a > 0 && chain[a - 1] >= chain[a]) return nan;
  }
  double sum = 0.0;
  if (mode == SelectorMode::kHard) {
    for (std::size_t a = 0; a < chain.size(); ++a) {
      for (std::size_t b = a + 1; b < chain.size(); ++b) {
        if (overlap_seconds(sorted[chain[a]], sorted[chain[b]]) > 0.0) return nan;
      }
    }
    for (auto i : chain) sum += utility(sorted[i], cfg);
    return sum;
  }
  for (std::size_t a = 0; a < chain.size(); ++a) {
    if (a > 0 && !(sorted[chain[a - 1]].keyframe < sorted[chain[a]].keyframe)) return nan;
    sum += soft_term(sorted, a == 0 ? kNone : chain[a - 1], chain[a], cfg);
  }
  return sum;
}

Selection select_bruteforce(std::span<const Candidate> sorted, const SelectorConfig& cfg, std::size_t limit) {
  cfg.validate();
  const std::size_t count = sorted.size();
  const std::size_t n = cfg.n;
  if (count < n) {
    if (cfg.mode == SelectorMode::kSoft || count == 0) throw InfeasibleError("selector: not enough candidates");
  }
  if (count >= n && binomial(count, n) > limit) {
    throw CombinatorialLimitError("select_bruteforce: C(" + std::to_string(count) + ", " + std::to_string(n) +
                                  ") exceeds limit " + std::to_string(limit));
  }

  auto search = [&](SelectorMode mode) -> std::optional<Selection> {
    if (count < n) return std::nullopt;
    std::vector<std::size_t> idx(n), best_idx;
    std::iota(idx.begin(), idx.end(), 0);
    double best = kNegInf;
    while (true) {
      const double v = chain_objective(sorted, idx, mode, cfg);
      if (!std::isnan(v) && (best_idx.empty() || v > best)) {
        best = v;
        best_idx = idx;
      }
      std::size_t k = n;
      while (k > 0 && idx[k - 1] == count - n + k - 1) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (std::size_t t = k; t < n; ++t) idx[t] = idx[t - 1] + 1;
    }
    if (best_idx.empty()) return std::nullopt;
    return finish(sorted, std::move(best_idx), best, mode);
  };

  if (cfg.mode == SelectorMode::kHard) {
    if (auto s = search(SelectorMode::kHard)) return *s;
  }
  auto s = search(SelectorMode::kSoft);
  if (!s) throw InfeasibleError("selector: no feasible selection");
  s->fell_back = cfg.mode == SelectorMode::kHard;
  return *s;
}

}  // namespace vidsum
