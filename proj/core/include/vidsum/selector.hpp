// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vidsum/types.hpp"

namespace vidsum {

enum class SelectorMode { kHard, kSoft };

std::string to_string(SelectorMode mode);
SelectorMode parse_selector_mode(const std::string& name);

struct SelectorConfig {
  std::size_t n = 1;
  double max_segment_fraction = 0.75;
  SelectorMode mode = SelectorMode::kHard;
  double overlap_penalty_per_s = 1.0;  // soft mode only
  double segment_weight = 1.0;
  double caption_weight = 1.0;

  void validate() const;
};

struct Selection {
  std::vector<Candidate> chosen;        // chronological
  std::vector<std::size_t> indices;     // positions in the input list
  double objective = 0.0;
  SelectorMode mode_used = SelectorMode::kHard;
  bool fell_back = false;               // hard mode was infeasible, soft mode used
};

/// Drops candidates longer than max_segment_fraction * duration_s and sorts
/// the survivors by (segment end, segment start).
std::vector<Candidate> prefilter(std::span<const Candidate> cands, double duration_s, const SelectorConfig& cfg);

/// segment_weight * segment_score + caption_weight * caption_score.
double utility(const Candidate& c, const SelectorConfig& cfg);

/// Optimal choice of exactly cfg.n candidates from a list sorted by segment end.
///
/// Hard mode maximizes total utility over pairwise non-overlapping segments
/// and falls back to soft mode when no such set of size n exists. Soft mode
/// chains candidates in list order with strictly increasing keyframes and
/// subtracts overlap_penalty_per_s times the overlap with the previously
/// chosen segment. Throws InfeasibleError when soft mode has no solution.
Selection select_n_dp(std::span<const Candidate> sorted, const SelectorConfig& cfg);

/// Exhaustive reference for select_n_dp; ties go to the lexicographically
/// smallest index tuple. Throws CombinatorialLimitError beyond `limit` subsets.
Selection select_bruteforce(std::span<const Candidate> sorted, const SelectorConfig& cfg,
                            std::size_t limit = 1'000'000);

/// Objective of an index chain under a mode, summed in chain order. Returns
/// nullopt-like NaN when the chain violates the mode's constraints.
double chain_objective(std::span<const Candidate> sorted, std::span<const std::size_t> chain, SelectorMode mode,
                       const SelectorConfig& cfg);

}  // namespace vidsum
