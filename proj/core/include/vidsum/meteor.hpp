// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace vidsum {

/// Lowercases, deletes ASCII punctuation and splits on whitespace.
std::vector<std::string> tokenize_caption(std::string_view text);

struct MeteorResult {
  double score = 0.0;
  std::size_t matches = 0;
  std::size_t chunks = 0;
  double precision = 0.0;
  double recall = 0.0;
  double fmean = 0.0;
  double penalty = 0.0;
  bool empty_input = false;  // candidate or reference had no tokens
};

/// METEOR restricted to the exact unigram module.
///
/// The matching has maximum size and, among maximum matchings, the fewest
/// chunks. Fmean = 10PR / (R + 9P), penalty = 0.5 (chunks / m)^3.
MeteorResult meteor_exact_detail(std::string_view candidate, std::string_view reference);
MeteorResult meteor_exact_tokens(const std::vector<std::string>& cand, const std::vector<std::string>& ref);

inline double meteor_exact(std::string_view candidate, std::string_view reference) {
  return meteor_exact_detail(candidate, reference).score;
}

/// Minimum chunk count over maximum exact matchings, with the matched count.
struct ChunkedMatching {
  std::size_t matches = 0;
  std::size_t chunks = 0;
};
ChunkedMatching min_chunk_matching(const std::vector<std::string>& cand, const std::vector<std::string>& ref);

}  // namespace vidsum
