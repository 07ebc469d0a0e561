// SPDX-License-Identifier: Apache-2.0
#include "vidsum/meteor.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <unordered_map>

namespace vidsum {

std::vector<std::string> tokenize_caption(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else if (c < 0x80 && std::ispunct(c)) {
      continue;
    } else {
      cur.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

namespace {

// Exact search over maximum matchings for the one with the most adjacent
// links (cand i -> ref j followed by cand i+1 -> ref j+1). Chunks equal
// matches minus links. Memoized on (position, previous ref, used refs).
class ChunkSearch {
 public:
  static constexpr std::size_t kMaxRef = 64;
  static constexpr std::size_t kStateBudget = 1u << 16;

  ChunkSearch(const std::vector<std::string>& cand, const std::vector<std::string>& ref) {
    std::map<std::string, int> ids;
    auto id_of = [&](const std::string& w) { return ids.emplace(w, static_cast<int>(ids.size())).first->second; };
    for (const auto& w : cand) cand_.push_back(id_of(w));
    for (const auto& w : ref) ref_.push_back(id_of(w));
    const std::size_t nw = ids.size();
    need_.assign(nw, 0);
    std::vector<int> cc(nw, 0), rc(nw, 0);
    for (int w : cand_) ++cc[w];
    for (int w : ref_) ++rc[w];
    for (std::size_t w = 0; w < nw; ++w) {
      need_[w] = std::min(cc[w], rc[w]);
      matches_ += static_cast<std::size_t>(need_[w]);
    }
    // later_[i][w]: occurrences of w in cand at positions > i.
    later_.assign(cand_.size(), std::vector<int>(nw, 0));
    std::vector<int> acc(nw, 0);
    for (std::size_t i = cand_.size(); i-- > 0;) {
      later_[i] = acc;
      ++acc[cand_[i]];
    }
    ref_of_.assign(nw, {});
    for (std::size_t j = 0; j < ref_.size(); ++j) ref_of_[ref_[j]].push_back(static_cast<int>(j));
  }

  ChunkedMatching solve() {
    if (matches_ == 0) return {0, 0};
    if (ref_.size() <= kMaxRef) {
      matched_.assign(need_.size(), 0);
      const int links = best(0, -1, 0);
      if (!exhausted_) return {matches_, matches_ - static_cast<std::size_t>(links)};
    }
    return {matches_, matches_ - static_cast<std::size_t>(greedy_links())};
  }

 private:
  struct Key {
    std::uint32_t pos_prev;
    std::uint64_t mask;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return std::hash<std::uint64_t>{}(k.mask * 0x9E3779B97F4A7C15ull ^ k.pos_prev);
    }
  };

  // Returns the maximum links reachable from position i, or a large negative
  // value when the need counts can no longer be met.
  int best(std::size_t i, int prev, std::uint64_t mask) {
    if (i == cand_.size()) return 0;
    if (exhausted_) return 0;
    const Key key{static_cast<std::uint32_t>(i << 8 | static_cast<std::uint32_t>(prev + 1)), mask};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (memo_.size() >= kStateBudget) {
      exhausted_ = true;
      return 0;
    }

    const int w = cand_[i];
    int result = kInfeasible;
    if (matched_[w] + later_[i][w] >= need_[w]) {
      const int r = best(i + 1, -1, mask);
      if (r > result) result = r;
    }
    if (matched_[w] < need_[w]) {
      for (int j : ref_of_[w]) {
        if (mask >> j & 1u) continue;
        ++matched_[w];
        const int r = best(i + 1, j, mask | (std::uint64_t{1} << j));
        --matched_[w];
        if (r == kInfeasible) continue;
        const int gain = (prev >= 0 && j == prev + 1) ? 1 : 0;
        if (r + gain > result) result = r + gain;
      }
    }
    memo_.emplace(key, result);
    return result;
  }

  // Fallback for very long references or an exhausted state budget: match
  // each needed word, continuing the current chunk when possible and
  // otherwise taking the leftmost free reference position.
  int greedy_links() const {
    std::vector<int> matched(need_.size(), 0);
    std::vector<bool> used(ref_.size(), false);
    int prev = -1;
    int links = 0;
    for (std::size_t i = 0; i < cand_.size(); ++i) {
      const int w = cand_[i];
      if (matched[w] >= need_[w]) {
        prev = -1;
        continue;
      }
      int pick = -1;
      if (prev >= 0 && static_cast<std::size_t>(prev + 1) < ref_.size() && ref_[prev + 1] == w && !used[prev + 1]) {
        pick = prev + 1;
        ++links;
      } else {
        for (int j : ref_of_[w]) {
          if (!used[j]) {
            pick = j;
            break;
          }
        }
      }
      used[pick] = true;
      ++matched[w];
      prev = pick;
    }
    return links;
  }

  static constexpr int kInfeasible = -1'000'000;

  std::vector<int> cand_, ref_, need_, matched_;
  std::vector<std::vector<int>> later_, ref_of_;
  std::size_t matches_ = 0;
  bool exhausted_ = false;
  std::unordered_map<Key, int, KeyHash> memo_;
};

}  // namespace

ChunkedMatching min_chunk_matching(const std::vector<std::string>& cand, const std::vector<std::string>& ref) {
  return ChunkSearch(cand, ref).solve();
}

MeteorResult meteor_exact_tokens(const std::vector<std::string>& cand, const std::vector<std::string>& ref) {
  MeteorResult r;
  if (cand.empty() || ref.empty()) {
    r.empty_input = true;
    return r;
  }
  const auto cm = min_chunk_matching(cand, ref);
  r.matches = cm.matches;
  r.chunks = cm.chunks;
  if (r.matches == 0) return r;
  const double m = static_cast<double>(r.matches);
  r.precision = m / static_cast<double>(cand.size());
  r.recall = m / static_cast<double>(ref.size());
  r.fmean = 10.0 * r.precision * r.recall / (r.recall + 9.0 * r.precision);
  r.penalty = 0.5 * std::pow(static_cast<double>(r.chunks) / m, 3.0);
  r.score = r.fmean * (1.0 - r.penalty);
  return r;
}

MeteorResult meteor_exact_detail(std::string_view candidate, std::string_view reference) {
  return meteor_exact_tokens(tokenize_caption(candidate), tokenize_caption(reference));
}

}  // namespace vidsum
