// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vidsum/types.hpp"

namespace vidsum {

/// A (frame, caption) choice; caption_id is the caption's position among
/// the frame's candidates.
struct BeamPair {
  FrameIndex frame;
  std::uint32_t caption_id = 0;
  std::string caption;

  friend bool operator==(const BeamPair&, const BeamPair&) = default;
};

struct ScoreComponents {
  double frame_ll = 0.0;
  double caption_ll = 0.0;
};

/// Likelihood oracle consulted by the beam search. Implementations must be
/// deterministic and safe to call concurrently.
class Scorer {
 public:
  virtual ~Scorer() = default;

  /// Log-likelihoods of choosing `frame` after `prefix`, and of `caption`
  /// for it.
  virtual ScoreComponents score_components(std::span<const BeamPair> prefix, FrameIndex frame,
                                           std::uint32_t caption_id, const std::string& caption) const = 0;
  virtual bool prefix_sensitive() const = 0;
  virtual std::string describe() const = 0;
};

/// Context-free likelihoods read from JSONL rows
/// {"frame":int,"caption_id":int,"frame_ll":num,"caption_ll":num}.
class TableScorer : public Scorer {
 public:
  void add(FrameIndex frame, std::uint32_t caption_id, ScoreComponents c);
  std::size_t size() const { return table_.size(); }

  ScoreComponents score_components(std::span<const BeamPair> prefix, FrameIndex frame, std::uint32_t caption_id,
                                   const std::string& caption) const override;
  bool prefix_sensitive() const override { return false; }
  std::string describe() const override { return "table"; }

 private:
  std::map<std::pair<std::uint32_t, std::uint32_t>, ScoreComponents> table_;
};

/// Table scorers per video. Rows may carry an optional "video_id"; rows
/// without one apply to every video.
class ScoreTable {
 public:
  const TableScorer& for_video(const std::string& video_id) const;
  void add(const std::string& video_id, FrameIndex frame, std::uint32_t caption_id, ScoreComponents c);

 private:
  TableScorer shared_;
  std::map<std::string, TableScorer> per_video_;
  friend ScoreTable parse_score_table(std::string_view text);
};

ScoreTable parse_score_table(std::string_view text);
ScoreTable load_score_table(const std::filesystem::path& path);

/// Pseudo-likelihoods in [-10, 0] from a 64-bit mix of the seed, the prefix
/// frames and caption ids, and the candidate. Prefix-sensitive.
class HashScorer : public Scorer {
 public:
  explicit HashScorer(std::uint64_t seed) : seed_(seed) {}

  ScoreComponents score_components(std::span<const BeamPair> prefix, FrameIndex frame, std::uint32_t caption_id,
                                   const std::string& caption) const override;
  bool prefix_sensitive() const override { return true; }
  std::string describe() const override { return "hash:" + std::to_string(seed_); }

 private:
  std::uint64_t seed_;
};

std::unique_ptr<Scorer> table_scorer(const std::filesystem::path& path);
std::unique_ptr<Scorer> hash_scorer(std::uint64_t seed);

enum class NormPool { kStepGlobal, kPerBeam };

std::string to_string(NormPool pool);
NormPool parse_norm_pool(const std::string& name);

struct BeamConfig {
  std::size_t n = 1;
  std::size_t width = 8;
  double alpha = 0.5;
  NormPool norm_pool = NormPool::kStepGlobal;

  void validate() const;
};

/// Candidate captions of one frame.
struct FrameOptions {
  FrameIndex frame;
  std::vector<std::string> captions;
};

/// Frames of one video, strictly increasing, each with at least one caption.
struct BeamInput {
  std::string video_id;
  std::vector<FrameOptions> frames;

  void validate() const;
};

/// Groups Candidate JSONL rows (segment fields optional) by video. A frame's
/// captions are numbered in order of first appearance unless rows carry a
/// "caption_id". Videos keep their first-appearance order.
std::vector<BeamInput> parse_beam_inputs(std::string_view text);
std::vector<BeamInput> load_beam_inputs(const std::filesystem::path& path);

struct BeamState {
  std::vector<BeamPair> pairs;
  double norm_sum_frame = 0.0;    // sum of normalized frame components
  double norm_sum_caption = 0.0;  // sum of normalized caption components
  double total = 0.0;             // sum of alpha-weighted contributions
};

struct BeamResult {
  PredictedSummary summary;
  std::vector<BeamPair> pairs;
  double score = 0.0;  // total / N
  std::vector<BeamState> survivors;
};

/// (v - min) / (max - min); a constant list maps to 0.5 everywhere.
std::vector<double> minmax_normalize(std::span<const double> values);

/// Width-W beam search over chronologically increasing (frame, caption)
/// pairs. Each round extends every beam with every later frame and caption,
/// min-max normalizes the frame and caption likelihoods over the pool chosen
/// by cfg.norm_pool, adds alpha * frame + (1 - alpha) * caption to the
/// running sum and keeps the best W. Ties go to the smaller frame tuple, then
/// the smaller caption tuple.
BeamResult beam_select(const BeamInput& input, const Scorer& scorer, const BeamConfig& cfg);

/// Unpruned search with the same round structure: round r normalizes over
/// every valid length-r path (per parent for per_beam). The W -> infinity
/// limit of beam_select. Throws CombinatorialLimitError when any round holds
/// more than `limit` paths.
BeamResult exhaustive_select(const BeamInput& input, const Scorer& scorer, const BeamConfig& cfg,
                             std::size_t limit = 1'000'000);

/// Number of valid length-k paths, for k = 1..n (saturating).
std::vector<std::size_t> count_paths(const BeamInput& input, std::size_t n);

}  // namespace vidsum
