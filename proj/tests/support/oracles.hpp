// SPDX-License-Identifier: Apache-2.0
// Independent reference implementations and random fixture builders used by
// the unit, property and acceptance suites. Nothing here calls the library
// routine it checks.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "vidsum/akm.hpp"
#include "vidsum/beam.hpp"
#include "vidsum/features.hpp"
#include "vidsum/filter.hpp"
#include "vidsum/selector.hpp"
#include "vidsum/stats.hpp"
#include "vidsum/types.hpp"

namespace vidsum::testing {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo = 0.0, double hi = 1.0);
int uniform_int(Rng& rng, int lo, int hi);  // inclusive

std::vector<std::vector<double>> random_scores(Rng& rng, std::size_t n, std::size_t m);

/// Max over strictly increasing column choices of the mean score, by plain recursion.
double akm_oracle(const std::vector<std::vector<double>>& s);

FeatureMatrix random_features(Rng& rng, const std::string& id, std::size_t frames, std::size_t dim);

/// Cosine of mean-centered rows clamped at 0, mean recomputed in long double.
double cosine_oracle(const FeatureMatrix& fm, std::size_t a, std::size_t b);

/// Record with `slots` references, each holding 1..max_k random keyframes.
VideoRecord random_record(Rng& rng, const std::string& id, std::uint32_t frames, std::size_t slots,
                          std::size_t max_k);
/// N strictly increasing frames with captions drawn from a small vocabulary.
PredictedSummary random_prediction(Rng& rng, const std::string& id, std::uint32_t frames, std::size_t n);
std::string random_sentence(Rng& rng, std::size_t min_words, std::size_t max_words);

struct MeteorOracle {
  std::size_t matches = 0;
  std::size_t chunks = 0;
  double score = 0.0;
};
/// Enumerates every exact matching of two short captions.
MeteorOracle meteor_oracle(const std::string& cand, const std::string& ref);

std::vector<Candidate> random_candidates(Rng& rng, std::size_t count, double duration);
/// Best objective over every n-subset by bitmask enumeration; nullopt when none is feasible.
std::optional<double> select_oracle(const std::vector<Candidate>& sorted, const SelectorConfig& cfg,
                                    SelectorMode mode);

BeamInput random_beam_input(Rng& rng, std::size_t max_frames, std::size_t max_captions);

struct BeamOracle {
  std::vector<BeamPair> pairs;
  double total = 0.0;
};
/// Scores every path round by round with min-max pools over all paths of
/// that length (or per parent), then returns the best full-length path.
BeamOracle beam_oracle(const BeamInput& input, const Scorer& scorer, const BeamConfig& cfg);

StatsTally recount(const std::vector<VideoRecord>& records);

/// Keyframes expected to survive filtering, recomputed from raw rows.
std::vector<FrameIndex> filter_oracle(const ReferenceSlot& slot, const FeatureMatrix& fm, double k_sigma,
                                      std::size_t min_keep);

std::filesystem::path make_temp_dir(const std::string& prefix);

/// Writes images.vsft (`count` rows of `dim` values in [0.2, 1.2)) and a
/// source.jsonl naming each row; story_size > 0 groups consecutive rows into
/// stories. Returns the JSONL path.
std::filesystem::path write_source_fixture(const std::filesystem::path& dir, std::size_t count, std::size_t dim,
                                           Rng& rng, std::size_t story_size = 0);

/// Input files for every CLI subcommand, written into one directory.
struct CliFixture {
  std::filesystem::path dir;
  std::filesystem::path dataset;     // dataset.json, 3 videos of 20 frames
  std::filesystem::path features;    // features/<id>.vsft
  std::filesystem::path predictions; // pred.jsonl
  std::filesystem::path external;    // external.jsonl
  std::filesystem::path candidates;  // candidates.jsonl
  std::filesystem::path scores;      // scores.jsonl, a row for every beam pair
  std::filesystem::path source;      // source.jsonl + images.vsft
};
CliFixture write_cli_fixture(const std::filesystem::path& dir, std::uint64_t seed);

}  // namespace vidsum::testing
