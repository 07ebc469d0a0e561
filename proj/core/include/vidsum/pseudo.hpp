// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "vidsum/features.hpp"
#include "vidsum/rng.hpp"

namespace vidsum {

enum class NoiseMode { kPerFrame, kPerElement };
enum class SourceSampling { kRandom, kStory };

std::string to_string(NoiseMode mode);
std::string to_string(SourceSampling sampling);
NoiseMode parse_noise_mode(const std::string& name);
SourceSampling parse_sampling(const std::string& name);

struct PseudoConfig {
  std::size_t n = 4;              // keyframes per instance
  std::size_t encoder_len = 64;   // frame slots per instance
  double beta = 0.05;
  std::uint64_t seed = 0;
  NoiseMode noise = NoiseMode::kPerFrame;
  SourceSampling sampling = SourceSampling::kRandom;

  void validate() const;
};

struct PseudoInstance {
  FeatureMatrix features;                  // encoder_len x dim
  std::vector<std::uint32_t> keyframe_indices;
  std::vector<std::string> captions;
  std::vector<std::uint32_t> span_bounds;  // n + 1 cut points, 0 ... encoder_len
  double v_bar = 0.0;                      // mean of every noise-free feature value
  std::uint64_t seed = 0;                  // seed of the instance's stream
};

/// 0 = cut_0 < ... < cut_n = encoder_len, interior cuts drawn uniformly
/// without replacement from 1 .. encoder_len - 1.
std::vector<std::uint32_t> split_spans(std::size_t encoder_len, std::size_t n, SplitMix64& rng);

/// Builds one instance: span j repeats image j, one keyframe is drawn
/// uniformly inside each span, and every other row receives v_bar * beta * x
/// with x standard normal (one draw per row, or per value in per-element
/// mode). Keyframe rows are copied bit-exactly.
PseudoInstance make_instance(std::span<const std::vector<float>> images, std::span<const std::string> captions,
                             const PseudoConfig& cfg, SplitMix64& rng, std::uint64_t seed = 0);

/// Checks the span and keyframe invariants; throws ValidationError.
void validate_instance(const PseudoInstance& inst, std::size_t n, std::size_t encoder_len);

std::string instance_metadata_json(const PseudoInstance& inst);

/// One row of a source image-caption collection.
struct SourceItem {
  std::string image_id;
  std::string feature_file;  // relative to the collection file
  std::uint32_t row = 0;
  std::string caption;
  std::string story_id;      // empty when absent
};

// Source JSONL: {"image_id":str,"feature_file":str,"row":int,"caption":str,"story_id":str?}
std::vector<SourceItem> parse_source(std::string_view text);

struct GenSummary {
  std::size_t count = 0;
  std::vector<std::filesystem::path> files;
  std::filesystem::path manifest;
};

/// Writes `count` instances (instance_NNNNNN.vsft + .json) and manifest.json
/// into out_dir. Instance i draws from derive_seed(cfg.seed, i). Random
/// sampling picks n distinct items per instance; story sampling uses the
/// first n items of the i-th story holding at least n items.
GenSummary gen_dataset(const std::filesystem::path& source, std::size_t count, const PseudoConfig& cfg,
                       const std::filesystem::path& out_dir, std::size_t jobs = 1);

}  // namespace vidsum
