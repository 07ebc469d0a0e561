// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "vidsum/types.hpp"

namespace vidsum {

inline constexpr std::string_view kStatsTokenizer = "whitespace";

/// Exact integer tallies behind DatasetStats; combine by addition.
struct StatsTally {
  std::size_t videos = 0;
  std::size_t captions = 0;
  std::size_t keyframes = 0;
  std::size_t words = 0;

  StatsTally& operator+=(const StatsTally& o);
};

struct DatasetStats {
  std::size_t num_videos = 0;
  double avg_keyframes_per_caption = 0.0;
  double avg_captions_per_video = 0.0;
  double avg_words_per_caption = 0.0;
};

/// Whitespace-separated tokens after trimming.
std::size_t count_words(std::string_view caption);

StatsTally tally(const VideoRecord& rec);
DatasetStats stats_from_tally(const StatsTally& t);

/// Throws ValidationError on an empty record list.
DatasetStats compute_stats(const std::vector<VideoRecord>& records);

std::string stats_to_json(const DatasetStats& s);
std::string stats_to_table(const DatasetStats& s);

}  // namespace vidsum
