// SPDX-License-Identifier: Apache-2.0
#include "vidsum/stats.hpp"

#include <cctype>
#include <cstdio>

#include "json_util.hpp"
#include "vidsum/error.hpp"

namespace vidsum {

StatsTally& StatsTally::operator+=(const StatsTally& o) {
  videos += o.videos;
  captions += o.captions;
  keyframes += o.keyframes;
  words += o.words;
  return *this;
}

std::size_t count_words(std::string_view caption) {
  std::size_t n = 0;
  bool in_word = false;
  for (char ch : caption) {
    const bool space = std::isspace(static_cast<unsigned char>(ch)) != 0;
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

StatsTally tally(const VideoRecord& rec) {
  StatsTally t;
  t.videos = 1;
  t.captions = rec.references.size();
  for (const auto& slot : rec.references) {
    t.keyframes += slot.keyframes.size();
    t.words += count_words(slot.caption);
  }
  return t;
}

DatasetStats stats_from_tally(const StatsTally& t) {
  if (t.videos == 0) throw ValidationError("stats: no videos");
  DatasetStats s;
  s.num_videos = t.videos;
  s.avg_captions_per_video = static_cast<double>(t.captions) / static_cast<double>(t.videos);
  if (t.captions > 0) {
    s.avg_keyframes_per_caption = static_cast<double>(t.keyframes) / static_cast<double>(t.captions);
    s.avg_words_per_caption = static_cast<double>(t.words) / static_cast<double>(t.captions);
  }
  return s;
}

DatasetStats compute_stats(const std::vector<VideoRecord>& records) {
  StatsTally t;
  for (const auto& r : records) t += tally(r);
  return stats_from_tally(t);
}

std::string stats_to_json(const DatasetStats& s) {
  detail::json j = {{"num_videos", s.num_videos},
                    {"avg_keyframes_per_caption", s.avg_keyframes_per_caption},
                    {"avg_captions_per_video", s.avg_captions_per_video},
                    {"avg_words_per_caption", s.avg_words_per_caption},
                    {"tokenizer", std::string(kStatsTokenizer)}};
  return j.dump(2) + "\n";
}

std::string stats_to_table(const DatasetStats& s) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%-28s %12zu\n%-28s %12.2f\n%-28s %12.2f\n%-28s %12.2f\n%-28s %12s\n", "videos", s.num_videos,
                "keyframes per caption", s.avg_keyframes_per_caption, "captions per video", s.avg_captions_per_video,
                "words per caption", s.avg_words_per_caption, "tokenizer", std::string(kStatsTokenizer).c_str());
  return buf;
}

}  // namespace vidsum
