// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "vidsum/types.hpp"

namespace vidsum {

// Dataset JSON:
//   {"videos":[{"video_id":str,"duration_s":num,"num_frames":int,
//               "references":[{"caption":str,"keyframes":[int,...]},...]},...]}
//
// Loading normalizes every record (see normalize_record). Slots that had to be
// re-sorted or deduplicated are reported through `warnings` when given.
std::vector<VideoRecord> parse_dataset(std::string_view text, std::vector<std::string>* warnings = nullptr);
std::vector<VideoRecord> load_dataset(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);
std::string dataset_to_json(const std::vector<VideoRecord>& records);
void save_dataset(const std::filesystem::path& path, const std::vector<VideoRecord>& records);

// Prediction JSONL: {"video_id":str,"pairs":[{"frame":int,"caption":str},...]}
std::vector<PredictedSummary> parse_predictions(std::string_view text);
std::vector<PredictedSummary> load_predictions(const std::filesystem::path& path);
std::string predictions_to_jsonl(const std::vector<PredictedSummary>& preds);

// Candidate JSONL: {"video_id":str,"segment":[start_s,end_s],"segment_score":num,
//                   "keyframe":int,"caption":str,"caption_score":num}
std::vector<Candidate> parse_candidates(std::string_view text);
std::vector<Candidate> load_candidates(const std::filesystem::path& path);
std::string candidates_to_jsonl(const std::vector<Candidate>& cands);

}  // namespace vidsum
