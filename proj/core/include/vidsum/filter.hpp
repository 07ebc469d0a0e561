// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "vidsum/features.hpp"
#include "vidsum/types.hpp"

namespace vidsum {

struct FilterConfig {
  double k_sigma = 1.0;
  std::size_t min_keep = 1;

  void validate() const;
};

/// Mean of the raw (uncentered) feature rows of the slot's keyframes.
std::vector<double> slot_centroid(const ReferenceSlot& slot, const FeatureMatrix& fm);

/// Mean over frames of ||v - centroid||^2 / dim, centroid of the same frames.
double slot_variance(std::span<const FrameIndex> frames, const FeatureMatrix& fm);

struct SlotFilterResult {
  ReferenceSlot kept;
  std::vector<FrameIndex> removed;
  std::vector<double> distances;  // per original keyframe, to the original centroid
  double threshold = 0.0;
  double variance_before = 0.0;
  double variance_after = 0.0;
};

/// Removes keyframes farther than mean + k_sigma * std (population std) of the
/// keyframe-to-centroid distances. When fewer than min_keep frames would
/// survive, the closest frames are kept instead.
SlotFilterResult filter_slot(const ReferenceSlot& slot, const FeatureMatrix& fm, const FilterConfig& cfg);

struct SlotReport {
  std::size_t slot_index = 0;  // position in the input record
  std::size_t before = 0;
  std::size_t removed = 0;
  double variance_before = 0.0;
  double variance_after = 0.0;
};

struct VideoFilterReport {
  std::string video_id;
  std::vector<SlotReport> slots;
  std::size_t removed = 0;
  double variance_before = 0.0;  // mean over slots
  double variance_after = 0.0;
};

struct FilterReport {
  std::vector<VideoFilterReport> videos;
  std::size_t num_slots = 0;
  std::size_t keyframes_before = 0;
  std::size_t keyframes_removed = 0;
  double variance_before = 0.0;  // mean over every slot of the corpus
  double variance_after = 0.0;
};

/// Filters one record. The result is re-normalized, so slots may be
/// re-ordered when a slot's earliest keyframe was removed.
VideoRecord filter_record(const VideoRecord& rec, const FeatureMatrix& fm, const FilterConfig& cfg,
                          VideoFilterReport* report = nullptr);

/// Applies filter_record to every record; `features[i]` belongs to `records[i]`.
std::vector<VideoRecord> filter_dataset(const std::vector<VideoRecord>& records,
                                        const std::vector<const FeatureMatrix*>& features, const FilterConfig& cfg,
                                        FilterReport* report = nullptr);

/// Folds per-video reports into corpus totals, in order.
FilterReport summarize_filter(std::vector<VideoFilterReport> videos);

std::string filter_report_to_json(const FilterReport& report);

}  // namespace vidsum
