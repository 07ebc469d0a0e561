// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace vidsum {

/// Seconds covered by one frame of the sampling grid.
inline constexpr double kFrameSeconds = 0.5;

/// Position of a frame on the fixed 0.5 s grid.
struct FrameIndex {
  std::uint32_t value = 0;

  constexpr FrameIndex() = default;
  constexpr explicit FrameIndex(std::uint32_t v) : value(v) {}

  constexpr double seconds() const { return value * kFrameSeconds; }
  constexpr std::size_t index() const { return value; }

  friend constexpr auto operator<=>(FrameIndex, FrameIndex) = default;
};

/// Nearest grid frame for a timestamp in seconds. Negative times throw.
FrameIndex frame_from_seconds(double t);

/// One reference caption with its candidate keyframes.
struct ReferenceSlot {
  std::string caption;
  std::vector<FrameIndex> keyframes;  // sorted, unique, non-empty

  FrameIndex first_keyframe() const { return keyframes.front(); }
  bool contains(FrameIndex f) const;

  friend bool operator==(const ReferenceSlot&, const ReferenceSlot&) = default;
};

struct VideoRecord {
  std::string video_id;
  double duration_s = 0.0;
  std::uint32_t num_frames = 0;
  std::vector<ReferenceSlot> references;

  std::size_t num_references() const { return references.size(); }

  friend bool operator==(const VideoRecord&, const VideoRecord&) = default;
};

/// Diagnostics produced while normalizing a record.
struct NormalizeNotes {
  bool deduplicated = false;
  bool resorted = false;
};

/// Sorts and deduplicates keyframes, orders slots chronologically (minimum
/// keyframe, then caption text) and checks every VideoRecord invariant.
/// Throws ValidationError naming the video on violation.
NormalizeNotes normalize_record(VideoRecord& rec);

/// Checks invariants without modifying the record.
void validate_record(const VideoRecord& rec);

struct SummaryPair {
  FrameIndex frame;
  std::string caption;

  friend bool operator==(const SummaryPair&, const SummaryPair&) = default;
};

/// A system output: N (frame, caption) pairs in chronological order.
struct PredictedSummary {
  std::string video_id;
  std::vector<SummaryPair> pairs;

  std::size_t size() const { return pairs.size(); }

  friend bool operator==(const PredictedSummary&, const PredictedSummary&) = default;
};

/// Throws ValidationError unless pairs are non-empty with strictly increasing frames.
void validate_summary(const PredictedSummary& pred);

/// Scored (segment, keyframe, caption) tuple; the segment is [start, end).
struct Candidate {
  std::string video_id;
  double segment_start_s = 0.0;
  double segment_end_s = 0.0;
  double segment_score = 0.0;
  FrameIndex keyframe;
  std::string caption;
  double caption_score = 0.0;

  double length_s() const { return segment_end_s - segment_start_s; }

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

void validate_candidate(const Candidate& c);

/// Seconds shared by two half-open intervals; touching intervals give 0.
double overlap_seconds(const Candidate& a, const Candidate& b);

}  // namespace vidsum
