// SPDX-License-Identifier: Apache-2.0
#include "vidsum/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vidsum/error.hpp"

namespace vidsum {

FrameIndex frame_from_seconds(double t) {
  if (!std::isfinite(t) || t < 0.0) {
    throw ValidationError("timestamp must be finite and non-negative: " + std::to_string(t));
  }
  const double f = std::round(t / kFrameSeconds);
  if (f > std::numeric_limits<std::uint32_t>::max()) {
    throw ValidationError("timestamp out of range: " + std::to_string(t));
  }
  return FrameIndex(static_cast<std::uint32_t>(f));
}

bool ReferenceSlot::contains(FrameIndex f) const {
  return std::binary_search(keyframes.begin(), keyframes.end(), f);
}

namespace {

[[noreturn]] void fail(const VideoRecord& rec, const std::string& what) {
  throw ValidationError("video '" + rec.video_id + "': " + what);
}

bool slot_before(const ReferenceSlot& a, const ReferenceSlot& b) {
  if (a.first_keyframe() != b.first_keyframe()) return a.first_keyframe() < b.first_keyframe();
  return a.caption < b.caption;
}

}  // namespace

void validate_record(const VideoRecord& rec) {
  if (rec.video_id.empty()) throw ValidationError("video with empty video_id");
  if (!std::isfinite(rec.duration_s) || rec.duration_s <= 0.0) fail(rec, "duration_s must be positive");
  if (rec.num_frames == 0) fail(rec, "num_frames must be positive");
  // The grid may round up or down by one frame relative to the duration.
  const double grid = std::floor(rec.duration_s / kFrameSeconds);
  if (std::abs(static_cast<double>(rec.num_frames) - grid) > 1.0) {
    fail(rec, "num_frames " + std::to_string(rec.num_frames) + " inconsistent with duration " +
                  std::to_string(rec.duration_s) + " s");
  }
  if (rec.references.empty()) fail(rec, "at least one reference slot is required");
  for (std::size_t j = 0; j < rec.references.size(); ++j) {
    const auto& slot = rec.references[j];
    if (slot.keyframes.empty()) fail(rec, "reference " + std::to_string(j) + " has no keyframes");
    for (std::size_t k = 0; k < slot.keyframes.size(); ++k) {
      if (slot.keyframes[k].value >= rec.num_frames) {
        fail(rec, "reference " + std::to_string(j) + " keyframe " + std::to_string(slot.keyframes[k].value) +
                      " >= num_frames " + std::to_string(rec.num_frames));
      }
      if (k > 0 && !(slot.keyframes[k - 1] < slot.keyframes[k])) {
        fail(rec, "reference " + std::to_string(j) + " keyframes not sorted and unique");
      }
    }
    if (j > 0 && slot_before(slot, rec.references[j - 1])) {
      fail(rec, "references not in chronological order");
    }
  }
}

NormalizeNotes normalize_record(VideoRecord& rec) {
  NormalizeNotes notes;
  for (auto& slot : rec.references) {
    std::sort(slot.keyframes.begin(), slot.keyframes.end());
    const auto last = std::unique(slot.keyframes.begin(), slot.keyframes.end());
    if (last != slot.keyframes.end()) {
      notes.deduplicated = true;
      slot.keyframes.erase(last, slot.keyframes.end());
    }
  }
  const bool any_empty = std::any_of(rec.references.begin(), rec.references.end(),
                                     [](const ReferenceSlot& s) { return s.keyframes.empty(); });
  if (!any_empty && !std::is_sorted(rec.references.begin(), rec.references.end(), slot_before)) {
    std::stable_sort(rec.references.begin(), rec.references.end(), slot_before);
    notes.resorted = true;
  }
  validate_record(rec);
  return notes;
}

void validate_summary(const PredictedSummary& pred) {
  if (pred.pairs.empty()) throw ValidationError("prediction for '" + pred.video_id + "' is empty");
  for (std::size_t i = 1; i < pred.pairs.size(); ++i) {
    if (!(pred.pairs[i - 1].frame < pred.pairs[i].frame)) {
      throw ValidationError("prediction for '" + pred.video_id + "': frames not strictly increasing at pair " +
                            std::to_string(i));
    }
  }
}

void validate_candidate(const Candidate& c) {
  const auto where = [&] { return "candidate for '" + c.video_id + "' (frame " + std::to_string(c.keyframe.value) + ")"; };
  if (!std::isfinite(c.segment_start_s) || !std::isfinite(c.segment_end_s) || !std::isfinite(c.segment_score) ||
      !std::isfinite(c.caption_score)) {
    throw ValidationError(where() + ": non-finite field");
  }
  if (!(c.segment_start_s < c.segment_end_s)) throw ValidationError(where() + ": segment start must precede end");
  const double t = c.keyframe.seconds();
  if (t < c.segment_start_s || t >= c.segment_end_s) {
    throw ValidationError(where() + ": keyframe outside its segment");
  }
}

double overlap_seconds(const Candidate& a, const Candidate& b) {
  const double lo = std::max(a.segment_start_s, b.segment_start_s);
  const double hi = std::min(a.segment_end_s, b.segment_end_s);
  return hi > lo ? hi - lo : 0.0;
}

}  // namespace vidsum
