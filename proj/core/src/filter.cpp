// SPDX-License-Identifier: Apache-2.0
#include "vidsum/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json_util.hpp"
#include "vidsum/error.hpp"

namespace vidsum {

void FilterConfig::validate() const {
  if (std::isnan(k_sigma) || k_sigma < 0.0) throw ValidationError("filter: k_sigma must be non-negative");
  if (min_keep < 1) throw ValidationError("filter: min_keep must be at least 1");
}

namespace {

std::vector<double> centroid_of(std::span<const FrameIndex> frames, const FeatureMatrix& fm) {
  std::vector<double> c(fm.dim(), 0.0);
  for (auto f : frames) {
    const auto r = fm.row(f);
    for (std::size_t d = 0; d < c.size(); ++d) c[d] += r[d];
  }
  for (auto& x : c) x /= static_cast<double>(frames.size());
  return c;
}

double squared_distance(std::span<const float> v, const std::vector<double>& c) {
  double s = 0.0;
  for (std::size_t d = 0; d < c.size(); ++d) {
    const double diff = static_cast<double>(v[d]) - c[d];
    s += diff * diff;
  }
  return s;
}

}  // namespace

std::vector<double> slot_centroid(const ReferenceSlot& slot, const FeatureMatrix& fm) {
  if (slot.keyframes.empty()) throw ValidationError("slot_centroid: empty slot");
  return centroid_of(slot.keyframes, fm);
}

double slot_variance(std::span<const FrameIndex> frames, const FeatureMatrix& fm) {
  if (frames.empty()) return 0.0;
  const auto c = centroid_of(frames, fm);
  double s = 0.0;
  for (auto f : frames) s += squared_distance(fm.row(f), c);
  return s / static_cast<double>(frames.size()) / static_cast<double>(fm.dim());
}

SlotFilterResult filter_slot(const ReferenceSlot& slot, const FeatureMatrix& fm, const FilterConfig& cfg) {
  cfg.validate();
  if (slot.keyframes.empty()) throw ValidationError("filter_slot: empty slot");
  SlotFilterResult out;
  const auto c = centroid_of(slot.keyframes, fm);
  const std::size_t k = slot.keyframes.size();
  out.distances.reserve(k);
  for (auto f : slot.keyframes) out.distances.push_back(std::sqrt(squared_distance(fm.row(f), c)));

  const double mean = std::accumulate(out.distances.begin(), out.distances.end(), 0.0) / static_cast<double>(k);
  double var = 0.0;
  for (double d : out.distances) var += (d - mean) * (d - mean);
  const double stddev = std::sqrt(var / static_cast<double>(k));
  out.threshold = std::isinf(cfg.k_sigma) ? cfg.k_sigma : mean + cfg.k_sigma * stddev;

  std::vector<bool> keep(k);
  std::size_t kept = 0;
  for (std::size_t i = 0; i < k; ++i) {
    keep[i] = !(out.distances[i] > out.threshold);
    kept += keep[i];
  }
  const std::size_t floor = std::min(cfg.min_keep, k);
  if (kept < floor) {
    // Closest first; equal distances keep the earlier frame.
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return out.distances[a] < out.distances[b]; });
    for (std::size_t t = 0; t < floor; ++t) keep[order[t]] = true;
  }

  out.kept.caption = slot.caption;
  for (std::size_t i = 0; i < k; ++i) {
    (keep[i] ? out.kept.keyframes : out.removed).push_back(slot.keyframes[i]);
  }
  out.variance_before = slot_variance(slot.keyframes, fm);
  out.variance_after = slot_variance(out.kept.keyframes, fm);
  return out;
}

VideoRecord filter_record(const VideoRecord& rec, const FeatureMatrix& fm, const FilterConfig& cfg,
                          VideoFilterReport* report) {
  if (fm.num_frames() < rec.num_frames) {
    throw ValidationError("filter: features of '" + rec.video_id + "' cover " + std::to_string(fm.num_frames()) +
                          " frames, record has " + std::to_string(rec.num_frames));
  }
  VideoRecord out = rec;
  VideoFilterReport vr;
  vr.video_id = rec.video_id;
  for (std::size_t j = 0; j < rec.references.size(); ++j) {
    auto res = filter_slot(rec.references[j], fm, cfg);
    vr.slots.push_back({j, rec.references[j].keyframes.size(), res.removed.size(), res.variance_before,
                        res.variance_after});
    vr.removed += res.removed.size();
    vr.variance_before += res.variance_before;
    vr.variance_after += res.variance_after;
    out.references[j] = std::move(res.kept);
  }
  vr.variance_before /= static_cast<double>(vr.slots.size());
  vr.variance_after /= static_cast<double>(vr.slots.size());
  normalize_record(out);
  if (report) *report = std::move(vr);
  return out;
}

FilterReport summarize_filter(std::vector<VideoFilterReport> videos) {
  FilterReport r;
  double vb = 0.0, va = 0.0;
  for (const auto& v : videos) {
    for (const auto& s : v.slots) {
      ++r.num_slots;
      r.keyframes_before += s.before;
      r.keyframes_removed += s.removed;
      vb += s.variance_before;
      va += s.variance_after;
    }
  }
  if (r.num_slots > 0) {
    r.variance_before = vb / static_cast<double>(r.num_slots);
    r.variance_after = va / static_cast<double>(r.num_slots);
  }
  r.videos = std::move(videos);
  return r;
}

std::vector<VideoRecord> filter_dataset(const std::vector<VideoRecord>& records,
                                        const std::vector<const FeatureMatrix*>& features, const FilterConfig& cfg,
                                        FilterReport* report) {
  if (features.size() != records.size()) throw ValidationError("filter_dataset: one feature matrix per record");
  std::vector<VideoRecord> out;
  std::vector<VideoFilterReport> reports(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (features[i] == nullptr) throw ValidationError("filter_dataset: missing features for '" + records[i].video_id + "'");
    out.push_back(filter_record(records[i], *features[i], cfg, &reports[i]));
  }
  if (report) *report = summarize_filter(std::move(reports));
  return out;
}

std::string filter_report_to_json(const FilterReport& report) {
  using detail::json;
  json videos = json::array();
  for (const auto& v : report.videos) {
    json slots = json::array();
    for (const auto& s : v.slots) {
      slots.push_back({{"slot", s.slot_index},
                       {"keyframes_before", s.before},
                       {"removed", s.removed},
                       {"variance_before", s.variance_before},
                       {"variance_after", s.variance_after}});
    }
    videos.push_back({{"video_id", v.video_id},
                      {"removed", v.removed},
                      {"variance_before", v.variance_before},
                      {"variance_after", v.variance_after},
                      {"slots", std::move(slots)}});
  }
  json corpus = {{"num_videos", report.videos.size()},
                 {"num_slots", report.num_slots},
                 {"keyframes_before", report.keyframes_before},
                 {"keyframes_removed", report.keyframes_removed},
                 {"variance_before", report.variance_before},
                 {"variance_after", report.variance_after}};
  return json{{"corpus", std::move(corpus)}, {"videos", std::move(videos)}}.dump(2) + "\n";
}

}  // namespace vidsum
