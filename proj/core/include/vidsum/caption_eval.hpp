// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vidsum/akm.hpp"
#include "vidsum/features.hpp"
#include "vidsum/types.hpp"

namespace vidsum {

/// Externally computed per-pair caption scores (e.g. BLEURT), keyed by
/// (video_id, pair_index) and then metric name.
class ExternalScores {
 public:
  void add(const std::string& video_id, std::size_t pair_index, const std::string& metric, double value);

  /// Metric names present for a video.
  std::vector<std::string> metrics_for(const std::string& video_id) const;
  const double* find(const std::string& video_id, std::size_t pair_index, const std::string& metric) const;
  bool empty() const { return values_.empty(); }

 private:
  std::map<std::pair<std::string, std::size_t>, std::map<std::string, double>> values_;
};

// External-scores JSONL: {"video_id":str,"pair_index":int,"metric":str,"value":num}
ExternalScores parse_external_scores(std::string_view text);
ExternalScores load_external_scores(const std::filesystem::path& path);

struct EvalReport {
  std::string video_id;
  double akm_ex = 0.0;          // standalone maximization over all assignments
  double akm_cos = 0.0;
  double aligned_akm_ex = 0.0;  // exact matches along the cosine alignment
  double meteor = 0.0;
  std::map<std::string, double> external;
  std::vector<std::size_t> assign;
  std::size_t empty_caption_pairs = 0;  // pairs METEOR scored 0 for lack of tokens
};

/// Reference slots chosen by the cosine alignment, one per prediction.
std::vector<ReferenceSlot> select_references(const PredictedSummary& pred, const VideoRecord& refs,
                                             const FeatureMatrix& fm);

/// Scores one video. An external metric is reported only when every pair of
/// the prediction has a value for it; it is then the mean over pairs.
EvalReport evaluate_summary(const PredictedSummary& pred, const VideoRecord& refs, const FeatureMatrix& fm,
                            const ExternalScores* external = nullptr);

struct CorpusReport {
  std::size_t num_videos = 0;
  std::map<std::string, double> means;
  std::map<std::string, std::size_t> counts;
};

/// Unweighted mean of each metric over the videos that report it.
CorpusReport aggregate(const std::vector<EvalReport>& reports);

/// Flattened metric view of a report, as aggregated: akm_ex, akm_cos,
/// aligned_akm_ex, meteor, then the external entries.
std::map<std::string, double> metric_values(const EvalReport& r);

}  // namespace vidsum
