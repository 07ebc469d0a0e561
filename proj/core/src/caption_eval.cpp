// SPDX-License-Identifier: Apache-2.0
#include "vidsum/caption_eval.hpp"

#include <algorithm>
#include <cmath>

#include "json_util.hpp"
#include "vidsum/error.hpp"
#include "vidsum/file_util.hpp"
#include "vidsum/meteor.hpp"

namespace vidsum {

void ExternalScores::add(const std::string& video_id, std::size_t pair_index, const std::string& metric,
                         double value) {
  auto& slot = values_[{video_id, pair_index}];
  if (!slot.emplace(metric, value).second) {
    throw ValidationError("external scores: duplicate entry for ('" + video_id + "', " + std::to_string(pair_index) +
                          ", " + metric + ")");
  }
}

std::vector<std::string> ExternalScores::metrics_for(const std::string& video_id) const {
  std::vector<std::string> out;
  for (auto it = values_.lower_bound({video_id, 0}); it != values_.end() && it->first.first == video_id; ++it) {
    for (const auto& [name, _] : it->second) {
      if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

const double* ExternalScores::find(const std::string& video_id, std::size_t pair_index,
                                   const std::string& metric) const {
  auto it = values_.find({video_id, pair_index});
  if (it == values_.end()) return nullptr;
  auto m = it->second.find(metric);
  return m == it->second.end() ? nullptr : &m->second;
}

ExternalScores parse_external_scores(std::string_view text) {
  ExternalScores out;
  detail::for_each_jsonl(text, "external scores", [&](const detail::json& obj, std::size_t line) {
    const auto where = "external scores line " + std::to_string(line);
    const double value = detail::number_field(obj, "value", where);
    if (!std::isfinite(value)) throw ValidationError(where + ": value must be finite");
    out.add(detail::get_string(obj, "video_id", where), detail::index_field(obj, "pair_index", where),
            detail::get_string(obj, "metric", where), value);
  });
  return out;
}

ExternalScores load_external_scores(const std::filesystem::path& path) {
  return parse_external_scores(read_file_text(path));
}

std::vector<ReferenceSlot> select_references(const PredictedSummary& pred, const VideoRecord& refs,
                                             const FeatureMatrix& fm) {
  const auto align = akm_align(akm_score_matrix(pred, refs, MatcherKind::kCosine, &fm));
  std::vector<ReferenceSlot> out;
  out.reserve(align.assign.size());
  for (auto j : align.assign) out.push_back(refs.references[j]);
  return out;
}

EvalReport evaluate_summary(const PredictedSummary& pred, const VideoRecord& refs, const FeatureMatrix& fm,
                            const ExternalScores* external) {
  validate_summary(pred);
  if (pred.video_id != refs.video_id || fm.video_id() != refs.video_id) {
    throw ValidationError("evaluate_summary: video ids differ ('" + pred.video_id + "', '" + refs.video_id + "', '" +
                          fm.video_id() + "')");
  }
  EvalReport r;
  r.video_id = refs.video_id;
  r.akm_ex = akm_ex(pred, refs);

  const auto cos_align = akm_align(akm_score_matrix(pred, refs, MatcherKind::kCosine, &fm));
  r.akm_cos = cos_align.score;
  r.assign = cos_align.assign;

  const double n = static_cast<double>(pred.size());
  double hits = 0.0;
  double meteor_sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const auto& slot = refs.references[r.assign[i]];
    hits += match_exact(pred.pairs[i].frame, slot);
    const auto m = meteor_exact_detail(pred.pairs[i].caption, slot.caption);
    if (m.empty_input) ++r.empty_caption_pairs;
    meteor_sum += m.score;
  }
  r.aligned_akm_ex = hits / n;
  r.meteor = meteor_sum / n;

  if (external != nullptr) {
    for (const auto& metric : external->metrics_for(r.video_id)) {
      double sum = 0.0;
      bool complete = true;
      for (std::size_t i = 0; i < pred.size() && complete; ++i) {
        const double* v = external->find(r.video_id, i, metric);
        if (v == nullptr) complete = false;
        else sum += *v;
      }
      if (complete) r.external[metric] = sum / n;
    }
  }
  return r;
}

std::map<std::string, double> metric_values(const EvalReport& r) {
  std::map<std::string, double> out{
      {"akm_ex", r.akm_ex}, {"akm_cos", r.akm_cos}, {"aligned_akm_ex", r.aligned_akm_ex}, {"meteor", r.meteor}};
  for (const auto& [k, v] : r.external) out.emplace(k, v);
  return out;
}

CorpusReport aggregate(const std::vector<EvalReport>& reports) {
  if (reports.empty()) throw ValidationError("aggregate: no reports");
  CorpusReport out;
  out.num_videos = reports.size();
  std::map<std::string, double> sums;
  for (const auto& r : reports) {
    for (const auto& [k, v] : metric_values(r)) {
      sums[k] += v;
      ++out.counts[k];
    }
  }
  for (const auto& [k, s] : sums) out.means[k] = s / static_cast<double>(out.counts[k]);
  return out;
}

}  // namespace vidsum
