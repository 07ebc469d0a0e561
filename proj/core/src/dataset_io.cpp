// SPDX-License-Identifier: Apache-2.0
#include "vidsum/dataset_io.hpp"

#include <set>

#include "json_util.hpp"
#include "vidsum/file_util.hpp"

namespace vidsum {

using detail::json;

namespace {

VideoRecord record_from_json(const json& v, const std::string& where) {
  if (!v.is_object()) throw ParseError(where + ": expected an object");
  VideoRecord rec;
  rec.video_id = detail::get_string(v, "video_id", where);
  const auto here = where + " ('" + rec.video_id + "')";
  rec.duration_s = detail::number_field(v, "duration_s", here);
  rec.num_frames = detail::index_field(v, "num_frames", here);
  const auto& refs = detail::field(v, "references", here);
  if (!refs.is_array()) throw ParseError(here + ": 'references' must be an array");
  for (const auto& r : refs) {
    if (!r.is_object()) throw ParseError(here + ": reference must be an object");
    ReferenceSlot slot;
    slot.caption = detail::get_string(r, "caption", here);
    const auto& kfs = detail::field(r, "keyframes", here);
    if (!kfs.is_array()) throw ParseError(here + ": 'keyframes' must be an array");
    for (const auto& k : kfs) slot.keyframes.emplace_back(detail::get_index(k, "keyframes", here));
    rec.references.push_back(std::move(slot));
  }
  return rec;
}

json record_to_json(const VideoRecord& rec) {
  json refs = json::array();
  for (const auto& slot : rec.references) {
    json kfs = json::array();
    for (auto f : slot.keyframes) kfs.push_back(f.value);
    refs.push_back({{"caption", slot.caption}, {"keyframes", std::move(kfs)}});
  }
  return {{"video_id", rec.video_id},
          {"duration_s", rec.duration_s},
          {"num_frames", rec.num_frames},
          {"references", std::move(refs)}};
}

}  // namespace

std::vector<VideoRecord> parse_dataset(std::string_view text, std::vector<std::string>* warnings) {
  const json root = detail::parse_json(text, "dataset");
  if (!root.is_object()) throw ParseError("dataset: expected a top-level object");
  const auto& videos = detail::field(root, "videos", "dataset");
  if (!videos.is_array()) throw ParseError("dataset: 'videos' must be an array");

  std::vector<VideoRecord> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < videos.size(); ++i) {
    auto rec = record_from_json(videos[i], "dataset video " + std::to_string(i));
    if (!seen.insert(rec.video_id).second) throw ValidationError("dataset: duplicate video_id '" + rec.video_id + "'");
    const auto notes = normalize_record(rec);
    if (warnings) {
      if (notes.deduplicated) warnings->push_back("video '" + rec.video_id + "': duplicate keyframes removed");
      if (notes.resorted) warnings->push_back("video '" + rec.video_id + "': references re-sorted chronologically");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<VideoRecord> load_dataset(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  return parse_dataset(read_file_text(path), warnings);
}

std::string dataset_to_json(const std::vector<VideoRecord>& records) {
  json videos = json::array();
  for (const auto& rec : records) videos.push_back(record_to_json(rec));
  return json{{"videos", std::move(videos)}}.dump(2) + "\n";
}

void save_dataset(const std::filesystem::path& path, const std::vector<VideoRecord>& records) {
  write_file_atomic(path, dataset_to_json(records));
}

std::vector<PredictedSummary> parse_predictions(std::string_view text) {
  std::vector<PredictedSummary> out;
  std::set<std::string> seen;
  detail::for_each_jsonl(text, "predictions", [&](const json& obj, std::size_t line) {
    const auto where = "predictions line " + std::to_string(line);
    PredictedSummary pred;
    pred.video_id = detail::get_string(obj, "video_id", where);
    const auto& pairs = detail::field(obj, "pairs", where);
    if (!pairs.is_array()) throw ParseError(where + ": 'pairs' must be an array");
    for (const auto& p : pairs) {
      if (!p.is_object()) throw ParseError(where + ": pair must be an object");
      pred.pairs.push_back({FrameIndex(detail::index_field(p, "frame", where)), detail::get_string(p, "caption", where)});
    }
    validate_summary(pred);
    if (!seen.insert(pred.video_id).second) {
      throw ValidationError(where + ": duplicate prediction for '" + pred.video_id + "'");
    }
    out.push_back(std::move(pred));
  });
  return out;
}

std::vector<PredictedSummary> load_predictions(const std::filesystem::path& path) {
  return parse_predictions(read_file_text(path));
}

std::string predictions_to_jsonl(const std::vector<PredictedSummary>& preds) {
  std::string out;
  for (const auto& pred : preds) {
    json pairs = json::array();
    for (const auto& p : pred.pairs) pairs.push_back({{"frame", p.frame.value}, {"caption", p.caption}});
    out += json{{"video_id", pred.video_id}, {"pairs", std::move(pairs)}}.dump();
    out += '\n';
  }
  return out;
}

std::vector<Candidate> parse_candidates(std::string_view text) {
  std::vector<Candidate> out;
  detail::for_each_jsonl(text, "candidates", [&](const json& obj, std::size_t line) {
    const auto where = "candidates line " + std::to_string(line);
    Candidate c;
    c.video_id = detail::get_string(obj, "video_id", where);
    const auto& seg = detail::field(obj, "segment", where);
    if (!seg.is_array() || seg.size() != 2) throw ParseError(where + ": 'segment' must be [start_s, end_s]");
    c.segment_start_s = detail::get_number(seg[0], "segment", where);
    c.segment_end_s = detail::get_number(seg[1], "segment", where);
    c.segment_score = detail::number_field(obj, "segment_score", where);
    c.keyframe = FrameIndex(detail::index_field(obj, "keyframe", where));
    c.caption = detail::get_string(obj, "caption", where);
    c.caption_score = detail::number_field(obj, "caption_score", where);
    try {
      validate_candidate(c);
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
    out.push_back(std::move(c));
  });
  return out;
}

std::vector<Candidate> load_candidates(const std::filesystem::path& path) {
  return parse_candidates(read_file_text(path));
}

std::string candidates_to_jsonl(const std::vector<Candidate>& cands) {
  std::string out;
  for (const auto& c : cands) {
    out += json{{"video_id", c.video_id},
                {"segment", {c.segment_start_s, c.segment_end_s}},
                {"segment_score", c.segment_score},
                {"keyframe", c.keyframe.value},
                {"caption", c.caption},
                {"caption_score", c.caption_score}}
               .dump();
    out += '\n';
  }
  return out;
}

}  // namespace vidsum
