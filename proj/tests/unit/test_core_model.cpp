#include <doctest.h>

#include <cstring>
#include <fstream>

#include "oracles.hpp"
#include "vidsum/dataset_io.hpp"
#include "vidsum/error.hpp"
#include "vidsum/features.hpp"
#include "vidsum/file_util.hpp"

using namespace vidsum;
using namespace vidsum::testing;

namespace {

const char* kTwoVideos = R"({"videos":[
  {"video_id":"a","duration_s":10,"num_frames":20,"references":[
    {"caption":"one","keyframes":[1,2]},{"caption":"two","keyframes":[5]},{"caption":"three","keyframes":[9,8,8]}]},
  {"video_id":"b","duration_s":5,"num_frames":10,"references":[
    {"caption":"p","keyframes":[0]},{"caption":"q","keyframes":[2]},{"caption":"r","keyframes":[4]},
    {"caption":"s","keyframes":[6]},{"caption":"t","keyframes":[8]}]}]})";

}  // namespace

TEST_SUITE("core_model") {

TEST_CASE("frame grid") {
  CHECK(frame_from_seconds(0.0).value == 0);
  CHECK(frame_from_seconds(3.0).value == 6);
  CHECK(frame_from_seconds(3.2).value == 6);
  CHECK(frame_from_seconds(3.3).value == 7);
  CHECK(FrameIndex(7).seconds() == 3.5);
  CHECK_THROWS_AS(frame_from_seconds(-1.0), ValidationError);
}

TEST_CASE("dataset with two videos") {
  std::vector<std::string> warnings;
  const auto recs = parse_dataset(kTwoVideos, &warnings);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].num_references() == 3);
  CHECK(recs[1].num_references() == 5);
  // [9,8,8] arrives unsorted with a duplicate
  CHECK(recs[0].references[2].keyframes == std::vector{FrameIndex(8), FrameIndex(9)});
  CHECK_FALSE(warnings.empty());
}

TEST_CASE("keyframe out of range names the video") {
  const char* text = R"({"videos":[{"video_id":"clip42","duration_s":2,"num_frames":4,
    "references":[{"caption":"x","keyframes":[4]}]}]})";
  try {
    parse_dataset(text);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("clip42") != std::string::npos);
  }
}

TEST_CASE("malformed dataset is a parse error") {
  CHECK_THROWS_AS(parse_dataset("{\"videos\": [ }"), ParseError);
  CHECK_THROWS_AS(parse_dataset(R"({"videos":{}})"), ParseError);
  CHECK_THROWS_AS(parse_dataset(R"({"videos":[{"video_id":"a","duration_s":1,"num_frames":2,
                                    "references":[{"caption":"x","keyframes":[-1]}]}]})"),
                  ValidationError);
}

TEST_CASE("duplicate keyframes are merged") {
  VideoRecord r{"v", 5.0, 10, {{"c", {FrameIndex(3), FrameIndex(1), FrameIndex(3)}}}};
  const auto notes = normalize_record(r);
  CHECK(notes.deduplicated);
  CHECK(r.references[0].keyframes == std::vector{FrameIndex(1), FrameIndex(3)});
}

TEST_CASE("num_frames must agree with duration") {
  VideoRecord r{"v", 5.0, 30, {{"c", {FrameIndex(1)}}}};
  CHECK_THROWS_AS(validate_record(r), ValidationError);
  r.num_frames = 11;
  CHECK_NOTHROW(validate_record(r));
}

TEST_CASE("dataset load, save, load is an identity") {
  const auto dir = make_temp_dir("vidsum_ds_");
  Rng rng(11);
  std::vector<VideoRecord> recs;
  for (int i = 0; i < 6; ++i) recs.push_back(random_record(rng, "v" + std::to_string(i), 40, 4, 5));
  save_dataset(dir / "a.json", recs);
  const auto once = load_dataset(dir / "a.json");
  save_dataset(dir / "b.json", once);
  CHECK(load_dataset(dir / "b.json") == recs);
  CHECK(read_file_text(dir / "a.json") == read_file_text(dir / "b.json"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("feature mean") {
  FeatureMatrix same("v", 4, 3, {1, 2, 3, 1, 2, 3, 1, 2, 3, 1, 2, 3});
  CHECK(same.mean()[0] == 1.0);
  CHECK(same.mean()[1] == 2.0);
  CHECK(same.mean()[2] == 3.0);
  for (std::uint32_t i = 0; i < 4; ++i) {
    for (double x : mean_center(same, FrameIndex(i))) CHECK(x == 0.0);
  }

  FeatureMatrix two("v", 2, 2, {1, 0, 0, 1});
  CHECK(two.mean()[0] == 0.5);
  CHECK(two.mean()[1] == 0.5);

  FeatureMatrix c("v", 2, 2, {2, 0, 0, 2});
  const auto v = mean_center(c, FrameIndex(0));
  CHECK(v[0] == 1.0);
  CHECK(v[1] == -1.0);
  CHECK_THROWS_AS(mean_center(c, FrameIndex(2)), ValidationError);
}

TEST_CASE("centered rows sum to zero") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto fm = random_features(rng, "v", uniform_int(rng, 1, 30), uniform_int(rng, 1, 16));
    std::vector<double> sum(fm.dim(), 0.0);
    for (std::uint32_t i = 0; i < fm.num_frames(); ++i) {
      const auto v = mean_center(fm, FrameIndex(i));
      for (std::size_t d = 0; d < v.size(); ++d) sum[d] += v[d];
    }
    for (double s : sum) CHECK(std::abs(s) <= 1e-6);
  }
}

TEST_CASE("non-finite features are rejected") {
  const float nan = std::numeric_limits<float>::quiet_NaN();
  CHECK_THROWS_AS(FeatureMatrix("v", 1, 2, {0.0f, nan}), ValidationError);
  CHECK_THROWS_AS(FeatureMatrix("v", 1, 2, {0.0f, std::numeric_limits<float>::infinity()}), ValidationError);
  CHECK_THROWS_AS(FeatureMatrix("v", 2, 2, {0.0f, 1.0f, 2.0f}), ValidationError);
}

TEST_CASE("VSFT round trip is bit-exact") {
  Rng rng(100);
  const auto fm = random_features(rng, "clip", 100, 512);
  const auto dir = make_temp_dir("vidsum_vsft_");
  save_features(dir / "clip.vsft", fm);
  const auto back = load_features(dir / "clip.vsft");
  CHECK(back.video_id() == "clip");
  REQUIRE(back.data().size() == fm.data().size());
  CHECK(std::memcmp(back.data().data(), fm.data().data(), fm.data().size() * sizeof(float)) == 0);
  save_features(dir / "again.vsft", back);
  CHECK(read_file_bytes(dir / "clip.vsft") == read_file_bytes(dir / "again.vsft"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("VSFT header layout") {
  FeatureMatrix fm("v", 1, 1, {1.0f});
  const auto bytes = encode_vsft(fm);
  REQUIRE(bytes.size() == 20);
  CHECK(std::memcmp(bytes.data(), "VSFT", 4) == 0);
  CHECK(bytes[4] == 1);
  CHECK(bytes[8] == 1);
  CHECK(bytes[12] == 1);
  CHECK(bytes[19] == 0x3f);  // 1.0f little-endian: 00 00 80 3f
}

TEST_CASE("VSFT decode errors") {
  FeatureMatrix fm("v", 2, 3, {1, 2, 3, 4, 5, 6});
  auto bytes = encode_vsft(fm);

  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(decode_vsft(bad_magic, "v"), ParseError);

  auto bad_version = bytes;
  bad_version[4] = 2;
  CHECK_THROWS_AS(decode_vsft(bad_version, "v"), ParseError);

  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_AS(decode_vsft(truncated, "v"), ParseError);
  CHECK_THROWS_AS(decode_vsft(std::span(bytes).first(6), "v"), ParseError);

  auto with_nan = bytes;
  const float nan = std::numeric_limits<float>::quiet_NaN();
  std::memcpy(with_nan.data() + 16, &nan, 4);
  CHECK_THROWS_AS(decode_vsft(with_nan, "v"), ValidationError);
}

TEST_CASE("feature store") {
  const auto dir = make_temp_dir("vidsum_store_");
  save_features(dir / "x.vsft", FeatureMatrix("x", 2, 1, {1, 2}));
  save_features(dir / "elsewhere.vsft", FeatureMatrix("y", 3, 1, {1, 2, 3}));

  FeatureStore plain(dir);
  CHECK(plain.has("x"));
  CHECK_FALSE(plain.has("y"));
  CHECK(plain.get("x")->num_frames() == 2);
  CHECK(plain.get("x") == plain.get("x"));
  CHECK_THROWS_AS(plain.get("y"), IoError);
  CHECK(plain.loaded_paths().size() == 1);

  write_file_atomic(dir / "features.json", std::string(R"({"y":"elsewhere.vsft"})"));
  FeatureStore mapped(dir);
  CHECK(mapped.get("y")->num_frames() == 3);
  CHECK(mapped.get("y")->video_id() == "y");
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(FeatureStore{dir}, IoError);
}

TEST_CASE("predictions") {
  const auto preds = parse_predictions(
      "{\"video_id\":\"a\",\"pairs\":[{\"frame\":1,\"caption\":\"x\"},{\"frame\":4,\"caption\":\"y\"}]}\n\n");
  REQUIRE(preds.size() == 1);
  CHECK(preds[0].pairs[1].frame.value == 4);
  CHECK(parse_predictions(predictions_to_jsonl(preds)) == preds);

  CHECK_THROWS_AS(parse_predictions(R"({"video_id":"a","pairs":[{"frame":4,"caption":"x"},{"frame":4,"caption":"y"}]})"),
                  ValidationError);
  CHECK_THROWS_AS(parse_predictions(R"({"video_id":"a","pairs":[]})"), ValidationError);
  CHECK_THROWS_AS(parse_predictions("{\"video_id\":\"a\",\"pairs\":[{\"frame\":1,\"caption\":\"x\"}]}\n"
                                    "{\"video_id\":\"a\",\"pairs\":[{\"frame\":1,\"caption\":\"x\"}]}"),
                  ValidationError);
}

TEST_CASE("candidates") {
  const auto c = parse_candidates(
      R"({"video_id":"a","segment":[1.0,3.0],"segment_score":0.5,"keyframe":3,"caption":"x","caption_score":0.25})");
  REQUIRE(c.size() == 1);
  CHECK(c[0].length_s() == 2.0);
  CHECK(c[0].keyframe.value == 3);
  CHECK(parse_candidates(candidates_to_jsonl(c)) == c);
  CHECK_THROWS_AS(parse_candidates(R"({"video_id":"a","segment":[3.0,1.0],"segment_score":0,"keyframe":3,"caption":"x","caption_score":0})"),
                  ValidationError);
  CHECK_THROWS_AS(parse_candidates(R"({"video_id":"a","segment":[1.0,3.0],"segment_score":0,"keyframe":9,"caption":"x","caption_score":0})"),
                  ValidationError);
  CHECK_THROWS_AS(parse_candidates(R"({"video_id":"a","segment":1,"segment_score":0,"keyframe":3,"caption":"x","caption_score":0})"),
                  ParseError);
}

TEST_CASE("overlap of half-open segments") {
  Candidate a{"v", 0.0, 2.0, 0, FrameIndex(0), "", 0};
  Candidate b{"v", 2.0, 3.0, 0, FrameIndex(4), "", 0};
  Candidate c{"v", 1.5, 4.0, 0, FrameIndex(3), "", 0};
  CHECK(overlap_seconds(a, b) == 0.0);
  CHECK(overlap_seconds(a, c) == 0.5);
  CHECK(overlap_seconds(c, b) == 1.0);
}

}  // TEST_SUITE
