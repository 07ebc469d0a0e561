#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "vidsum/beam.hpp"
#include "vidsum/error.hpp"

using namespace vidsum;
using namespace vidsum::testing;

namespace {

BeamInput two_frames() {
  return {"v", {{FrameIndex(1), {"a", "b"}}, {FrameIndex(3), {"c"}}}};
}

BeamConfig config(std::size_t n, std::size_t width = 8, double alpha = 0.5) {
  BeamConfig cfg;
  cfg.n = n;
  cfg.width = width;
  cfg.alpha = alpha;
  return cfg;
}

}  // namespace

TEST_SUITE("beam") {

TEST_CASE("min-max normalization") {
  const std::vector<double> v{2, 4, 6};
  CHECK(minmax_normalize(v) == std::vector<double>{0, 0.5, 1});
  const std::vector<double> flat{3, 3, 3};
  CHECK(minmax_normalize(flat) == std::vector<double>{0.5, 0.5, 0.5});
  CHECK(minmax_normalize(std::vector<double>{-7}) == std::vector<double>{0.5});
  CHECK_THROWS_AS(minmax_normalize(std::vector<double>{}), ValidationError);
  CHECK_THROWS_AS(minmax_normalize(std::vector<double>{1, NAN}), ValidationError);
  CHECK_THROWS_AS(minmax_normalize(std::vector<double>{1, INFINITY}), ValidationError);
}

TEST_CASE("table scorer") {
  TableScorer t;
  t.add(FrameIndex(3), 0, {-1.0, -2.0});
  const std::vector<BeamPair> prefix{{FrameIndex(1), 0, "x"}};
  const auto a = t.score_components({}, FrameIndex(3), 0, "");
  const auto b = t.score_components(prefix, FrameIndex(3), 0, "");
  CHECK(a.frame_ll == -1.0);
  CHECK(b.caption_ll == -2.0);
  try {
    t.score_components({}, FrameIndex(4), 1, "");
    FAIL("expected a missing-row error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("frame 4") != std::string::npos);
  }
}

TEST_CASE("score table rows scoped by video") {
  const auto table = parse_score_table(
      "{\"frame\":1,\"caption_id\":0,\"frame_ll\":-1,\"caption_ll\":-1}\n"
      "{\"video_id\":\"b\",\"frame\":1,\"caption_id\":0,\"frame_ll\":-5,\"caption_ll\":-5}\n");
  CHECK(table.for_video("a").score_components({}, FrameIndex(1), 0, "").frame_ll == -1);
  CHECK(table.for_video("b").score_components({}, FrameIndex(1), 0, "").frame_ll == -5);
  CHECK_THROWS_AS(parse_score_table("{\"frame\":1,\"caption_id\":0,\"frame_ll\":\"x\",\"caption_ll\":-1}"), ValidationError);
}

TEST_CASE("hash scorer is deterministic and prefix sensitive") {
  HashScorer h(1), h2(1), other(2);
  const std::vector<BeamPair> p1{{FrameIndex(1), 0, "x"}}, p2{{FrameIndex(2), 0, "x"}};
  const auto a = h.score_components(p1, FrameIndex(5), 1, "y");
  const auto b = h2.score_components(p1, FrameIndex(5), 1, "y");
  CHECK(a.frame_ll == b.frame_ll);
  CHECK(a.caption_ll == b.caption_ll);
  CHECK(a.frame_ll <= 0.0);
  CHECK(a.frame_ll >= -10.0);
  CHECK(h.score_components(p2, FrameIndex(5), 1, "y").frame_ll != a.frame_ll);
  CHECK(other.score_components(p1, FrameIndex(5), 1, "y").frame_ll != a.frame_ll);
  // caption text does not enter the hash
  const auto pinned = HashScorer(1).score_components({}, FrameIndex(0), 0, "");
  CHECK(pinned.frame_ll == HashScorer(1).score_components({}, FrameIndex(0), 0, "other").frame_ll);
}

TEST_CASE("single pair picks the best weighted expansion") {
  TableScorer t;
  t.add(FrameIndex(1), 0, {-1.0, -4.0});
  t.add(FrameIndex(1), 1, {-1.0, -1.0});
  t.add(FrameIndex(3), 0, {0.0, -3.0});
  const auto r = beam_select(two_frames(), t, config(1));
  // normalized frame: {0, 0, 1}; caption: {0, 1, 1/3}
  REQUIRE(r.pairs.size() == 1);
  CHECK(r.pairs[0].frame.value == 3);
  CHECK(r.score == doctest::Approx(0.5 + 0.5 / 3.0));
}

TEST_CASE("two rounds") {
  TableScorer t;
  t.add(FrameIndex(1), 0, {-1.0, -4.0});
  t.add(FrameIndex(1), 1, {-1.0, -1.0});
  t.add(FrameIndex(3), 0, {0.0, -3.0});
  const auto r = beam_select(two_frames(), t, config(2));
  REQUIRE(r.summary.pairs.size() == 2);
  CHECK(r.summary.pairs[0].caption == "b");
  CHECK(r.summary.pairs[1].caption == "c");
  CHECK(r.summary.video_id == "v");
}

TEST_CASE("infeasible round is reported") {
  HashScorer h(3);
  try {
    beam_select(two_frames(), h, config(3));
    FAIL("expected infeasible");
  } catch (const InfeasibleError& e) {
    CHECK(std::string(e.what()).find("round 3") != std::string::npos);
  }
  CHECK_THROWS_AS(exhaustive_select(two_frames(), h, config(3)), InfeasibleError);
}

TEST_CASE("config and input validation") {
  HashScorer h(0);
  CHECK_THROWS_AS(beam_select(two_frames(), h, config(0)), ValidationError);
  CHECK_THROWS_AS(beam_select(two_frames(), h, config(1, 0)), ValidationError);
  CHECK_THROWS_AS(beam_select(two_frames(), h, config(1, 8, 1.5)), ValidationError);
  BeamInput bad{"v", {{FrameIndex(3), {"a"}}, {FrameIndex(1), {"b"}}}};
  CHECK_THROWS_AS(beam_select(bad, h, config(1)), ValidationError);
  BeamInput empty_caps{"v", {{FrameIndex(3), {}}}};
  CHECK_THROWS_AS(beam_select(empty_caps, h, config(1)), ValidationError);
}

TEST_CASE("path counts") {
  BeamInput in{"v", {{FrameIndex(1), {"a", "b"}}, {FrameIndex(2), {"c"}}, {FrameIndex(4), {"d", "e", "f"}}}};
  CHECK(count_paths(in, 3) == std::vector<std::size_t>{6, 11, 6});
}

TEST_CASE("exhaustive limit") {
  BeamInput in{"v", {}};
  for (std::uint32_t f = 0; f < 30; ++f) in.frames.push_back({FrameIndex(f), {"a", "b", "c"}});
  HashScorer h(0);
  CHECK_THROWS_AS(exhaustive_select(in, h, config(4), 1000), CombinatorialLimitError);
}

TEST_CASE("wide beams equal the exhaustive search and the oracle") {
  Rng rng(31);
  for (auto pool : {NormPool::kStepGlobal, NormPool::kPerBeam}) {
    for (int t = 0; t < 150; ++t) {
      const auto in = random_beam_input(rng, 6, 2);
      const auto n = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<int>(in.frames.size())));
      HashScorer h(static_cast<std::uint64_t>(t));
      auto cfg = config(n, 1, uniform(rng));
      cfg.norm_pool = pool;
      std::size_t most = 1;
      for (auto c : count_paths(in, n)) most = std::max(most, c);
      cfg.width = most;
      const auto b = beam_select(in, h, cfg);
      const auto e = exhaustive_select(in, h, cfg);
      const auto o = beam_oracle(in, h, cfg);
      CHECK(b.score == e.score);
      CHECK(b.pairs == e.pairs);
      CHECK(b.pairs == o.pairs);
      CHECK(std::abs(b.score * static_cast<double>(n) - o.total) <= 1e-12);
    }
  }
}

TEST_CASE("emitted summaries are chronological with scores in [0, 1]") {
  Rng rng(32);
  for (int t = 0; t < 200; ++t) {
    const auto in = random_beam_input(rng, 10, 3);
    const auto n = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<int>(in.frames.size())));
    HashScorer h(static_cast<std::uint64_t>(t) * 7);
    auto cfg = config(n, static_cast<std::size_t>(uniform_int(rng, 1, 8)), uniform(rng));
    cfg.norm_pool = t % 2 ? NormPool::kPerBeam : NormPool::kStepGlobal;
    BeamResult r;
    try {
      r = beam_select(in, h, cfg);
    } catch (const InfeasibleError&) {
      // a narrow beam can keep only late frames and run out of room
      CHECK(n > 1);
      continue;
    }
    REQUIRE(r.summary.pairs.size() == n);
    for (std::size_t i = 1; i < n; ++i) CHECK(r.summary.pairs[i - 1].frame < r.summary.pairs[i].frame);
    CHECK(r.score >= 0.0);
    CHECK(r.score <= 1.0);
    CHECK(r.survivors.size() <= cfg.width);
  }
}

TEST_CASE("alpha = 1 ignores captions, alpha = 0 ignores frames") {
  // table likelihoods: frames differ, captions of the same frame differ
  BeamInput in{"v", {{FrameIndex(1), {"a", "b"}}, {FrameIndex(2), {"c", "d"}}}};
  TableScorer t;
  t.add(FrameIndex(1), 0, {-1.0, -9.0});
  t.add(FrameIndex(1), 1, {-1.0, -0.5});
  t.add(FrameIndex(2), 0, {-3.0, -0.1});
  t.add(FrameIndex(2), 1, {-3.0, -7.0});
  auto r = beam_select(in, t, config(1, 8, 1.0));
  CHECK(r.pairs[0].frame.value == 1);
  CHECK(r.pairs[0].caption_id == 0);  // tie on frame score; smaller caption wins
  r = beam_select(in, t, config(1, 8, 0.0));
  CHECK(r.pairs[0].frame.value == 2);
  CHECK(r.pairs[0].caption_id == 0);
}

TEST_CASE("beam inputs from candidate rows") {
  const auto inputs = parse_beam_inputs(
      "{\"video_id\":\"b\",\"keyframe\":4,\"caption\":\"x\",\"caption_score\":0}\n"
      "{\"video_id\":\"a\",\"keyframe\":2,\"caption\":\"y\",\"caption_score\":0}\n"
      "{\"video_id\":\"b\",\"keyframe\":1,\"caption\":\"z\",\"caption_score\":0}\n"
      "{\"video_id\":\"b\",\"keyframe\":4,\"caption\":\"w\",\"caption_score\":0}\n");
  REQUIRE(inputs.size() == 2);
  CHECK(inputs[0].video_id == "b");
  REQUIRE(inputs[0].frames.size() == 2);
  CHECK(inputs[0].frames[0].frame.value == 1);
  CHECK(inputs[0].frames[1].captions == std::vector<std::string>{"x", "w"});
}

TEST_CASE("norm pool names") {
  CHECK(parse_norm_pool("per_beam") == NormPool::kPerBeam);
  CHECK(to_string(NormPool::kStepGlobal) == "step_global");
  CHECK_THROWS_AS(parse_norm_pool("global"), ValidationError);
}

}  // TEST_SUITE
