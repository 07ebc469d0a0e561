#include <benchmark/benchmark.h>

#include <random>

#include "vidsum/akm.hpp"
#include "vidsum/beam.hpp"
#include "vidsum/meteor.hpp"
#include "vidsum/selector.hpp"

using namespace vidsum;

namespace {

std::mt19937_64 rng(2024);

double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

std::string sentence(std::size_t words) {
  static const char* vocab[] = {"a", "man", "woman", "runs", "jumps", "the", "ball", "on", "field", "dog", "red", "car"};
  std::string s;
  for (std::size_t i = 0; i < words; ++i) {
    if (i) s += ' ';
    s += vocab[rng() % std::size(vocab)];
  }
  return s;
}

void BM_AkmAlign(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0)), m = static_cast<std::size_t>(state.range(1));
  std::vector<std::vector<double>> v(n, std::vector<double>(m));
  for (auto& row : v)
    for (auto& x : row) x = unit();
  const ScoreMatrix s(v);
  for (auto _ : state) benchmark::DoNotOptimize(akm_align(s));
  state.SetComplexityN(static_cast<benchmark::IterationCount>(n * m));
}
BENCHMARK(BM_AkmAlign)->Args({4, 8})->Args({8, 32})->Args({16, 128})->Args({32, 512});

void BM_Meteor(benchmark::State& state) {
  const auto cand = sentence(static_cast<std::size_t>(state.range(0)));
  const auto ref = sentence(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(meteor_exact(cand, ref));
}
BENCHMARK(BM_Meteor)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

std::vector<Candidate> candidates(std::size_t count, double duration) {
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < count; ++i) {
    Candidate c;
    c.video_id = "v";
    c.segment_start_s = 0.5 * static_cast<double>(rng() % static_cast<std::uint64_t>(duration * 2 - 4));
    c.segment_end_s = c.segment_start_s + 0.5 * static_cast<double>(1 + rng() % 8);
    c.keyframe = frame_from_seconds(c.segment_start_s);
    c.segment_score = unit();
    c.caption_score = unit();
    out.push_back(c);
  }
  return out;
}

void BM_SelectHard(benchmark::State& state) {
  SelectorConfig cfg;
  cfg.n = 4;
  const double duration = 600.0;
  const auto c = prefilter(candidates(static_cast<std::size_t>(state.range(0)), duration), duration, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(select_n_dp(c, cfg));
}
BENCHMARK(BM_SelectHard)->Arg(64)->Arg(256)->Arg(1024);

void BM_SelectSoft(benchmark::State& state) {
  SelectorConfig cfg;
  cfg.n = 4;
  cfg.mode = SelectorMode::kSoft;
  const double duration = 600.0;
  const auto c = prefilter(candidates(static_cast<std::size_t>(state.range(0)), duration), duration, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(select_n_dp(c, cfg));
}
BENCHMARK(BM_SelectSoft)->Arg(64)->Arg(256)->Arg(1024);

void BM_BeamSelect(benchmark::State& state) {
  BeamInput in{"v", {}};
  for (std::uint32_t f = 0; f < static_cast<std::uint32_t>(state.range(0)); ++f)
    in.frames.push_back({FrameIndex(2 * f), {sentence(6), sentence(6), sentence(6)}});
  const HashScorer h(7);
  BeamConfig cfg;
  cfg.n = 4;
  cfg.width = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(beam_select(in, h, cfg));
}
BENCHMARK(BM_BeamSelect)->Args({32, 8})->Args({128, 8})->Args({128, 32});

}  // namespace

BENCHMARK_MAIN();
