// SPDX-License-Identifier: Apache-2.0
#include "vidsum/beam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "json_util.hpp"
#include "vidsum/error.hpp"
#include "vidsum/file_util.hpp"
#include "vidsum/rng.hpp"

namespace vidsum {

// ---------------------------------------------------------------- scorers

void TableScorer::add(FrameIndex frame, std::uint32_t caption_id, ScoreComponents c) {
  if (!std::isfinite(c.frame_ll) || !std::isfinite(c.caption_ll)) {
    throw ValidationError("score table: non-finite likelihood for (frame " + std::to_string(frame.value) +
                          ", caption_id " + std::to_string(caption_id) + ")");
  }
  if (!table_.emplace(std::pair{frame.value, caption_id}, c).second) {
    throw ValidationError("score table: duplicate row for (frame " + std::to_string(frame.value) + ", caption_id " +
                          std::to_string(caption_id) + ")");
  }
}

ScoreComponents TableScorer::score_components(std::span<const BeamPair>, FrameIndex frame, std::uint32_t caption_id,
                                              const std::string&) const {
  auto it = table_.find({frame.value, caption_id});
  if (it == table_.end()) {
    throw ValidationError("score table: no row for (frame " + std::to_string(frame.value) + ", caption_id " +
                          std::to_string(caption_id) + ")");
  }
  return it->second;
}

const TableScorer& ScoreTable::for_video(const std::string& video_id) const {
  auto it = per_video_.find(video_id);
  return it == per_video_.end() ? shared_ : it->second;
}

void ScoreTable::add(const std::string& video_id, FrameIndex frame, std::uint32_t caption_id, ScoreComponents c) {
  if (video_id.empty()) shared_.add(frame, caption_id, c);
  else per_video_[video_id].add(frame, caption_id, c);
}

ScoreTable parse_score_table(std::string_view text) {
  ScoreTable out;
  struct Row {
    std::string video;
    FrameIndex frame;
    std::uint32_t caption_id;
    ScoreComponents c;
  };
  std::vector<Row> shared;
  detail::for_each_jsonl(text, "score table", [&](const detail::json& obj, std::size_t line) {
    const auto where = "score table line " + std::to_string(line);
    Row r;
    if (obj.contains("video_id")) r.video = detail::get_string(obj, "video_id", where);
    r.frame = FrameIndex(detail::index_field(obj, "frame", where));
    r.caption_id = detail::index_field(obj, "caption_id", where);
    r.c = {detail::number_field(obj, "frame_ll", where), detail::number_field(obj, "caption_ll", where)};
    out.add(r.video, r.frame, r.caption_id, r.c);
    if (r.video.empty()) shared.push_back(r);
  });
  // Shared rows fill the gaps of every per-video table.
  for (auto& [_, table] : out.per_video_) {
    for (const auto& r : shared) {
      std::vector<BeamPair> none;
      try {
        table.score_components(none, r.frame, r.caption_id, {});
      } catch (const ValidationError&) {
        table.add(r.frame, r.caption_id, r.c);
      }
    }
  }
  return out;
}

ScoreTable load_score_table(const std::filesystem::path& path) { return parse_score_table(read_file_text(path)); }

ScoreComponents HashScorer::score_components(std::span<const BeamPair> prefix, FrameIndex frame,
                                             std::uint32_t caption_id, const std::string&) const {
  std::uint64_t h = splitmix64_mix(seed_ ^ 0x6a09e667f3bcc908ull);
  for (const auto& p : prefix) {
    h = splitmix64_mix(h ^ p.frame.value);
    h = splitmix64_mix(h ^ (static_cast<std::uint64_t>(p.caption_id) << 32 | 0x5bu));
  }
  h = splitmix64_mix(h ^ frame.value ^ 0xbb67ae8584caa73bull);
  h = splitmix64_mix(h ^ (static_cast<std::uint64_t>(caption_id) << 32 | 0xc1u));
  const std::uint64_t g = splitmix64_mix(h ^ 0x3c6ef372fe94f82bull);
  return {-10.0 * unit_double(h), -10.0 * unit_double(g)};
}

std::unique_ptr<Scorer> table_scorer(const std::filesystem::path& path) {
  auto table = load_score_table(path);
  return std::make_unique<TableScorer>(table.for_video(""));
}

std::unique_ptr<Scorer> hash_scorer(std::uint64_t seed) { return std::make_unique<HashScorer>(seed); }

// ----------------------------------------------------------------- config

std::string to_string(NormPool pool) { return pool == NormPool::kStepGlobal ? "step_global" : "per_beam"; }

NormPool parse_norm_pool(const std::string& name) {
  if (name == "step_global") return NormPool::kStepGlobal;
  if (name == "per_beam") return NormPool::kPerBeam;
  throw ValidationError("unknown norm pool '" + name + "' (expected step_global or per_beam)");
}

void BeamConfig::validate() const {
  if (n == 0) throw ValidationError("beam: n must be positive");
  if (width == 0) throw ValidationError("beam: width must be at least 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("beam: alpha must be in [0, 1]");
}

void BeamInput::validate() const {
  if (frames.empty()) throw ValidationError("beam input '" + video_id + "': no frames");
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (frames[i].captions.empty()) {
      throw ValidationError("beam input '" + video_id + "': frame " + std::to_string(frames[i].frame.value) +
                            " has no captions");
    }
    if (i > 0 && !(frames[i - 1].frame < frames[i].frame)) {
      throw ValidationError("beam input '" + video_id + "': frames not strictly increasing");
    }
  }
}

std::vector<BeamInput> parse_beam_inputs(std::string_view text) {
  struct Caps {
    std::vector<std::optional<std::string>> by_id;
    bool explicit_ids = false;
    bool implicit_ids = false;
  };
  std::vector<std::string> order;
  std::map<std::string, std::map<std::uint32_t, Caps>> grouped;

  detail::for_each_jsonl(text, "beam candidates", [&](const detail::json& obj, std::size_t line) {
    const auto where = "beam candidates line " + std::to_string(line);
    const auto video = detail::get_string(obj, "video_id", where);
    const auto frame = detail::index_field(obj, "keyframe", where);
    auto caption = detail::get_string(obj, "caption", where);
    if (!grouped.count(video)) order.push_back(video);
    auto& caps = grouped[video][frame];
    if (obj.contains("caption_id")) {
      caps.explicit_ids = true;
      const auto id = detail::index_field(obj, "caption_id", where);
      if (id >= caps.by_id.size()) caps.by_id.resize(id + 1);
      if (caps.by_id[id] && *caps.by_id[id] != caption) {
        throw ValidationError(where + ": caption_id " + std::to_string(id) + " reused with a different caption");
      }
      caps.by_id[id] = std::move(caption);
    } else {
      caps.implicit_ids = true;
      const bool known = std::any_of(caps.by_id.begin(), caps.by_id.end(),
                                     [&](const auto& c) { return c && *c == caption; });
      if (!known) caps.by_id.emplace_back(std::move(caption));
    }
    if (caps.explicit_ids && caps.implicit_ids) {
      throw ValidationError(where + ": frame " + std::to_string(frame) + " mixes rows with and without caption_id");
    }
  });

  std::vector<BeamInput> out;
  for (const auto& video : order) {
    BeamInput in;
    in.video_id = video;
    for (auto& [frame, caps] : grouped[video]) {
      FrameOptions fo;
      fo.frame = FrameIndex(frame);
      for (std::size_t id = 0; id < caps.by_id.size(); ++id) {
        if (!caps.by_id[id]) {
          throw ValidationError("beam candidates: video '" + video + "' frame " + std::to_string(frame) +
                                " is missing caption_id " + std::to_string(id));
        }
        fo.captions.push_back(*caps.by_id[id]);
      }
      in.frames.push_back(std::move(fo));
    }
    in.validate();
    out.push_back(std::move(in));
  }
  return out;
}

std::vector<BeamInput> load_beam_inputs(const std::filesystem::path& path) {
  return parse_beam_inputs(read_file_text(path));
}

// ------------------------------------------------------------------ search

std::vector<double> minmax_normalize(std::span<const double> values) {
  if (values.empty()) throw ValidationError("minmax_normalize: empty input");
  for (double v : values) {
    if (!std::isfinite(v)) throw ValidationError("minmax_normalize: non-finite input");
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double min = *lo, max = *hi;
  std::vector<double> out(values.size(), 0.5);
  if (max == min) return out;
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - min) / (max - min);
  return out;
}

namespace {

double contribution(double alpha, double norm_frame, double norm_caption) {
  return alpha * norm_frame + (1.0 - alpha) * norm_caption;
}

// Strict ranking: higher total first, then smaller frame tuple, then smaller
// caption tuple (text, then id).
bool ranks_before(const BeamState& a, const BeamState& b) {
  if (a.total != b.total) return a.total > b.total;
  const std::size_t len = std::min(a.pairs.size(), b.pairs.size());
  for (std::size_t i = 0; i < len; ++i) {
    if (a.pairs[i].frame != b.pairs[i].frame) return a.pairs[i].frame < b.pairs[i].frame;
  }
  if (a.pairs.size() != b.pairs.size()) return a.pairs.size() < b.pairs.size();
  for (std::size_t i = 0; i < len; ++i) {
    if (a.pairs[i].caption != b.pairs[i].caption) return a.pairs[i].caption < b.pairs[i].caption;
  }
  for (std::size_t i = 0; i < len; ++i) {
    if (a.pairs[i].caption_id != b.pairs[i].caption_id) return a.pairs[i].caption_id < b.pairs[i].caption_id;
  }
  return false;
}

struct Expansion {
  std::size_t parent;
  std::size_t frame_pos;
  std::uint32_t caption_id;
  ScoreComponents comp;
};

void normalize_pool(std::span<const Expansion> pool, std::span<double> norm_frame, std::span<double> norm_caption) {
  std::vector<double> f, c;
  f.reserve(pool.size());
  c.reserve(pool.size());
  for (const auto& e : pool) {
    f.push_back(e.comp.frame_ll);
    c.push_back(e.comp.caption_ll);
  }
  const auto nf = minmax_normalize(f);
  const auto nc = minmax_normalize(c);
  std::copy(nf.begin(), nf.end(), norm_frame.begin());
  std::copy(nc.begin(), nc.end(), norm_caption.begin());
}

BeamResult make_result(const BeamInput& input, std::vector<BeamState> survivors, std::size_t n) {
  BeamResult r;
  const auto& best = survivors.front();
  r.pairs = best.pairs;
  r.summary.video_id = input.video_id;
  for (const auto& p : best.pairs) r.summary.pairs.push_back({p.frame, p.caption});
  r.score = best.total / static_cast<double>(n);
  r.survivors = std::move(survivors);
  return r;
}

}  // namespace

BeamResult beam_select(const BeamInput& input, const Scorer& scorer, const BeamConfig& cfg) {
  cfg.validate();
  input.validate();
  std::vector<BeamState> beams(1);

  for (std::size_t round = 1; round <= cfg.n; ++round) {
    std::vector<Expansion> exps;
    for (std::size_t b = 0; b < beams.size(); ++b) {
      const auto& pairs = beams[b].pairs;
      for (std::size_t fp = 0; fp < input.frames.size(); ++fp) {
        const auto& fo = input.frames[fp];
        if (!pairs.empty() && !(pairs.back().frame < fo.frame)) continue;
        for (std::uint32_t cid = 0; cid < fo.captions.size(); ++cid) {
          exps.push_back({b, fp, cid, scorer.score_components(pairs, fo.frame, cid, fo.captions[cid])});
        }
      }
    }
    if (exps.empty()) {
      throw InfeasibleError("beam '" + input.video_id + "': round " + std::to_string(round) + " of " +
                            std::to_string(cfg.n) + " has no chronologically valid expansion");
    }

    std::vector<double> nf(exps.size()), nc(exps.size());
    if (cfg.norm_pool == NormPool::kStepGlobal) {
      normalize_pool(exps, nf, nc);
    } else {
      // Expansions are generated grouped by parent.
      for (std::size_t lo = 0; lo < exps.size();) {
        std::size_t hi = lo;
        while (hi < exps.size() && exps[hi].parent == exps[lo].parent) ++hi;
        normalize_pool(std::span(exps).subspan(lo, hi - lo), std::span(nf).subspan(lo, hi - lo),
                       std::span(nc).subspan(lo, hi - lo));
        lo = hi;
      }
    }

    std::vector<BeamState> next;
    next.reserve(exps.size());
    for (std::size_t e = 0; e < exps.size(); ++e) {
      const auto& parent = beams[exps[e].parent];
      const auto& fo = input.frames[exps[e].frame_pos];
      BeamState s = parent;
      s.pairs.push_back({fo.frame, exps[e].caption_id, fo.captions[exps[e].caption_id]});
      s.norm_sum_frame += nf[e];
      s.norm_sum_caption += nc[e];
      s.total += contribution(cfg.alpha, nf[e], nc[e]);
      next.push_back(std::move(s));
    }

    // Identical pair lists keep the higher sum.
    std::sort(next.begin(), next.end(), ranks_before);
    std::vector<BeamState> unique;
    for (auto& s : next) {
      const bool dup = std::any_of(unique.begin(), unique.end(), [&](const BeamState& u) { return u.pairs == s.pairs; });
      if (!dup) unique.push_back(std::move(s));
      if (unique.size() == cfg.width) break;
    }
    beams = std::move(unique);
  }
  return make_result(input, std::move(beams), cfg.n);
}

std::vector<std::size_t> count_paths(const BeamInput& input, std::size_t n) {
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  const std::size_t f = input.frames.size();
  // ways[i]: paths of the current length ending at frame i.
  std::vector<std::size_t> ways(f), out;
  for (std::size_t i = 0; i < f; ++i) ways[i] = input.frames[i].captions.size();
  for (std::size_t len = 1; len <= n; ++len) {
    std::size_t total = 0;
    for (auto w : ways) total = (total > kMax - w) ? kMax : total + w;
    out.push_back(total);
    std::vector<std::size_t> next(f, 0);
    std::size_t prefix = 0;
    for (std::size_t i = 0; i < f; ++i) {
      const std::size_t k = input.frames[i].captions.size();
      next[i] = (prefix != 0 && prefix > kMax / k) ? kMax : prefix * k;
      prefix = (prefix > kMax - ways[i]) ? kMax : prefix + ways[i];
    }
    ways = std::move(next);
  }
  return out;
}

BeamResult exhaustive_select(const BeamInput& input, const Scorer& scorer, const BeamConfig& cfg, std::size_t limit) {
  cfg.validate();
  input.validate();
  const auto counts = count_paths(input, cfg.n);
  for (std::size_t r = 0; r < counts.size(); ++r) {
    if (counts[r] > limit) {
      throw CombinatorialLimitError("exhaustive_select: round " + std::to_string(r + 1) + " has " +
                                    std::to_string(counts[r]) + " paths (limit " + std::to_string(limit) + ")");
    }
  }
  if (counts.back() == 0) {
    throw InfeasibleError("exhaustive_select '" + input.video_id + "': fewer than " + std::to_string(cfg.n) +
                          " frames available");
  }

  // Level r holds every valid length-r path with its running total.
  struct Node {
    std::vector<BeamPair> pairs;
    std::size_t last_pos;
    double total;
    double sum_f;
    double sum_c;
  };
  std::vector<Node> level;
  for (std::size_t round = 1; round <= cfg.n; ++round) {
    std::vector<Node> next;
    std::vector<double> fl, cl;
    std::vector<std::size_t> group;  // parent id per child, for per_beam pools
    auto extend = [&](const Node* parent, std::size_t parent_id) {
      const std::size_t start = parent ? parent->last_pos + 1 : 0;
      for (std::size_t fp = start; fp < input.frames.size(); ++fp) {
        const auto& fo = input.frames[fp];
        for (std::uint32_t cid = 0; cid < fo.captions.size(); ++cid) {
          Node child{parent ? parent->pairs : std::vector<BeamPair>{}, fp, parent ? parent->total : 0.0,
                     parent ? parent->sum_f : 0.0, parent ? parent->sum_c : 0.0};
          const auto comp = scorer.score_components(child.pairs, fo.frame, cid, fo.captions[cid]);
          child.pairs.push_back({fo.frame, cid, fo.captions[cid]});
          fl.push_back(comp.frame_ll);
          cl.push_back(comp.caption_ll);
          group.push_back(parent_id);
          next.push_back(std::move(child));
        }
      }
    };
    if (round == 1) extend(nullptr, 0);
    else
      for (std::size_t p = 0; p < level.size(); ++p) extend(&level[p], p);

    std::vector<double> nf(next.size()), nc(next.size());
    auto norm_range = [&](std::size_t lo, std::size_t hi) {
      const auto f = minmax_normalize(std::span(fl).subspan(lo, hi - lo));
      const auto c = minmax_normalize(std::span(cl).subspan(lo, hi - lo));
      std::copy(f.begin(), f.end(), nf.begin() + static_cast<std::ptrdiff_t>(lo));
      std::copy(c.begin(), c.end(), nc.begin() + static_cast<std::ptrdiff_t>(lo));
    };
    if (cfg.norm_pool == NormPool::kStepGlobal) {
      if (!next.empty()) norm_range(0, next.size());
    } else {
      for (std::size_t lo = 0; lo < next.size();) {
        std::size_t hi = lo;
        while (hi < next.size() && group[hi] == group[lo]) ++hi;
        norm_range(lo, hi);
        lo = hi;
      }
    }
    for (std::size_t k = 0; k < next.size(); ++k) {
      next[k].total += contribution(cfg.alpha, nf[k], nc[k]);
      next[k].sum_f += nf[k];
      next[k].sum_c += nc[k];
    }
    level = std::move(next);
  }

  std::vector<BeamState> finals;
  finals.reserve(level.size());
  for (auto& node : level) finals.push_back({std::move(node.pairs), node.sum_f, node.sum_c, node.total});
  std::sort(finals.begin(), finals.end(), ranks_before);
  return make_result(input, std::move(finals), cfg.n);
}

}  // namespace vidsum
