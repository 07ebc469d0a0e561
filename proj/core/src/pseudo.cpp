// SPDX-License-Identifier: Apache-2.0
#include "vidsum/pseudo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "json_util.hpp"
#include "vidsum/error.hpp"
#include "vidsum/file_util.hpp"
#include "vidsum/parallel.hpp"

namespace vidsum {

std::string to_string(NoiseMode mode) { return mode == NoiseMode::kPerFrame ? "per_frame" : "per_element"; }
std::string to_string(SourceSampling s) { return s == SourceSampling::kRandom ? "random" : "story"; }

NoiseMode parse_noise_mode(const std::string& name) {
  if (name == "per_frame") return NoiseMode::kPerFrame;
  if (name == "per_element") return NoiseMode::kPerElement;
  throw ValidationError("unknown noise mode '" + name + "' (expected per_frame or per_element)");
}

SourceSampling parse_sampling(const std::string& name) {
  if (name == "random" || name == "coco") return SourceSampling::kRandom;
  if (name == "story") return SourceSampling::kStory;
  throw ValidationError("unknown sampling '" + name + "' (expected random or story)");
}

void PseudoConfig::validate() const {
  if (n == 0) throw ValidationError("pseudo-gen: n must be positive");
  if (n > encoder_len) {
    throw ValidationError("pseudo-gen: n (" + std::to_string(n) + ") exceeds encoder_len (" +
                          std::to_string(encoder_len) + ")");
  }
  if (encoder_len > 0xffffffffu) throw ValidationError("pseudo-gen: encoder_len too large");
  if (!std::isfinite(beta) || beta < 0.0) throw ValidationError("pseudo-gen: beta must be finite and non-negative");
}

namespace {

// Floyd's sampling of k distinct values from [lo, hi), returned sorted.
std::vector<std::uint32_t> sample_distinct(std::uint32_t lo, std::uint32_t hi, std::size_t k, SplitMix64& rng) {
  std::set<std::uint32_t> chosen;
  const std::uint32_t pop = hi - lo;
  for (std::uint32_t j = pop - static_cast<std::uint32_t>(k); j < pop; ++j) {
    const auto t = static_cast<std::uint32_t>(rng.uniform_below(std::uint64_t{j} + 1));
    if (!chosen.insert(lo + t).second) chosen.insert(lo + j);
  }
  return {chosen.begin(), chosen.end()};
}

}  // namespace

std::vector<std::uint32_t> split_spans(std::size_t encoder_len, std::size_t n, SplitMix64& rng) {
  if (n == 0) throw ValidationError("split_spans: n must be positive");
  if (n > encoder_len) {
    throw ValidationError("split_spans: n (" + std::to_string(n) + ") exceeds encoder_len (" +
                          std::to_string(encoder_len) + ")");
  }
  const auto len = static_cast<std::uint32_t>(encoder_len);
  std::vector<std::uint32_t> cuts{0};
  const auto interior = sample_distinct(1, len, n - 1, rng);
  cuts.insert(cuts.end(), interior.begin(), interior.end());
  cuts.push_back(len);
  return cuts;
}

PseudoInstance make_instance(std::span<const std::vector<float>> images, std::span<const std::string> captions,
                             const PseudoConfig& cfg, SplitMix64& rng, std::uint64_t seed) {
  cfg.validate();
  if (images.size() != cfg.n || captions.size() != cfg.n) {
    throw ValidationError("make_instance: expected " + std::to_string(cfg.n) + " images and captions");
  }
  const std::size_t dim = images.front().size();
  if (dim == 0) throw ValidationError("make_instance: empty image feature");
  for (const auto& img : images) {
    if (img.size() != dim) throw ValidationError("make_instance: image feature dimensions differ");
  }

  PseudoInstance inst;
  inst.seed = seed;
  inst.captions.assign(captions.begin(), captions.end());
  inst.span_bounds = split_spans(cfg.encoder_len, cfg.n, rng);
  for (std::size_t j = 0; j < cfg.n; ++j) {
    inst.keyframe_indices.push_back(
        static_cast<std::uint32_t>(rng.uniform_range(inst.span_bounds[j], inst.span_bounds[j + 1])));
  }

  const std::size_t len = cfg.encoder_len;
  std::vector<float> data(len * dim);
  double total = 0.0;
  for (std::size_t j = 0; j < cfg.n; ++j) {
    double img_sum = 0.0;
    for (float v : images[j]) img_sum += v;
    total += img_sum * static_cast<double>(inst.span_bounds[j + 1] - inst.span_bounds[j]);
    for (std::size_t r = inst.span_bounds[j]; r < inst.span_bounds[j + 1]; ++r) {
      std::copy(images[j].begin(), images[j].end(), data.begin() + static_cast<std::ptrdiff_t>(r * dim));
    }
  }
  inst.v_bar = total / static_cast<double>(len * dim);

  const double scale = inst.v_bar * cfg.beta;
  std::size_t span = 0;
  for (std::size_t r = 0; r < len; ++r) {
    while (r >= inst.span_bounds[span + 1]) ++span;
    if (r == inst.keyframe_indices[span]) continue;
    float* row = data.data() + r * dim;
    const auto& img = images[span];
    if (cfg.noise == NoiseMode::kPerFrame) {
      const double x = rng.standard_normal();
      for (std::size_t d = 0; d < dim; ++d) row[d] = static_cast<float>(static_cast<double>(img[d]) + scale * x);
    } else {
      for (std::size_t d = 0; d < dim; ++d) {
        row[d] = static_cast<float>(static_cast<double>(img[d]) + scale * rng.standard_normal());
      }
    }
  }
  inst.features = FeatureMatrix("pseudo", len, dim, std::move(data));
  return inst;
}

void validate_instance(const PseudoInstance& inst, std::size_t n, std::size_t encoder_len) {
  const auto& b = inst.span_bounds;
  if (b.size() != n + 1 || b.front() != 0 || b.back() != encoder_len) {
    throw ValidationError("pseudo instance: span bounds must run from 0 to encoder_len with n + 1 cuts");
  }
  if (inst.keyframe_indices.size() != n || inst.captions.size() != n) {
    throw ValidationError("pseudo instance: expected n keyframes and captions");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!(b[j] < b[j + 1])) throw ValidationError("pseudo instance: empty span " + std::to_string(j));
    const auto k = inst.keyframe_indices[j];
    if (k < b[j] || k >= b[j + 1]) throw ValidationError("pseudo instance: keyframe outside span " + std::to_string(j));
  }
  if (inst.features.num_frames() != encoder_len) throw ValidationError("pseudo instance: feature rows != encoder_len");
}

std::string instance_metadata_json(const PseudoInstance& inst) {
  detail::json j = {{"keyframe_indices", inst.keyframe_indices},
                    {"captions", inst.captions},
                    {"span_bounds", inst.span_bounds},
                    {"v_bar", inst.v_bar},
                    {"seed", inst.seed}};
  return j.dump(2) + "\n";
}

std::vector<SourceItem> parse_source(std::string_view text) {
  std::vector<SourceItem> out;
  detail::for_each_jsonl(text, "source", [&](const detail::json& obj, std::size_t line) {
    const auto where = "source line " + std::to_string(line);
    SourceItem it;
    it.image_id = detail::get_string(obj, "image_id", where);
    it.feature_file = detail::get_string(obj, "feature_file", where);
    it.row = detail::index_field(obj, "row", where);
    it.caption = detail::get_string(obj, "caption", where);
    if (obj.contains("story_id") && !obj["story_id"].is_null()) it.story_id = detail::get_string(obj, "story_id", where);
    out.push_back(std::move(it));
  });
  return out;
}

namespace {

std::string instance_stem(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "instance_%06zu", i);
  return buf;
}

}  // namespace

GenSummary gen_dataset(const std::filesystem::path& source, std::size_t count, const PseudoConfig& cfg,
                       const std::filesystem::path& out_dir, std::size_t jobs) {
  cfg.validate();
  const auto source_text = read_file_text(source);
  const auto items = parse_source(source_text);
  const auto base = source.parent_path();

  // Load every referenced feature file once.
  std::map<std::string, FeatureMatrix> files;
  std::map<std::string, std::string> digests;
  for (const auto& it : items) {
    if (files.count(it.feature_file)) continue;
    const auto path = base / it.feature_file;
    files.emplace(it.feature_file, load_features(path, it.feature_file));
    digests.emplace(it.feature_file, sha256_file(path));
  }
  for (const auto& it : items) {
    if (it.row >= files.at(it.feature_file).num_frames()) {
      throw ValidationError("source: image '" + it.image_id + "' row " + std::to_string(it.row) + " out of range");
    }
  }

  // Which source items feed each instance.
  std::vector<std::vector<std::size_t>> picks(count);
  std::vector<std::uint64_t> seeds(count);
  for (std::size_t i = 0; i < count; ++i) seeds[i] = derive_seed(cfg.seed, i);
  if (cfg.sampling == SourceSampling::kStory) {
    std::vector<std::string> order;
    std::map<std::string, std::vector<std::size_t>> stories;
    for (std::size_t k = 0; k < items.size(); ++k) {
      if (items[k].story_id.empty()) throw ValidationError("source: story sampling needs story_id on every row");
      auto [pos, fresh] = stories.try_emplace(items[k].story_id);
      if (fresh) order.push_back(items[k].story_id);
      pos->second.push_back(k);
    }
    std::vector<std::string> eligible;
    for (const auto& s : order) {
      if (stories[s].size() >= cfg.n) eligible.push_back(s);
    }
    if (count > eligible.size()) {
      throw ValidationError("source exhausted: " + std::to_string(eligible.size()) + " stories with at least " +
                            std::to_string(cfg.n) + " items, " + std::to_string(count) + " requested");
    }
    for (std::size_t i = 0; i < count; ++i) {
      const auto& s = stories[eligible[i]];
      picks[i].assign(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(cfg.n));
    }
  } else if (count > 0 && items.size() < cfg.n) {
    throw ValidationError("source exhausted: " + std::to_string(items.size()) + " items, " + std::to_string(cfg.n) +
                          " needed per instance");
  }

  std::filesystem::create_directories(out_dir);
  std::vector<std::string> instance_digests(count);
  parallel_for(count, jobs, [&](std::size_t i) {
    SplitMix64 rng(seeds[i]);
    if (cfg.sampling == SourceSampling::kRandom) {
      const auto chosen = sample_distinct(0, static_cast<std::uint32_t>(items.size()), cfg.n, rng);
      picks[i].assign(chosen.begin(), chosen.end());
    }
    std::vector<std::vector<float>> images;
    std::vector<std::string> captions;
    for (auto k : picks[i]) {
      const auto row = files.at(items[k].feature_file).row(items[k].row);
      images.emplace_back(row.begin(), row.end());
      captions.push_back(items[k].caption);
    }
    auto inst = make_instance(images, captions, cfg, rng, seeds[i]);
    const auto stem = instance_stem(i);
    const auto bytes = encode_vsft(inst.features);
    write_file_atomic(out_dir / (stem + ".vsft"), bytes);
    write_file_atomic(out_dir / (stem + ".json"), instance_metadata_json(inst));
    instance_digests[i] = sha256_hex(bytes);
  });

  GenSummary summary;
  summary.count = count;
  detail::json instances = detail::json::array();
  for (std::size_t i = 0; i < count; ++i) {
    const auto stem = instance_stem(i);
    instances.push_back({{"features", stem + ".vsft"},
                         {"metadata", stem + ".json"},
                         {"seed", seeds[i]},
                         {"features_sha256", instance_digests[i]}});
    summary.files.push_back(out_dir / (stem + ".vsft"));
    summary.files.push_back(out_dir / (stem + ".json"));
  }
  detail::json manifest = {
      {"count", count},
      {"config",
       {{"n", cfg.n},
        {"encoder_len", cfg.encoder_len},
        {"beta", cfg.beta},
        {"seed", cfg.seed},
        {"noise", to_string(cfg.noise)},
        {"sampling", to_string(cfg.sampling)}}},
      {"rng", {{"generator", std::string(SplitMix64::kName)},
               {"instance_seed", "splitmix64_mix(seed ^ instance_index)"},
               {"uniform", "lemire-multiply-shift"},
               {"normal", "marsaglia-polar"}}},
      {"v_bar_scope", "instance"},
      {"source", {{"file", source.filename().string()}, {"sha256", sha256_hex(source_text)}}},
      {"feature_files", digests},
      {"instances", std::move(instances)}};
  summary.manifest = out_dir / "manifest.json";
  write_file_atomic(summary.manifest, manifest.dump(2) + "\n");
  return summary;
}

}  // namespace vidsum
