// SPDX-License-Identifier: Apache-2.0
#include "cli/cli.hpp"

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "vidsum/akm.hpp"
#include "vidsum/beam.hpp"
#include "vidsum/caption_eval.hpp"
#include "vidsum/dataset_io.hpp"
#include "vidsum/error.hpp"
#include "vidsum/features.hpp"
#include "vidsum/file_util.hpp"
#include "vidsum/filter.hpp"
#include "vidsum/parallel.hpp"
#include "vidsum/pseudo.hpp"
#include "vidsum/selector.hpp"
#include "vidsum/stats.hpp"

namespace vidsum::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct Manifest {
  std::string command;
  json config = json::object();
  json inputs = json::object();
  json outputs = json::array();
  json results = json::object();

  void input(const std::string& name, const fs::path& p) {
    inputs[name] = {{"path", p.string()}, {"sha256", sha256_file(p)}};
  }
  void features(const FeatureStore& store) {
    json files = json::object();
    for (const auto& [id, p] : store.loaded_paths()) files[id] = {{"path", p.string()}, {"sha256", sha256_file(p)}};
    inputs["features"] = std::move(files);
  }
};

struct Common {
  std::string out;
  std::string manifest;
  std::size_t jobs = 1;
};

void add_common(CLI::App* sub, Common& c, bool out_required = false) {
  auto* o = sub->add_option("--out,-o", c.out, "Output file (stdout when omitted)");
  if (out_required) o->required();
  sub->add_option("--manifest", c.manifest, "Run manifest path (default: <out>.manifest.json)");
  sub->add_option("--jobs,-j", c.jobs, "Concurrent per-video tasks")->envname("VIDSUM_JOBS")->check(CLI::PositiveNumber);
}

void emit(const std::string& text, const std::string& path, std::ostream& out, Manifest& m) {
  if (path.empty()) {
    out << text;
    return;
  }
  write_file_atomic(path, text);
  m.outputs.push_back({{"path", path}, {"sha256", sha256_hex(text)}});
}

void write_manifest(const Manifest& m, const Common& c, const std::string& fallback_base, double seconds) {
  std::string path = c.manifest;
  if (path.empty()) path = (fallback_base.empty() ? "vidsum_" + m.command : fallback_base) + ".manifest.json";
  json j = {{"command", m.command},
            {"tool_version", kToolVersion},
            {"config", m.config},
            {"inputs", m.inputs},
            {"outputs", m.outputs},
            {"results", m.results},
            {"wall_time_s", seconds}};
  write_file_atomic(path, j.dump(2) + "\n");
}

void print_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << "\n";
}

std::map<std::string, std::size_t> index_by_id(const std::vector<VideoRecord>& records) {
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < records.size(); ++i) idx[records[i].video_id] = i;
  return idx;
}

const VideoRecord& lookup(const std::vector<VideoRecord>& records, const std::map<std::string, std::size_t>& idx,
                          const std::string& video_id) {
  auto it = idx.find(video_id);
  if (it == idx.end()) throw ValidationError("video '" + video_id + "' is not in the dataset");
  return records[it->second];
}

json report_to_json(const EvalReport& r) {
  return {{"video_id", r.video_id},
          {"akm_ex", r.akm_ex},
          {"akm_cos", r.akm_cos},
          {"aligned_akm_ex", r.aligned_akm_ex},
          {"meteor", r.meteor},
          {"external", r.external},
          {"assign", r.assign},
          {"empty_caption_pairs", r.empty_caption_pairs}};
}

// ------------------------------------------------------------------- akm

struct AkmOpts {
  Common common;
  std::string dataset, features, pred, matcher = "ex";
};

Manifest run_akm(const AkmOpts& o, std::ostream& out, std::ostream& err) {
  Manifest m{"akm"};
  const auto kind = parse_matcher(o.matcher);
  m.config = {{"matcher", to_string(kind)}, {"jobs", o.common.jobs}};
  std::vector<std::string> warnings;
  const auto records = load_dataset(o.dataset, &warnings);
  print_warnings(warnings, err);
  const auto preds = load_predictions(o.pred);
  m.input("dataset", o.dataset);
  m.input("predictions", o.pred);
  std::optional<FeatureStore> store;
  if (kind == MatcherKind::kCosine) {
    if (o.features.empty()) throw ValidationError("akm: --features is required for the cos matcher");
    store.emplace(o.features);
  }
  const auto idx = index_by_id(records);
  std::vector<Alignment> aligns(preds.size());
  parallel_for(preds.size(), o.common.jobs, [&](std::size_t i) {
    const auto& rec = lookup(records, idx, preds[i].video_id);
    std::shared_ptr<const FeatureMatrix> fm;
    if (store) fm = store->get(rec.video_id);
    aligns[i] = akm_align(akm_score_matrix(preds[i], rec, kind, fm.get()));
  });
  if (store) m.features(*store);

  json videos = json::array();
  double sum = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    videos.push_back({{"video_id", preds[i].video_id}, {"akm", aligns[i].score}, {"assign", aligns[i].assign}});
    sum += aligns[i].score;
  }
  json corpus = {{"num_videos", preds.size()}, {"matcher", to_string(kind)}};
  corpus["akm"] = preds.empty() ? json(nullptr) : json(sum / static_cast<double>(preds.size()));
  m.results = corpus;
  emit(json{{"matcher", to_string(kind)}, {"videos", std::move(videos)}, {"corpus", corpus}}.dump(2) + "\n",
       o.common.out, out, m);
  return m;
}

// ------------------------------------------------------------------ eval

struct EvalOpts {
  Common common;
  std::string dataset, features, pred, external;
};

Manifest run_eval(const EvalOpts& o, std::ostream& out, std::ostream& err) {
  Manifest m{"eval"};
  m.config = {{"jobs", o.common.jobs}, {"meteor", "exact-unigram"}};
  std::vector<std::string> warnings;
  const auto records = load_dataset(o.dataset, &warnings);
  print_warnings(warnings, err);
  const auto preds = load_predictions(o.pred);
  if (preds.empty()) throw ValidationError("eval: no predictions");
  m.input("dataset", o.dataset);
  m.input("predictions", o.pred);
  std::optional<ExternalScores> external;
  if (!o.external.empty()) {
    external = load_external_scores(o.external);
    m.input("external", o.external);
  }
  FeatureStore store(o.features);
  const auto idx = index_by_id(records);
  std::vector<EvalReport> reports(preds.size());
  parallel_for(preds.size(), o.common.jobs, [&](std::size_t i) {
    const auto& rec = lookup(records, idx, preds[i].video_id);
    reports[i] = evaluate_summary(preds[i], rec, *store.get(rec.video_id), external ? &*external : nullptr);
  });
  m.features(store);
  for (const auto& r : reports) {
    if (r.empty_caption_pairs > 0) {
      err << "warning: video '" << r.video_id << "': " << r.empty_caption_pairs
          << " caption pair(s) empty after tokenization, scored 0\n";
    }
  }
  const auto corpus = aggregate(reports);
  json videos = json::array();
  for (const auto& r : reports) videos.push_back(report_to_json(r));
  json cj = {{"num_videos", corpus.num_videos}, {"means", corpus.means}, {"counts", corpus.counts}};
  m.results = cj;
  emit(json{{"videos", std::move(videos)}, {"corpus", cj}}.dump(2) + "\n", o.common.out, out, m);
  return m;
}

// ---------------------------------------------------------------- select

struct SelectOpts {
  Common common;
  std::string candidates, dataset, report, mode = "hard";
  double duration = 0.0;
  SelectorConfig cfg;
};

Manifest run_select(SelectOpts o, std::ostream& out, std::ostream& err) {
  Manifest m{"select"};
  o.cfg.mode = parse_selector_mode(o.mode);
  o.cfg.validate();
  m.config = {{"n", o.cfg.n},
              {"mode", to_string(o.cfg.mode)},
              {"max_segment_fraction", o.cfg.max_segment_fraction},
              {"overlap_penalty_per_s", o.cfg.overlap_penalty_per_s},
              {"segment_weight", o.cfg.segment_weight},
              {"caption_weight", o.cfg.caption_weight},
              {"jobs", o.common.jobs}};
  const auto cands = load_candidates(o.candidates);
  m.input("candidates", o.candidates);

  std::vector<std::string> order;
  std::map<std::string, std::vector<Candidate>> grouped;
  for (const auto& c : cands) {
    auto [it, fresh] = grouped.try_emplace(c.video_id);
    if (fresh) order.push_back(c.video_id);
    it->second.push_back(c);
  }

  std::map<std::string, double> durations;
  if (!o.dataset.empty()) {
    std::vector<std::string> warnings;
    for (const auto& r : load_dataset(o.dataset, &warnings)) durations[r.video_id] = r.duration_s;
    print_warnings(warnings, err);
    m.input("dataset", o.dataset);
  } else if (!(o.duration > 0.0)) {
    throw ValidationError("select: give --dataset or a positive --duration");
  }
  m.config["duration_s"] = o.dataset.empty() ? json(o.duration) : json("dataset");

  std::vector<Selection> sels(order.size());
  parallel_for(order.size(), o.common.jobs, [&](std::size_t i) {
    const auto& id = order[i];
    double dur = o.duration;
    if (!o.dataset.empty()) {
      auto it = durations.find(id);
      if (it == durations.end()) throw ValidationError("video '" + id + "' is not in the dataset");
      dur = it->second;
    }
    const auto kept = prefilter(grouped[id], dur, o.cfg);
    if (kept.empty()) throw InfeasibleError("video '" + id + "': every candidate removed by the length prefilter");
    try {
      sels[i] = select_n_dp(kept, o.cfg);
    } catch (const InfeasibleError& e) {
      throw InfeasibleError("video '" + id + "': " + e.what());
    }
  });

  std::vector<PredictedSummary> preds;
  json per_video = json::array();
  for (std::size_t i = 0; i < order.size(); ++i) {
    PredictedSummary p{order[i], {}};
    for (const auto& c : sels[i].chosen) p.pairs.push_back({c.keyframe, c.caption});
    preds.push_back(std::move(p));
    if (sels[i].fell_back) err << "warning: video '" << order[i] << "': hard mode infeasible, used soft mode\n";
    per_video.push_back({{"video_id", order[i]},
                         {"objective", sels[i].objective},
                         {"mode_used", to_string(sels[i].mode_used)},
                         {"fell_back", sels[i].fell_back}});
  }
  m.results = {{"videos", per_video}};
  emit(predictions_to_jsonl(preds), o.common.out, out, m);
  if (!o.report.empty()) {
    const auto text = json{{"videos", per_video}}.dump(2) + "\n";
    write_file_atomic(o.report, text);
    m.outputs.push_back({{"path", o.report}, {"sha256", sha256_hex(text)}});
  }
  return m;
}

// ------------------------------------------------------------------ beam

struct BeamOpts {
  Common common;
  std::string candidates, scorer, report, norm_pool = "step_global";
  BeamConfig cfg;
};

Manifest run_beam(BeamOpts o, std::ostream& out, std::ostream&) {
  Manifest m{"beam"};
  o.cfg.norm_pool = parse_norm_pool(o.norm_pool);
  o.cfg.validate();
  m.config = {{"n", o.cfg.n},
              {"width", o.cfg.width},
              {"alpha", o.cfg.alpha},
              {"norm_pool", to_string(o.cfg.norm_pool)},
              {"scorer", o.scorer},
              {"jobs", o.common.jobs}};
  const auto inputs = load_beam_inputs(o.candidates);
  m.input("candidates", o.candidates);

  std::optional<ScoreTable> table;
  std::optional<HashScorer> hash;
  const auto colon = o.scorer.find(':');
  const auto kind = o.scorer.substr(0, colon);
  const auto arg = colon == std::string::npos ? std::string{} : o.scorer.substr(colon + 1);
  if (kind == "table" && !arg.empty()) {
    table = load_score_table(arg);
    m.input("scorer_table", arg);
    m.config["seed"] = nullptr;
  } else if (kind == "hash" && !arg.empty()) {
    std::uint64_t seed = 0;
    try {
      std::size_t used = 0;
      seed = std::stoull(arg, &used);
      if (used != arg.size()) throw std::invalid_argument(arg);
    } catch (const std::logic_error&) {
      throw ValidationError("beam: hash scorer seed must be an unsigned integer, got '" + arg + "'");
    }
    hash.emplace(seed);
    m.config["seed"] = seed;
  } else {
    throw ValidationError("beam: --scorer must be table:PATH or hash:SEED");
  }

  std::vector<BeamResult> results(inputs.size());
  parallel_for(inputs.size(), o.common.jobs, [&](std::size_t i) {
    const Scorer& s = table ? static_cast<const Scorer&>(table->for_video(inputs[i].video_id)) : *hash;
    results[i] = beam_select(inputs[i], s, o.cfg);
  });

  std::vector<PredictedSummary> preds;
  json per_video = json::array();
  for (auto& r : results) {
    json ids = json::array();
    for (const auto& p : r.pairs) ids.push_back(p.caption_id);
    per_video.push_back({{"video_id", r.summary.video_id}, {"score", r.score}, {"caption_ids", ids}});
    preds.push_back(std::move(r.summary));
  }
  m.results = {{"videos", per_video}};
  emit(predictions_to_jsonl(preds), o.common.out, out, m);
  if (!o.report.empty()) {
    const auto text = json{{"videos", per_video}}.dump(2) + "\n";
    write_file_atomic(o.report, text);
    m.outputs.push_back({{"path", o.report}, {"sha256", sha256_hex(text)}});
  }
  return m;
}

// ---------------------------------------------------------------- filter

struct FilterOpts {
  Common common;
  std::string dataset, features, report;
  FilterConfig cfg;
};

Manifest run_filter(const FilterOpts& o, std::ostream& out, std::ostream& err) {
  Manifest m{"filter"};
  o.cfg.validate();
  m.config = {{"k_sigma", o.cfg.k_sigma}, {"min_keep", o.cfg.min_keep}, {"jobs", o.common.jobs}};
  std::vector<std::string> warnings;
  const auto records = load_dataset(o.dataset, &warnings);
  print_warnings(warnings, err);
  m.input("dataset", o.dataset);
  FeatureStore store(o.features);

  std::vector<VideoRecord> filtered(records.size());
  std::vector<VideoFilterReport> reports(records.size());
  parallel_for(records.size(), o.common.jobs, [&](std::size_t i) {
    filtered[i] = filter_record(records[i], *store.get(records[i].video_id), o.cfg, &reports[i]);
  });
  m.features(store);
  const auto report = summarize_filter(std::move(reports));
  m.results = {{"num_slots", report.num_slots},
               {"keyframes_before", report.keyframes_before},
               {"keyframes_removed", report.keyframes_removed},
               {"variance_before", report.variance_before},
               {"variance_after", report.variance_after}};
  emit(dataset_to_json(filtered), o.common.out, out, m);
  if (!o.report.empty()) {
    const auto text = filter_report_to_json(report);
    write_file_atomic(o.report, text);
    m.outputs.push_back({{"path", o.report}, {"sha256", sha256_hex(text)}});
  }
  return m;
}

// ------------------------------------------------------------ pseudo-gen

struct PseudoOpts {
  Common common;
  std::string source, out_dir, noise = "per_frame", sampling = "random";
  std::size_t count = 0;
  PseudoConfig cfg;
};

Manifest run_pseudo(PseudoOpts o, std::ostream&, std::ostream&) {
  Manifest m{"pseudo-gen"};
  o.cfg.noise = parse_noise_mode(o.noise);
  o.cfg.sampling = parse_sampling(o.sampling);
  o.cfg.validate();
  m.config = {{"count", o.count},
              {"n", o.cfg.n},
              {"encoder_len", o.cfg.encoder_len},
              {"beta", o.cfg.beta},
              {"seed", o.cfg.seed},
              {"noise", to_string(o.cfg.noise)},
              {"sampling", to_string(o.cfg.sampling)},
              {"jobs", o.common.jobs}};
  m.input("source", o.source);
  const auto summary = gen_dataset(o.source, o.count, o.cfg, o.out_dir, o.common.jobs);
  m.outputs.push_back({{"path", summary.manifest.string()}, {"sha256", sha256_file(summary.manifest)}});
  m.results = {{"instances", summary.count}, {"files", summary.files.size()}};
  return m;
}

// ----------------------------------------------------------------- stats

struct StatsOpts {
  Common common;
  std::string dataset, format = "table";
};

Manifest run_stats(const StatsOpts& o, std::ostream& out, std::ostream& err) {
  Manifest m{"stats"};
  m.config = {{"tokenizer", std::string(kStatsTokenizer)}, {"format", o.format}};
  std::vector<std::string> warnings;
  const auto records = load_dataset(o.dataset, &warnings);
  print_warnings(warnings, err);
  m.input("dataset", o.dataset);
  const auto s = compute_stats(records);
  const auto as_json = stats_to_json(s);
  m.results = json::parse(as_json);
  if (!o.common.out.empty()) emit(as_json, o.common.out, out, m);
  out << (o.format == "json" ? as_json : stats_to_table(s));
  return m;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"vidsum: multimodal video summarization evaluation and selection toolkit", "vidsum"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  AkmOpts akm;
  auto* akm_cmd = app.add_subcommand("akm", "Aligned keyframe matching score per video and over the corpus");
  akm_cmd->add_option("--dataset", akm.dataset, "Dataset JSON")->required();
  akm_cmd->add_option("--pred", akm.pred, "Prediction JSONL")->required();
  akm_cmd->add_option("--features", akm.features, "Feature directory (VSFT files or features.json sidecar)");
  akm_cmd->add_option("--matcher", akm.matcher, "ex or cos")->capture_default_str();
  add_common(akm_cmd, akm.common);

  EvalOpts ev;
  auto* eval_cmd = app.add_subcommand("eval", "AKM_ex, AKM_cos, aligned AKM_ex, METEOR and external caption scores");
  eval_cmd->add_option("--dataset", ev.dataset, "Dataset JSON")->required();
  eval_cmd->add_option("--pred", ev.pred, "Prediction JSONL")->required();
  eval_cmd->add_option("--features", ev.features, "Feature directory")->required();
  eval_cmd->add_option("--external", ev.external, "External-scores JSONL (e.g. BLEURT)");
  add_common(eval_cmd, ev.common);

  SelectOpts sel;
  auto* select_cmd = app.add_subcommand("select", "Choose N non-overlapping keyframe-caption candidates by DP");
  select_cmd->add_option("--candidates", sel.candidates, "Candidate JSONL")->required();
  select_cmd->add_option("--dataset", sel.dataset, "Dataset JSON supplying video durations");
  select_cmd->add_option("--duration", sel.duration, "Video duration in seconds for every video");
  select_cmd->add_option("--n", sel.cfg.n, "Pairs to select")->required()->check(CLI::PositiveNumber);
  select_cmd->add_option("--mode", sel.mode, "hard or soft")->capture_default_str();
  select_cmd->add_option("--max-segment-fraction", sel.cfg.max_segment_fraction, "Longest segment kept")
      ->capture_default_str();
  select_cmd->add_option("--overlap-penalty", sel.cfg.overlap_penalty_per_s, "Soft-mode penalty per overlapping second")
      ->capture_default_str();
  select_cmd->add_option("--segment-weight", sel.cfg.segment_weight, "Weight of segment_score")->capture_default_str();
  select_cmd->add_option("--caption-weight", sel.cfg.caption_weight, "Weight of caption_score")->capture_default_str();
  select_cmd->add_option("--report", sel.report, "Per-video objective report JSON");
  add_common(select_cmd, sel.common);

  BeamOpts bm;
  auto* beam_cmd = app.add_subcommand("beam", "Beam search over chronological (frame, caption) pairs");
  beam_cmd->add_option("--candidates", bm.candidates, "Candidate JSONL (segment fields optional)")->required();
  beam_cmd->add_option("--scorer", bm.scorer, "table:PATH or hash:SEED")->required();
  beam_cmd->add_option("--n", bm.cfg.n, "Pairs to select")->required()->check(CLI::PositiveNumber);
  beam_cmd->add_option("--width", bm.cfg.width, "Beam width")->capture_default_str()->check(CLI::PositiveNumber);
  beam_cmd->add_option("--alpha", bm.cfg.alpha, "Frame/caption balance")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  beam_cmd->add_option("--norm-pool", bm.norm_pool, "step_global or per_beam")->capture_default_str();
  beam_cmd->add_option("--report", bm.report, "Per-video score report JSON");
  add_common(beam_cmd, bm.common);

  FilterOpts fl;
  auto* filter_cmd = app.add_subcommand("filter", "Drop annotated keyframes far from their caption's centroid");
  filter_cmd->add_option("--dataset", fl.dataset, "Dataset JSON")->required();
  filter_cmd->add_option("--features", fl.features, "Feature directory")->required();
  filter_cmd->add_option("--k-sigma", fl.cfg.k_sigma, "Distance threshold in standard deviations")->capture_default_str();
  filter_cmd->add_option("--min-keep", fl.cfg.min_keep, "Minimum keyframes kept per caption")->capture_default_str();
  filter_cmd->add_option("--report", fl.report, "Variance report JSON");
  add_common(filter_cmd, fl.common);

  PseudoOpts ps;
  auto* pseudo_cmd = app.add_subcommand("pseudo-gen", "Generate pseudo video instances from image-caption pairs");
  pseudo_cmd->add_option("--source", ps.source, "Source collection JSONL")->required();
  pseudo_cmd->add_option("--out-dir", ps.out_dir, "Output directory")->required();
  pseudo_cmd->add_option("--count", ps.count, "Instances to generate")->required();
  pseudo_cmd->add_option("--n", ps.cfg.n, "Keyframes per instance")->capture_default_str();
  pseudo_cmd->add_option("--encoder-len", ps.cfg.encoder_len, "Frame slots per instance")->capture_default_str();
  pseudo_cmd->add_option("--beta", ps.cfg.beta, "Noise magnitude")->capture_default_str();
  pseudo_cmd->add_option("--seed", ps.cfg.seed, "Random seed")->capture_default_str();
  pseudo_cmd->add_option("--noise", ps.noise, "per_frame or per_element")->capture_default_str();
  pseudo_cmd->add_option("--sampling", ps.sampling, "random or story")->capture_default_str();
  pseudo_cmd->add_option("--manifest", ps.common.manifest, "Run manifest path (default: <out-dir>.manifest.json)");
  pseudo_cmd->add_option("--jobs,-j", ps.common.jobs, "Concurrent instance tasks")
      ->envname("VIDSUM_JOBS")
      ->check(CLI::PositiveNumber);

  StatsOpts st;
  auto* stats_cmd = app.add_subcommand("stats", "Dataset statistics");
  stats_cmd->add_option("--dataset", st.dataset, "Dataset JSON")->required();
  stats_cmd->add_option("--format", st.format, "stdout format: table or json")
      ->capture_default_str()
      ->check(CLI::IsMember({"table", "json"}));
  add_common(stats_cmd, st.common);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  try {
    if (akm_cmd->parsed()) {
      write_manifest(run_akm(akm, out, err), akm.common, akm.common.out, elapsed());
    } else if (eval_cmd->parsed()) {
      write_manifest(run_eval(ev, out, err), ev.common, ev.common.out, elapsed());
    } else if (select_cmd->parsed()) {
      write_manifest(run_select(sel, out, err), sel.common, sel.common.out, elapsed());
    } else if (beam_cmd->parsed()) {
      write_manifest(run_beam(bm, out, err), bm.common, bm.common.out, elapsed());
    } else if (filter_cmd->parsed()) {
      write_manifest(run_filter(fl, out, err), fl.common, fl.common.out, elapsed());
    } else if (pseudo_cmd->parsed()) {
      auto base = ps.out_dir;
      while (base.size() > 1 && base.back() == '/') base.pop_back();
      write_manifest(run_pseudo(ps, out, err), ps.common, base, elapsed());
    } else if (stats_cmd->parsed()) {
      write_manifest(run_stats(st, out, err), st.common, st.common.out, elapsed());
    }
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace vidsum::cli
