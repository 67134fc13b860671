/*
 * Copyright 2026 The v2g Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cli.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "v2g/align.h"
#include "v2g/dataset_io.h"
#include "v2g/error.h"
#include "v2g/eval.h"
#include "v2g/loss.h"
#include "v2g/phash.h"
#include "v2g/ranknet.h"
#include "v2g/shotseg.h"
#include "v2g/synth.h"
#include "v2g/trainer.h"

namespace v2g {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

// Bad flag values that the parser itself cannot catch.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index writes
// only its own slot, so results do not depend on the thread count.
template <typename Fn>
void ParallelFor(std::size_t n, std::size_t threads, Fn fn) {
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
}

LossKind ParseLossOrThrow(const std::string& token, double delta) {
  std::optional<LossKind> kind = ParseLossKind(token);
  if (!kind) {
    throw UsageError("unknown loss '" + token +
                     "' (expected cls, l1, l2, huber or huber-adaptive)");
  }
  kind->delta = delta;
  return *kind;
}

// "HASHES:TIMESTAMPS"; split on the last colon.
HashTrack ParseTrackArg(const std::string& arg) {
  const std::size_t colon = arg.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == arg.size()) {
    throw UsageError("expected HASHES:TIMESTAMPS, got '" + arg + "'");
  }
  return LoadHashTrack(arg.substr(0, colon), arg.substr(colon + 1));
}

Json SpansJson(std::span<const SegmentSpan> spans) {
  Json a = Json::array();
  for (const SegmentSpan& s : spans) a.push_back({s.start, s.end});
  return a;
}

// --- hash -----------------------------------------------------------------

struct HashArgs {
  std::string frames;
  std::string out;
};

void RunHash(const HashArgs& a, std::size_t threads, std::ostream& out,
             std::ostream& err) {
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(a.frames, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
      files.push_back(entry.path());
    }
  }
  if (ec) {
    throw Error(ErrorCode::kIoFailure, "cannot list " + a.frames + ": " + ec.message());
  }
  if (files.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no .pgm frames in " + a.frames);
  }
  std::sort(files.begin(), files.end(), [](const fs::path& x, const fs::path& y) {
    return x.filename().string() < y.filename().string();
  });
  std::vector<PHash64> hashes(files.size());
  ParallelFor(files.size(), threads,
              [&](std::size_t i) { hashes[i] = ComputePHash(ReadPgm(files[i])); });
  WriteHashDump(hashes, a.out);
  err << "hashed " << hashes.size() << " frames\n";
  out << Json{{"frames", hashes.size()}, {"out", a.out}}.dump(2) << "\n";
}

// --- align ----------------------------------------------------------------

struct AlignArgs {
  std::string gif;
  std::string video;
  int max_dist = kDefaultMaxBitDistance;
};

void RunAlign(const AlignArgs& a, std::ostream& out) {
  if (a.max_dist < 0 || a.max_dist > 64) {
    throw UsageError("--max-dist must lie in [0, 64]");
  }
  const Alignment r = AlignGif(ParseTrackArg(a.gif), ParseTrackArg(a.video), a.max_dist);
  Json j;
  j["video_start"] = r.video_start;
  j["video_end"] = r.video_end;
  j["mean_bit_distance"] = r.mean_bit_distance;
  j["matched_fraction"] = r.matched_fraction;
  out << j.dump(2) << "\n";
}

// --- segment --------------------------------------------------------------

struct SegmentArgs {
  std::string features;
  double frame_period = 1.0;
  std::optional<double> penalty;
  std::optional<std::size_t> min_len;
};

void RunSegment(const SegmentArgs& a, std::ostream& out) {
  if (!(a.frame_period > 0.0)) throw UsageError("--frame-period must be > 0");
  if (a.penalty && !(*a.penalty >= 0.0)) throw UsageError("--penalty must be >= 0");
  if (a.min_len && *a.min_len == 0) throw UsageError("--min-len must be >= 1");
  const FrameSequence seq =
      FrameSequence::FromFeatures(ReadFeatures(a.features), a.frame_period);
  const double penalty = a.penalty.value_or(DefaultPenalty(seq));
  const std::size_t min_len = a.min_len.value_or(DefaultMinLen(a.frame_period));
  const SegmentationResult r = SegmentSequence(seq, penalty, min_len);
  Json j;
  j["boundaries"] = r.boundaries;
  j["spans"] = SpansJson(r.spans);
  j["cost"] = r.cost;
  j["penalty"] = penalty;
  j["min_len"] = min_len;
  out << j.dump(2) << "\n";
}

// --- label ----------------------------------------------------------------

struct LabelArgs {
  std::string meta;
  std::string alignments;
  double threshold = kDefaultOverlapThreshold;
  std::string out;
};

// Alignments file: JSON Lines with video_id, video_start, video_end and
// optional creator_id plus either popularity in [0, 1] or raw views
// (normalized over the file).
void RunLabel(const LabelArgs& a, std::ostream& out, std::ostream& err) {
  if (!(a.threshold >= 0.0 && a.threshold < 1.0)) {
    throw UsageError("--threshold must lie in [0, 1)");
  }
  std::vector<VideoRecord> videos = ReadVideoRecords(a.meta);
  std::map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < videos.size(); ++i) by_id[videos[i].id] = i;

  std::ifstream in(a.alignments);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + a.alignments);
  struct Pending {
    std::size_t video;
    GifSpan gif;
    std::optional<double> views;
  };
  std::vector<Pending> pending;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = a.alignments + ":" + std::to_string(line_no);
    Json j;
    try {
      j = Json::parse(line);
      const std::string id = j.at("video_id").get<std::string>();
      const auto it = by_id.find(id);
      if (it == by_id.end()) {
        throw Error(ErrorCode::kFormatError, where + ": unknown video '" + id + "'");
      }
      Pending p{it->second, {}, std::nullopt};
      p.gif.start = j.at("video_start").get<double>();
      p.gif.end = j.at("video_end").get<double>();
      p.gif.creator_id = j.value("creator_id", std::string());
      if (j.contains("views")) p.views = j.at("views").get<double>();
      p.gif.popularity = j.value("popularity", 0.0);
      pending.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kFormatError, where + ": " + e.what());
    }
  }
  std::vector<double> views;
  for (const Pending& p : pending) {
    if (p.views) views.push_back(*p.views);
  }
  const std::vector<double> normalized = NormalizeViewcounts(views);
  std::size_t vi = 0;
  for (Pending& p : pending) {
    if (p.views) p.gif.popularity = normalized[vi++];
    VideoRecord& v = videos[p.video];
    // Alignments may spill past the end of the video by a frame.
    p.gif.start = std::clamp(p.gif.start, 0.0, v.duration);
    p.gif.end = std::clamp(p.gif.end, 0.0, v.duration);
    v.gifs.push_back(p.gif);
  }
  std::size_t counts[3] = {0, 0, 0};
  std::ostringstream body;
  for (VideoRecord& v : videos) {
    v.labels = LabelSegments(v, a.threshold);
    ValidateVideoRecord(v);
    for (Label l : v.labels) ++counts[static_cast<int>(l)];
    body << SerializeVideoRecord(v) << "\n";
  }
  err << "labeled " << videos.size() << " videos: " << counts[0] << " pos, "
      << counts[1] << " neg, " << counts[2] << " ignored\n";
  if (a.out.empty()) {
    out << body.str();
  } else {
    WriteText(a.out, body.str());
    out << Json{{"videos", videos.size()},
                {"positive", counts[0]},
                {"negative", counts[1]},
                {"ignored", counts[2]}}
               .dump(2)
        << "\n";
  }
}

// --- pairs ----------------------------------------------------------------

struct PairsArgs {
  std::string data;
  std::size_t k = 4;
  std::uint64_t seed = 0;
  bool video_agnostic = false;
  std::string loss = "huber-adaptive";
  double delta = kDefaultHuberDelta;
};

void RunPairs(const PairsArgs& a, std::ostream& out) {
  const LossKind loss = ParseLossOrThrow(a.loss, a.delta);
  if (a.k == 0) throw UsageError("--k must be >= 1");
  const Dataset dataset = LoadDataset(a.data);
  Rng rng = Rng(a.seed).Split(kPairStreamId);
  const PairSet set = SamplePairs(dataset, a.k, loss, rng, a.video_agnostic);
  Json pairs = Json::array();
  for (const RankPair& p : set.pairs) {
    pairs.push_back({{"pos_video", dataset[p.pos_video].record.id},
                     {"pos_segment", p.pos_segment},
                     {"neg_video", dataset[p.neg_video].record.id},
                     {"neg_segment", p.neg_segment},
                     {"delta", p.delta}});
  }
  Json j;
  j["count"] = set.pairs.size();
  j["pairs"] = std::move(pairs);
  out << j.dump(2) << "\n";
}

// --- train ----------------------------------------------------------------

struct TrainArgs {
  std::string data;
  std::string out;
  std::string loss = "huber-adaptive";
  double delta = kDefaultHuberDelta;
  std::size_t epochs = 25;
  std::size_t batch = 50;
  double lr = 0.001;
  double momentum = 0.9;
  double wd = 0.001;
  std::size_t ensemble = 5;
  std::size_t k = 4;
  std::uint64_t seed = 0;
  bool context = false;
  bool video_agnostic = false;
  bool resample_pairs = false;
  bool no_hidden_bias = false;
  std::string log;
};

void RunTrain(const TrainArgs& a, std::size_t threads, std::ostream& out,
              std::ostream& err) {
  TrainConfig config;
  config.loss = ParseLossOrThrow(a.loss, a.delta);
  config.epochs = a.epochs;
  config.batch_pairs = a.batch;
  config.lr0 = a.lr;
  config.momentum = a.momentum;
  config.weight_decay = a.wd;
  config.ensemble_size = a.ensemble;
  config.negatives_per_video = a.k;
  config.seed = a.seed;
  config.use_context = a.context;
  config.video_agnostic = a.video_agnostic;
  config.resample_pairs = a.resample_pairs;
  config.net.include_biases = !a.no_hidden_bias;
  config.threads = threads;
  try {
    ValidateTrainConfig(config);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const Dataset dataset = LoadDataset(a.data);
  err << "training " << a.ensemble << " member(s) on " << dataset.size()
      << " videos, loss " << a.loss << "\n";
  const TrainResult result = Train(dataset, config);
  for (const EpochLog& e : result.log) err << FormatEpochLog(e) << "\n";
  SaveEnsemble(result.ensemble, a.out);
  if (!a.log.empty()) WriteTrainLog(result.log, a.log);

  Json j;
  j["model"] = a.out;
  j["members"] = result.ensemble.models.size();
  j["input_dim"] = result.ensemble.models.front().config().input_dim;
  j["param_count"] = ParamCount(result.ensemble.models.front().config());
  j["pair_count"] = result.log.empty() ? 0 : result.log.back().pair_count;
  Json final_loss = Json::array();
  for (const EpochLog& e : result.log) {
    if (e.epoch + 1 == a.epochs) final_loss.push_back(e.mean_loss);
  }
  j["final_mean_loss"] = std::move(final_loss);
  out << j.dump(2) << "\n";
}

// --- score ----------------------------------------------------------------

struct ScoreArgs {
  std::string model;
  std::string features;
  std::string meta;
  std::string video;
};

void RunScore(const ScoreArgs& a, std::ostream& out) {
  const Ensemble ensemble = LoadEnsemble(a.model);
  FeatureMatrix features = ReadFeatures(a.features);
  std::vector<double> scores;
  if (!a.meta.empty()) {
    const std::vector<VideoRecord> records = ReadVideoRecords(a.meta);
    std::optional<VideoRecord> record;
    for (const VideoRecord& r : records) {
      if (r.id == a.video || (a.video.empty() && records.size() == 1)) record = r;
    }
    if (!record) {
      throw UsageError(a.video.empty() ? "--video is required when --meta has "
                                         "several videos"
                                       : "video '" + a.video + "' not in " + a.meta);
    }
    scores = ScoreSegments(ensemble, LabeledVideo{*record, std::move(features)});
  } else {
    if (ensemble.use_context) {
      throw UsageError("model uses context features; pass --meta (and --video)");
    }
    VideoRecord bare;
    const std::size_t n = features.num_segments();
    for (std::size_t i = 0; i < n; ++i) {
      bare.segments.push_back({static_cast<double>(i), static_cast<double>(i + 1)});
    }
    bare.duration = static_cast<double>(n);
    scores = ScoreSegments(ensemble, LabeledVideo{bare, std::move(features)});
  }
  Json j;
  j["scores"] = scores;
  out << j.dump(2) << "\n";
}

// --- eval -----------------------------------------------------------------

struct EvalArgs {
  std::string model;
  std::string data;
  double alpha = kDefaultRecallAlpha;
  std::string csv;
  bool upper_bound = false;
};

void RunEval(const EvalArgs& a, std::size_t threads, std::ostream& out,
             std::ostream& err) {
  if (!(a.alpha > 0.0 && a.alpha <= 1.0)) throw UsageError("--alpha must lie in (0, 1]");
  MetricReport report;
  if (a.upper_bound) {
    std::vector<VideoRecord> records = ReadVideoRecords(MetaPath(a.data));
    const std::vector<VideoRecord> multi = SelectMultiCreatorVideos(records);
    err << multi.size() << " of " << records.size()
        << " videos have GIFs from several creators\n";
    if (multi.empty()) {
      throw Error(ErrorCode::kInsufficientCreators,
                  "no video has GIFs from two or more creators");
    }
    report = UpperBound(multi, a.alpha);
  } else {
    if (a.model.empty()) throw UsageError("--model is required unless --upper-bound");
    const Ensemble ensemble = LoadEnsemble(a.model);
    const Dataset dataset = LoadDataset(a.data);
    std::vector<RankedVideo> ranked(dataset.size());
    ParallelFor(dataset.size(), threads, [&](std::size_t i) {
      ranked[i] = {dataset[i].record, ScoreSegments(ensemble, dataset[i])};
    });
    report = Evaluate(ranked, a.alpha);
  }
  if (report.warnings > 0) {
    err << report.warnings << " per-video metric(s) skipped\n";
  }
  if (!a.csv.empty()) WriteText(a.csv, ReportToCsv(report));
  out << ReportToJson(report);
}

// --- synth ----------------------------------------------------------------

struct SynthArgs {
  SynthOptions options;
  std::string out;
};

void RunSynth(const SynthArgs& a, std::ostream& out, std::ostream& err) {
  const SynthOptions& o = a.options;
  if (o.num_videos == 0 || o.segs_per_video == 0 || o.dim == 0) {
    throw UsageError("--videos, --segs and --dim must be >= 1");
  }
  if (!(o.noise_level >= 0.0)) throw UsageError("--noise must be >= 0");
  if (!(o.outlier_fraction >= 0.0 && o.outlier_fraction < 1.0)) {
    throw UsageError("--outliers must lie in [0, 1)");
  }
  const SynthDataset synth = SynthesizeDataset(o);
  SaveDataset(synth.ToDataset(), a.out);
  Json info;
  info["videos"] = o.num_videos;
  info["segs"] = o.segs_per_video;
  info["dim"] = o.dim;
  info["noise"] = o.noise_level;
  info["outliers"] = o.outlier_fraction;
  info["seed"] = o.seed;
  info["num_permuted"] = synth.num_permuted;
  Json permuted = Json::array();
  for (const SynthVideo& v : synth.videos) {
    if (v.permuted) permuted.push_back(v.video.record.id);
  }
  info["permuted"] = std::move(permuted);
  WriteText(fs::path(a.out) / "synth.json", info.dump(2) + "\n");
  err << "wrote " << o.num_videos << " videos (" << synth.num_permuted
      << " permuted) to " << a.out << "\n";
  out << info.dump(2) << "\n";
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Segment ranking toolkit for GIF suitability"};
  app.name("v2g");
  app.require_subcommand(1);
  app.fallthrough();
  std::size_t threads = 1;
  app.add_option("--threads", threads, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  HashArgs hash;
  CLI::App* hash_cmd = app.add_subcommand("hash", "Perceptual hashes of PGM frames");
  hash_cmd->add_option("--frames", hash.frames, "Directory of .pgm frames")->required();
  hash_cmd->add_option("--out", hash.out, "Hash dump to write")->required();

  AlignArgs align;
  CLI::App* align_cmd = app.add_subcommand("align", "Locate a GIF in its video");
  align_cmd->add_option("--gif", align.gif, "GIF HASHES:TIMESTAMPS")->required();
  align_cmd->add_option("--video", align.video, "Video HASHES:TIMESTAMPS")->required();
  align_cmd->add_option("--max-dist", align.max_dist, "Max Hamming distance")
      ->capture_default_str();

  SegmentArgs segment;
  CLI::App* segment_cmd = app.add_subcommand("segment", "Shot segmentation");
  segment_cmd->add_option("--features", segment.features, "Per-frame V2GF file")
      ->required();
  segment_cmd->add_option("--frame-period", segment.frame_period, "Seconds per frame")
      ->capture_default_str();
  segment_cmd->add_option("--penalty", segment.penalty,
                          "Per-boundary penalty (default: median squared jump)");
  segment_cmd->add_option("--min-len", segment.min_len,
                          "Minimum frames per segment (default: one second)");

  LabelArgs label;
  CLI::App* label_cmd = app.add_subcommand("label", "Attach GIFs and label segments");
  label_cmd->add_option("--meta", label.meta, "Video metadata JSONL")->required();
  label_cmd->add_option("--alignments", label.alignments, "Alignments JSONL")
      ->required();
  label_cmd->add_option("--threshold", label.threshold, "Positive overlap fraction")
      ->capture_default_str();
  label_cmd->add_option("--out", label.out, "Write labeled JSONL here, not stdout");

  PairsArgs pairs;
  CLI::App* pairs_cmd = app.add_subcommand("pairs", "Sample training pairs");
  pairs_cmd->add_option("--data", pairs.data, "Dataset directory")->required();
  pairs_cmd->add_option("--k", pairs.k, "Negatives per video")->capture_default_str();
  pairs_cmd->add_option("--seed", pairs.seed, "Seed")->capture_default_str();
  pairs_cmd->add_flag("--video-agnostic", pairs.video_agnostic,
                      "Draw negatives from every video");
  pairs_cmd->add_option("--loss", pairs.loss, "Loss (sets per-pair delta)")
      ->capture_default_str();
  pairs_cmd->add_option("--delta", pairs.delta, "Huber delta / delta0")
      ->capture_default_str();

  TrainArgs train;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a scoring ensemble");
  train_cmd->add_option("--data", train.data, "Dataset directory")->required();
  train_cmd->add_option("--out", train.out, "Model directory")->required();
  train_cmd->add_option("--loss", train.loss, "cls, l1, l2, huber, huber-adaptive")
      ->capture_default_str();
  train_cmd->add_option("--delta", train.delta, "Huber delta / delta0")
      ->capture_default_str();
  train_cmd->add_option("--epochs", train.epochs, "Epochs")->capture_default_str();
  train_cmd->add_option("--batch", train.batch, "Pairs per batch")->capture_default_str();
  train_cmd->add_option("--lr", train.lr, "Initial learning rate")->capture_default_str();
  train_cmd->add_option("--momentum", train.momentum, "Nesterov momentum")
      ->capture_default_str();
  train_cmd->add_option("--wd", train.wd, "Weight decay")->capture_default_str();
  train_cmd->add_option("--ensemble", train.ensemble, "Ensemble size")
      ->capture_default_str();
  train_cmd->add_option("--k", train.k, "Negatives per video")->capture_default_str();
  train_cmd->add_option("--seed", train.seed, "Seed")->capture_default_str();
  train_cmd->add_flag("--context", train.context, "Append context features");
  train_cmd->add_flag("--video-agnostic", train.video_agnostic,
                      "Draw negatives from every video");
  train_cmd->add_flag("--resample-pairs", train.resample_pairs,
                      "Fresh pairs every epoch");
  train_cmd->add_flag("--no-hidden-bias", train.no_hidden_bias,
                      "Hidden layers without biases");
  train_cmd->add_option("--log", train.log, "Training log JSONL");

  ScoreArgs score;
  CLI::App* score_cmd = app.add_subcommand("score", "Score segments");
  score_cmd->add_option("--model", score.model, "Model directory")->required();
  score_cmd->add_option("--features", score.features, "V2GF file")->required();
  score_cmd->add_option("--meta", score.meta, "Metadata JSONL (for context)");
  score_cmd->add_option("--video", score.video, "Video id inside --meta");

  EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "nMSD and mAP");
  eval_cmd->add_option("--model", eval.model, "Model directory");
  eval_cmd->add_option("--data", eval.data, "Dataset directory")->required();
  eval_cmd->add_option("--alpha", eval.alpha, "Recall level")->capture_default_str();
  eval_cmd->add_option("--csv", eval.csv, "Also write per-video CSV");
  eval_cmd->add_flag("--upper-bound", eval.upper_bound,
                     "Score each GIF against the other creators' GIFs");

  SynthArgs synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth_cmd->add_option("--videos", synth.options.num_videos, "Videos")
      ->capture_default_str();
  synth_cmd->add_option("--segs", synth.options.segs_per_video, "Segments per video")
      ->capture_default_str();
  synth_cmd->add_option("--dim", synth.options.dim, "Feature dimension")
      ->capture_default_str();
  synth_cmd->add_option("--noise", synth.options.noise_level, "Label noise")
      ->capture_default_str();
  synth_cmd->add_option("--outliers", synth.options.outlier_fraction,
                        "Fraction of permuted videos")
      ->capture_default_str();
  synth_cmd->add_option("--positives", synth.options.positives_per_video,
                        "Positives per video (0: segs / 10)")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.options.seed, "Seed")->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "v2g: " << e.what() << "\n" << "run 'v2g --help' for usage\n";
    return 1;
  }

  try {
    if (*hash_cmd) RunHash(hash, threads, out, err);
    if (*align_cmd) RunAlign(align, out);
    if (*segment_cmd) RunSegment(segment, out);
    if (*label_cmd) RunLabel(label, out, err);
    if (*pairs_cmd) RunPairs(pairs, out);
    if (*train_cmd) RunTrain(train, threads, out, err);
    if (*score_cmd) RunScore(score, out);
    if (*eval_cmd) RunEval(eval, threads, out, err);
    if (*synth_cmd) RunSynth(synth, out, err);
  } catch (const UsageError& e) {
    err << "v2g: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "v2g: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "v2g: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace v2g
