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

#ifndef V2G_TRAINER_H_
#define V2G_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "v2g/dataset_io.h"
#include "v2g/loss.h"
#include "v2g/ranknet.h"
#include "v2g/rng.h"

namespace v2g {

// Rng stream (under the root seed) that training pairs are drawn from.
inline constexpr std::uint64_t kPairStreamId = 1;

struct TrainConfig {
  LossKind loss;
  std::size_t batch_pairs = 50;
  double momentum = 0.9;
  double weight_decay = 0.001;
  double lr0 = 0.001;
  std::size_t lr_drop_every = 10;
  double lr_drop_factor = 0.1;
  std::size_t epochs = 25;
  std::size_t negatives_per_video = 4;
  std::size_t ensemble_size = 5;
  std::uint64_t seed = 0;
  bool video_agnostic = false;
  bool use_context = false;
  // Draw a fresh pair set every epoch instead of fixing one up front.
  bool resample_pairs = false;
  // Upper bound on concurrently trained ensemble members. Results do not
  // depend on it.
  std::size_t threads = 1;
  // Hidden sizes, dropout and biases; input_dim is filled in from the data.
  NetConfig net;
};

void ValidateTrainConfig(const TrainConfig& config);

// Positive and negative segment of one training pair. In video-specific mode
// pos_video == neg_video.
struct RankPair {
  std::size_t pos_video = 0;
  std::size_t pos_segment = 0;
  std::size_t neg_video = 0;
  std::size_t neg_segment = 0;
  double delta = kDefaultHuberDelta;

  friend bool operator==(const RankPair&, const RankPair&) = default;
};

struct PairSet {
  std::vector<RankPair> pairs;
};

// Labels stored on the record, or derived from its GIF spans when absent.
std::vector<Label> EffectiveLabels(const VideoRecord& video);

// Popularity of the most popular GIF covering more than 66% of the segment;
// falls back to any overlapping GIF, then 0.
double SegmentPopularity(const VideoRecord& video, std::size_t segment);

// Per video: all positives, min(k, #negatives) negatives drawn without
// replacement, combined exhaustively. Video-agnostic mode keeps the per-video
// pair count but draws the negatives uniformly from every video's negatives.
// delta = AdaptiveDelta(popularity, loss.delta) for the adaptive Huber loss,
// loss.delta otherwise. Throws kNoLabeledSegments if no pair can be formed.
PairSet SamplePairs(const Dataset& dataset, std::size_t k, const LossKind& loss,
                    Rng& rng, bool video_agnostic);

// One Nesterov momentum update, in place:
//   g' = grad + 2 * lambda * param          (lambda applies to weights only)
//   v  = momentum * v - lr * g'
//   p  = p + momentum * v - lr * g'
void NesterovStep(std::span<double> params, std::span<double> velocity,
                  std::span<const double> grad, double lr, double momentum,
                  double lambda);

// lr0 * factor^floor(epoch / drop_every).
double LearningRateAt(std::size_t epoch, const TrainConfig& config);

struct EpochLog {
  std::size_t member = 0;
  std::size_t epoch = 0;
  double lr = 0.0;
  double mean_loss = 0.0;
  std::size_t pair_count = 0;
};

struct TrainResult {
  Ensemble ensemble;
  std::vector<EpochLog> log;  // ordered by (member, epoch)
};

// Mini-batch SGD with Nesterov momentum on the objective
//   sum over pairs of loss(h(s+), h(s-)) + lambda * ||W||^2.
// Both segments of a pair go through the same network. Every member starts
// from its own initialization and shuffles the pairs each epoch with its own
// stream; the trained parameters are rounded to float32 at the end.
// Throws kDimMismatch for inconsistent feature widths and kNonFiniteLoss when
// a batch loss diverges.
TrainResult Train(const Dataset& dataset, const TrainConfig& config);

// JSON Lines: {member, epoch, lr, mean_loss, pair_count}.
std::string FormatEpochLog(const EpochLog& entry);
void WriteTrainLog(std::span<const EpochLog> log,
                   const std::filesystem::path& path);

}  // namespace v2g

#endif  // V2G_TRAINER_H_
