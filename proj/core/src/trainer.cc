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

#include "v2g/trainer.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <numeric>
#include <optional>
#include <thread>

#include "json.hpp"
#include "v2g/align.h"
#include "v2g/error.h"

namespace v2g {
namespace {

// Stream ids under the root seed.
constexpr std::uint64_t kPairStream = kPairStreamId;
constexpr std::uint64_t kMemberStreamBase = 100;

// Draws min(m, pool) distinct indices of [0, pool) (partial Fisher-Yates).
std::vector<std::size_t> DrawWithoutReplacement(std::size_t pool, std::size_t m,
                                                Rng& rng) {
  std::vector<std::size_t> idx(pool);
  std::iota(idx.begin(), idx.end(), 0);
  m = std::min(m, pool);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.UniformInt(pool - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(m);
  return idx;
}

struct MemberResult {
  RankNetModel model;
  std::vector<EpochLog> log;
};

void ApplyStep(RankNetModel& model, std::vector<DenseLayer>& velocity,
               const ModelGradients& grads, double lr, const TrainConfig& config) {
  std::vector<DenseLayer>& layers = model.mutable_layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    DenseLayer& p = layers[l];
    DenseLayer& v = velocity[l];
    const DenseLayer& g = grads.layers[l];
    NesterovStep({p.weight.data(), static_cast<std::size_t>(p.weight.size())},
                 {v.weight.data(), static_cast<std::size_t>(v.weight.size())},
                 {g.weight.data(), static_cast<std::size_t>(g.weight.size())},
                 lr, config.momentum, config.weight_decay);
    if (p.bias.size() > 0) {
      NesterovStep({p.bias.data(), static_cast<std::size_t>(p.bias.size())},
                   {v.bias.data(), static_cast<std::size_t>(v.bias.size())},
                   {g.bias.data(), static_cast<std::size_t>(g.bias.size())},
                   lr, config.momentum, 0.0);
    }
  }
}

MemberResult TrainMember(const Dataset& dataset,
                         const std::vector<Eigen::MatrixXd>& inputs,
                         const PairSet& fixed_pairs, const TrainConfig& config,
                         const NetConfig& net, std::size_t member) {
  const Rng root(config.seed);
  const Rng member_rng = root.Split(kMemberStreamBase + member);
  Rng init_rng = member_rng.Split(0);
  Rng shuffle_rng = member_rng.Split(1);
  Rng dropout_rng = member_rng.Split(2);

  MemberResult result{InitModel(net, init_rng), {}};
  RankNetModel& model = result.model;
  std::vector<DenseLayer> velocity;
  for (const DenseLayer& layer : model.layers()) {
    velocity.push_back({Eigen::MatrixXd::Zero(layer.weight.rows(), layer.weight.cols()),
                        Eigen::VectorXd::Zero(layer.bias.size())});
  }

  const auto dim = static_cast<Eigen::Index>(net.input_dim);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    PairSet resampled;
    if (config.resample_pairs) {
      Rng pair_rng = root.Split(kPairStream).Split(epoch + 1);
      resampled = SamplePairs(dataset, config.negatives_per_video, config.loss,
                              pair_rng, config.video_agnostic);
    }
    const std::vector<RankPair>& pairs =
        config.resample_pairs ? resampled.pairs : fixed_pairs.pairs;
    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), 0);
    shuffle_rng.Shuffle(std::span<std::size_t>(order));

    const double lr = LearningRateAt(epoch, config);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_pairs) {
      const std::size_t b = std::min(config.batch_pairs, order.size() - start);
      Eigen::MatrixXd batch(dim, static_cast<Eigen::Index>(2 * b));
      for (std::size_t i = 0; i < b; ++i) {
        const RankPair& p = pairs[order[start + i]];
        batch.col(static_cast<Eigen::Index>(i)) =
            inputs[p.pos_video].col(static_cast<Eigen::Index>(p.pos_segment));
        batch.col(static_cast<Eigen::Index>(b + i)) =
            inputs[p.neg_video].col(static_cast<Eigen::Index>(p.neg_segment));
      }
      const BatchForward fwd =
          ForwardBatch(model, batch, ForwardMode::kTrain, &dropout_rng);

      Eigen::VectorXd d_scores(static_cast<Eigen::Index>(2 * b));
      double batch_loss = 0.0;
      for (std::size_t i = 0; i < b; ++i) {
        const auto pi = static_cast<Eigen::Index>(i);
        const auto ni = static_cast<Eigen::Index>(b + i);
        const double h_pos = fwd.scores(pi);
        const double h_neg = fwd.scores(ni);
        if (config.loss.is_rank()) {
          const PairLoss l = RankLoss(
              config.loss, {h_pos, h_neg, pairs[order[start + i]].delta});
          batch_loss += l.value;
          d_scores(pi) = l.d_pos;
          d_scores(ni) = l.d_neg;
        } else {
          const PointLoss lp = ClassificationLoss(h_pos, +1);
          const PointLoss ln = ClassificationLoss(h_neg, -1);
          batch_loss += lp.value + ln.value;
          d_scores(pi) = lp.d_score;
          d_scores(ni) = ln.d_score;
        }
      }
      if (!std::isfinite(batch_loss)) {
        throw Error(ErrorCode::kNonFiniteLoss,
                    "member " + std::to_string(member) + " epoch " +
                        std::to_string(epoch) + ": batch loss is not finite");
      }
      epoch_loss += batch_loss;
      const ModelGradients grads = Backward(model, fwd.cache, d_scores);
      ApplyStep(model, velocity, grads, lr, config);
    }
    for (const DenseLayer& layer : model.layers()) {
      if (!layer.weight.allFinite() || !layer.bias.allFinite()) {
        throw Error(ErrorCode::kNonFiniteLoss,
                    "member " + std::to_string(member) + " diverged");
      }
    }
    result.log.push_back({member, epoch, lr,
                          pairs.empty() ? 0.0 : epoch_loss / pairs.size(),
                          pairs.size()});
  }
  model.RoundToFloat();
  return result;
}

}  // namespace

void ValidateTrainConfig(const TrainConfig& config) {
  if (!(config.momentum >= 0.0 && config.momentum < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "momentum must lie in [0, 1)");
  }
  if (!(config.lr0 >= 0.0) || !std::isfinite(config.lr0)) {
    throw Error(ErrorCode::kInvalidArgument, "lr0 must be finite and >= 0");
  }
  if (!(config.weight_decay >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "weight decay must be >= 0");
  }
  if (config.negatives_per_video == 0 || config.epochs == 0 ||
      config.batch_pairs == 0 || config.ensemble_size == 0 ||
      config.lr_drop_every == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "k, epochs, batch size, ensemble size and drop period must be >= 1");
  }
  if (!(config.lr_drop_factor > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "lr drop factor must be > 0");
  }
  if (!(config.loss.delta > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "huber delta must be > 0");
  }
}

std::vector<Label> EffectiveLabels(const VideoRecord& video) {
  if (!video.labels.empty()) return video.labels;
  return LabelSegments(video);
}

double SegmentPopularity(const VideoRecord& video, std::size_t segment) {
  const SegmentSpan& s = video.segments.at(segment);
  double covering = -1.0;
  double touching = -1.0;
  for (const GifSpan& g : video.gifs) {
    const double overlap = OverlapLength(s, g.span());
    if (overlap <= 0.0) continue;
    touching = std::max(touching, g.popularity);
    if (overlap / s.length() > kDefaultOverlapThreshold) {
      covering = std::max(covering, g.popularity);
    }
  }
  if (covering >= 0.0) return covering;
  if (touching >= 0.0) return touching;
  return 0.0;
}

PairSet SamplePairs(const Dataset& dataset, std::size_t k, const LossKind& loss,
                    Rng& rng, bool video_agnostic) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  struct SegmentRef {
    std::size_t video;
    std::size_t segment;
  };
  std::vector<std::vector<std::size_t>> positives(dataset.size());
  std::vector<std::vector<std::size_t>> negatives(dataset.size());
  std::vector<SegmentRef> negative_pool;
  for (std::size_t v = 0; v < dataset.size(); ++v) {
    const std::vector<Label> labels = EffectiveLabels(dataset[v].record);
    for (std::size_t s = 0; s < labels.size(); ++s) {
      if (labels[s] == Label::kPositive) positives[v].push_back(s);
      if (labels[s] == Label::kNegative) {
        negatives[v].push_back(s);
        negative_pool.push_back({v, s});
      }
    }
  }

  PairSet out;
  for (std::size_t v = 0; v < dataset.size(); ++v) {
    if (positives[v].empty() || negatives[v].empty()) continue;
    std::vector<SegmentRef> drawn;
    if (video_agnostic) {
      for (std::size_t i :
           DrawWithoutReplacement(negative_pool.size(), k, rng)) {
        drawn.push_back(negative_pool[i]);
        if (drawn.size() == std::min(k, negatives[v].size())) break;
      }
    } else {
      for (std::size_t i : DrawWithoutReplacement(negatives[v].size(), k, rng)) {
        drawn.push_back({v, negatives[v][i]});
      }
    }
    for (std::size_t pos : positives[v]) {
      const double delta =
          loss.type == LossType::kRankHuberAdaptive
              ? AdaptiveDelta(SegmentPopularity(dataset[v].record, pos), loss.delta)
              : loss.delta;
      for (const SegmentRef& neg : drawn) {
        out.pairs.push_back({v, pos, neg.video, neg.segment, delta});
      }
    }
  }
  if (out.pairs.empty()) {
    throw Error(ErrorCode::kNoLabeledSegments,
                "no video has both a positive and a negative segment");
  }
  return out;
}

void NesterovStep(std::span<double> params, std::span<double> velocity,
                  std::span<const double> grad, double lr, double momentum,
                  double lambda) {
  if (params.size() != velocity.size() || params.size() != grad.size()) {
    throw Error(ErrorCode::kDimMismatch, "nesterov step shape mismatch");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grad[i] + 2.0 * lambda * params[i];
    velocity[i] = momentum * velocity[i] - lr * g;
    params[i] += momentum * velocity[i] - lr * g;
  }
}

double LearningRateAt(std::size_t epoch, const TrainConfig& config) {
  const auto drops = static_cast<double>(epoch / config.lr_drop_every);
  return config.lr0 * std::pow(config.lr_drop_factor, drops);
}

TrainResult Train(const Dataset& dataset, const TrainConfig& config) {
  ValidateTrainConfig(config);
  if (dataset.empty()) {
    throw Error(ErrorCode::kNoLabeledSegments, "dataset is empty");
  }
  std::vector<Eigen::MatrixXd> inputs;
  inputs.reserve(dataset.size());
  for (const LabeledVideo& video : dataset) {
    inputs.push_back(BuildInputs(video, config.use_context));
    if (inputs.back().rows() != inputs.front().rows()) {
      throw Error(ErrorCode::kDimMismatch,
                  "video '" + video.record.id + "' has input width " +
                      std::to_string(inputs.back().rows()) + ", expected " +
                      std::to_string(inputs.front().rows()));
    }
  }
  NetConfig net = config.net;
  net.input_dim = static_cast<std::size_t>(inputs.front().rows());
  ValidateNetConfig(net);

  Rng pair_rng = Rng(config.seed).Split(kPairStream);
  PairSet pairs;
  if (!config.resample_pairs) {
    pairs = SamplePairs(dataset, config.negatives_per_video, config.loss,
                        pair_rng, config.video_agnostic);
  }

  const std::size_t members = config.ensemble_size;
  std::vector<std::optional<MemberResult>> results(members);
  std::vector<std::exception_ptr> errors(members);
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (std::size_t m = next++; m < members; m = next++) {
      try {
        results[m] = TrainMember(dataset, inputs, pairs, config, net, m);
      } catch (...) {
        errors[m] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(config.threads, 1, members);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  TrainResult out;
  out.ensemble.use_context = config.use_context;
  for (auto& r : results) {
    out.ensemble.models.push_back(std::move(r->model));
    out.log.insert(out.log.end(), r->log.begin(), r->log.end());
  }
  return out;
}

std::string FormatEpochLog(const EpochLog& entry) {
  const nlohmann::json j = {{"member", entry.member},
                            {"epoch", entry.epoch},
                            {"lr", entry.lr},
                            {"mean_loss", entry.mean_loss},
                            {"pair_count", entry.pair_count}};
  return j.dump();
}

void WriteTrainLog(std::span<const EpochLog> log,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  for (const EpochLog& e : log) out << FormatEpochLog(e) << '\n';
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed: " + path.string());
}

}  // namespace v2g
