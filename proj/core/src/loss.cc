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

#include "v2g/loss.h"

#include <algorithm>
#include <cmath>

#include "v2g/error.h"

namespace v2g {

std::optional<LossKind> ParseLossKind(std::string_view token) {
  if (token == "cls") return LossKind{LossType::kClassification};
  if (token == "l1") return LossKind{LossType::kRankL1};
  if (token == "l2") return LossKind{LossType::kRankL2};
  if (token == "huber") return LossKind{LossType::kRankHuberFixed};
  if (token == "huber-adaptive") return LossKind{LossType::kRankHuberAdaptive};
  return std::nullopt;
}

std::string_view LossToken(LossType type) {
  switch (type) {
    case LossType::kClassification: return "cls";
    case LossType::kRankL1: return "l1";
    case LossType::kRankL2: return "l2";
    case LossType::kRankHuberFixed: return "huber";
    case LossType::kRankHuberAdaptive: return "huber-adaptive";
  }
  return "?";
}

PairLoss LpRankLoss(const PairScores& ps, int p) {
  const double u = MarginViolation(ps);
  if (u <= 0.0) return {};
  if (p == 1) return {u, -1.0, 1.0};
  if (p == 2) return {u * u, -2.0 * u, 2.0 * u};
  throw Error(ErrorCode::kInvalidArgument, "l_p loss needs p in {1, 2}");
}

PairLoss HuberRankLoss(const PairScores& ps) {
  if (!(ps.delta > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "huber delta must be > 0");
  }
  const double u = MarginViolation(ps);
  if (u <= 0.0) return {};
  if (u <= ps.delta) return {0.5 * u * u, -u, u};
  return {ps.delta * u - 0.5 * ps.delta * ps.delta, -ps.delta, ps.delta};
}

double AdaptiveDelta(double popularity, double delta0) {
  if (!(popularity >= 0.0 && popularity <= 1.0)) {
    throw Error(ErrorCode::kPopularityOutOfRange,
                "popularity " + std::to_string(popularity) + " outside [0, 1]");
  }
  return delta0 + popularity;
}

PointLoss ClassificationLoss(double score, int label) {
  if (label != 1 && label != -1) {
    throw Error(ErrorCode::kInvalidArgument, "label must be +1 or -1");
  }
  const double m = label * score;
  // softplus(-m) = max(-m, 0) + log1p(exp(-|m|)); sigmoid(-m) likewise stable.
  const double value = std::max(-m, 0.0) + std::log1p(std::exp(-std::abs(m)));
  const double sigmoid_neg =
      m >= 0.0 ? std::exp(-m) / (1.0 + std::exp(-m)) : 1.0 / (1.0 + std::exp(m));
  return {value, -label * sigmoid_neg};
}

PairLoss RankLoss(const LossKind& kind, const PairScores& ps) {
  switch (kind.type) {
    case LossType::kRankL1: return LpRankLoss(ps, 1);
    case LossType::kRankL2: return LpRankLoss(ps, 2);
    case LossType::kRankHuberFixed:
    case LossType::kRankHuberAdaptive: return HuberRankLoss(ps);
    case LossType::kClassification: break;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "classification is not a pairwise rank loss");
}

double Objective(std::span<const double> pair_losses,
                 std::span<const double> weights, double lambda) {
  if (!(lambda >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must be >= 0");
  }
  double total = 0.0;
  for (double l : pair_losses) total += l;
  double sq = 0.0;
  for (double w : weights) sq += w * w;
  return total + lambda * sq;
}

std::vector<double> NormalizeViewcounts(std::span<const double> views) {
  double max_views = 0.0;
  for (double v : views) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, "viewcounts must be finite and >= 0");
    }
    max_views = std::max(max_views, v);
  }
  std::vector<double> out(views.size(), 0.0);
  if (max_views <= 0.0) return out;
  const double denom = std::log1p(max_views);
  for (std::size_t i = 0; i < views.size(); ++i) {
    out[i] = std::clamp(std::log1p(views[i]) / denom, 0.0, 1.0);
  }
  return out;
}

}  // namespace v2g
