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

// Training losses over segment scores.
//
// Rank losses act on a pair (h_pos, h_neg) through the margin violation
// u = 1 - h_pos + h_neg:
//   l_p         = max(0, u)^p                          p in {1, 2}
//   Huber rank  = 0           if u <= 0
//                 u^2 / 2     if 0 < u <= delta
//                 delta*u - delta^2 / 2   otherwise
// The Huber gradient is bounded by delta, so a badly mis-ranked pair (an
// outlier label) pulls no harder than one just past the transition point.
// With the adaptive variant, delta = delta0 + popularity of the GIF that made
// the positive, giving popular GIFs a longer quadratic regime.

#ifndef V2G_LOSS_H_
#define V2G_LOSS_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace v2g {

inline constexpr double kDefaultHuberDelta = 1.5;

enum class LossType {
  kClassification,
  kRankL1,
  kRankL2,
  kRankHuberFixed,
  kRankHuberAdaptive,
};

struct LossKind {
  LossType type = LossType::kRankHuberAdaptive;
  // delta for kRankHuberFixed, delta0 for kRankHuberAdaptive.
  double delta = kDefaultHuberDelta;

  bool is_rank() const { return type != LossType::kClassification; }
  friend bool operator==(const LossKind&, const LossKind&) = default;
};

// CLI tokens: cls, l1, l2, huber, huber-adaptive.
std::optional<LossKind> ParseLossKind(std::string_view token);
std::string_view LossToken(LossType type);

struct PairScores {
  double h_pos = 0.0;
  double h_neg = 0.0;
  double delta = kDefaultHuberDelta;
};

struct PairLoss {
  double value = 0.0;
  double d_pos = 0.0;  // d loss / d h_pos
  double d_neg = 0.0;  // d loss / d h_neg
};

struct PointLoss {
  double value = 0.0;
  double d_score = 0.0;
};

inline double MarginViolation(const PairScores& ps) {
  return 1.0 - ps.h_pos + ps.h_neg;
}

// p must be 1 or 2. The subgradient at u == 0 is 0.
PairLoss LpRankLoss(const PairScores& ps, int p);

// Requires ps.delta > 0.
PairLoss HuberRankLoss(const PairScores& ps);

// delta0 + popularity; popularity must lie in [0, 1].
double AdaptiveDelta(double popularity, double delta0 = kDefaultHuberDelta);

// Logistic loss log(1 + exp(-label * score)), label in {+1, -1}; evaluated
// without overflow for large |score|.
PointLoss ClassificationLoss(double score, int label);

// Dispatches a rank loss kind on a pair. Classification kinds are rejected.
PairLoss RankLoss(const LossKind& kind, const PairScores& ps);

// Sum of pair losses plus lambda * (sum of squared weight entries).
double Objective(std::span<const double> pair_losses,
                 std::span<const double> weights, double lambda);

// p = log(1 + views) / log(1 + max_views), clamped to [0, 1]. All zero when
// every viewcount is zero.
std::vector<double> NormalizeViewcounts(std::span<const double> views);

}  // namespace v2g

#endif  // V2G_LOSS_H_
