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

#include "v2g/shotseg.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "v2g/error.h"

namespace v2g {
namespace {

constexpr double kTieTolerance = 1e-9;
constexpr std::size_t kNoParent = std::numeric_limits<std::size_t>::max();

// Cumulative sums of the mean-centred sequence, so SSE(i, j) can be read off
// in O(dim).
class SegmentCost {
 public:
  explicit SegmentCost(const FrameSequence& seq)
      : dim_(seq.dim),
        sum_((seq.num_frames + 1) * seq.dim, 0.0),
        sum_sq_(seq.num_frames + 1, 0.0) {
    std::vector<double> mean(dim_, 0.0);
    for (std::size_t t = 0; t < seq.num_frames; ++t) {
      for (std::size_t d = 0; d < dim_; ++d) mean[d] += seq.values[t * dim_ + d];
    }
    for (double& m : mean) m /= static_cast<double>(seq.num_frames);
    for (std::size_t t = 0; t < seq.num_frames; ++t) {
      double sq = 0.0;
      for (std::size_t d = 0; d < dim_; ++d) {
        const double x = seq.values[t * dim_ + d] - mean[d];
        sum_[(t + 1) * dim_ + d] = sum_[t * dim_ + d] + x;
        sq += x * x;
      }
      sum_sq_[t + 1] = sum_sq_[t] + sq;
    }
  }

  // SSE of frames [i, j).
  double operator()(std::size_t i, std::size_t j) const {
    const double len = static_cast<double>(j - i);
    double between = 0.0;
    for (std::size_t d = 0; d < dim_; ++d) {
      const double s = sum_[j * dim_ + d] - sum_[i * dim_ + d];
      between += s * s;
    }
    return std::max(0.0, (sum_sq_[j] - sum_sq_[i]) - between / len);
  }

 private:
  std::size_t dim_;
  std::vector<double> sum_;
  std::vector<double> sum_sq_;
};

std::vector<std::size_t> Backtrack(const std::vector<std::size_t>& parent,
                                   std::size_t end) {
  std::vector<std::size_t> path;
  for (std::size_t j = end; j != 0; j = parent[j]) path.push_back(j);
  std::reverse(path.begin(), path.end());
  return path;
}

void CheckSequence(const FrameSequence& seq) {
  if (seq.num_frames == 0 || seq.dim == 0) {
    throw Error(ErrorCode::kInvalidArgument, "frame sequence is empty");
  }
  if (seq.values.size() != seq.num_frames * seq.dim) {
    throw Error(ErrorCode::kDimMismatch, "frame sequence shape mismatch");
  }
  for (double v : seq.values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFiniteValue, "frame value not finite");
    }
  }
}

}  // namespace

FrameSequence FrameSequence::FromFeatures(const FeatureMatrix& features,
                                          double frame_period) {
  FrameSequence seq;
  seq.num_frames = features.num_segments();
  seq.dim = features.dim();
  seq.values.assign(features.values().begin(), features.values().end());
  seq.frame_period = frame_period;
  return seq;
}

SegmentationResult SegmentSequence(const FrameSequence& seq, double penalty,
                                   std::size_t min_len) {
  CheckSequence(seq);
  if (!(penalty >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "penalty must be >= 0");
  }
  if (min_len == 0) {
    throw Error(ErrorCode::kInvalidArgument, "min_len must be >= 1");
  }
  const std::size_t n = seq.num_frames;
  if (n < min_len) {
    throw Error(ErrorCode::kInfeasibleMinLen,
                std::to_string(n) + " frames cannot hold a segment of " +
                    std::to_string(min_len));
  }

  const SegmentCost sse(seq);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> best(n + 1, inf);
  std::vector<std::size_t> count(n + 1, 0);
  std::vector<std::size_t> parent(n + 1, kNoParent);
  best[0] = 0.0;

  for (std::size_t j = min_len; j <= n; ++j) {
    for (std::size_t i = 0; i + min_len <= j; ++i) {
      if (best[i] == inf) continue;
      const double candidate = best[i] + sse(i, j) + (i > 0 ? penalty : 0.0);
      const std::size_t segments = count[i] + 1;
      bool take = false;
      if (parent[j] == kNoParent) {
        take = true;
      } else {
        const double tol =
            kTieTolerance * std::max({1.0, std::abs(candidate), std::abs(best[j])});
        if (candidate < best[j] - tol) {
          take = true;
        } else if (candidate <= best[j] + tol) {
          if (segments < count[j]) {
            take = true;
          } else if (segments == count[j]) {
            std::vector<std::size_t> mine = Backtrack(parent, i);
            mine.push_back(j);
            take = mine < Backtrack(parent, j);
          }
        }
      }
      if (take) {
        best[j] = candidate;
        count[j] = segments;
        parent[j] = i;
      }
    }
  }
  if (parent[n] == kNoParent) {
    throw Error(ErrorCode::kInfeasibleMinLen, "no feasible segmentation");
  }

  SegmentationResult result;
  result.boundaries = Backtrack(parent, n);
  result.spans = SpansFromBoundaries(result.boundaries, seq.frame_period);
  result.cost = best[n];
  return result;
}

std::vector<SegmentSpan> SpansFromBoundaries(
    std::span<const std::size_t> boundaries, double frame_period) {
  std::vector<SegmentSpan> spans;
  spans.reserve(boundaries.size());
  std::size_t prev = 0;
  for (std::size_t b : boundaries) {
    spans.push_back({static_cast<double>(prev) * frame_period,
                     static_cast<double>(b) * frame_period});
    prev = b;
  }
  return spans;
}

double DefaultPenalty(const FrameSequence& seq) {
  CheckSequence(seq);
  if (seq.num_frames < 2) return 0.0;
  std::vector<double> jumps(seq.num_frames - 1);
  for (std::size_t t = 0; t + 1 < seq.num_frames; ++t) {
    double sq = 0.0;
    for (std::size_t d = 0; d < seq.dim; ++d) {
      const double diff =
          seq.values[(t + 1) * seq.dim + d] - seq.values[t * seq.dim + d];
      sq += diff * diff;
    }
    jumps[t] = sq;
  }
  const auto mid = jumps.begin() + static_cast<std::ptrdiff_t>(jumps.size() / 2);
  std::nth_element(jumps.begin(), mid, jumps.end());
  return *mid;
}

std::size_t DefaultMinLen(double frame_period) {
  if (!(frame_period > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "frame_period must be > 0");
  }
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(1.0 / frame_period)));
}

}  // namespace v2g
