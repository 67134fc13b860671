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

#ifndef V2G_SHOTSEG_H_
#define V2G_SHOTSEG_H_

#include <cstddef>
#include <span>
#include <vector>

#include "v2g/types.h"

namespace v2g {

// Per-frame feature vectors, row-major (num_frames x dim).
struct FrameSequence {
  std::size_t num_frames = 0;
  std::size_t dim = 0;
  std::vector<double> values;
  double frame_period = 1.0;

  static FrameSequence FromFeatures(const FeatureMatrix& features,
                                    double frame_period);
};

struct SegmentationResult {
  // Exclusive segment ends, strictly increasing, last == num_frames.
  std::vector<std::size_t> boundaries;
  std::vector<SegmentSpan> spans;
  double cost = 0.0;
};

// Multiple change-point detection. Returns the segmentation minimizing
//   sum_segments SSE(segment) + penalty * (num_segments - 1)
// where SSE is the squared deviation from the segment's mean vector and every
// segment holds at least `min_len` frames. Solved exactly by dynamic
// programming over prefix sums in O(n^2 * dim). Equal-cost solutions (within
// a relative 1e-9) resolve to fewer segments, then lexicographically earlier
// boundaries.
//
// Throws kInfeasibleMinLen when num_frames < min_len.
SegmentationResult SegmentSequence(const FrameSequence& seq, double penalty,
                                   std::size_t min_len);

// span_i = [b_{i-1} * period, b_i * period) with b_0 = 0.
std::vector<SegmentSpan> SpansFromBoundaries(
    std::span<const std::size_t> boundaries, double frame_period);

// 2 * dim * (median over t of the per-dimension variance of frame-to-frame
// differences), i.e. the median of ||x_{t+1} - x_t||^2. Zero for one frame.
double DefaultPenalty(const FrameSequence& seq);

// Frames per second of video, at least 1.
std::size_t DefaultMinLen(double frame_period);

}  // namespace v2g

#endif  // V2G_SHOTSEG_H_
