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

// Domain types shared by every module: segment features, time spans, GIF
// annotations and per-video records.

#ifndef V2G_TYPES_H_
#define V2G_TYPES_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace v2g {

inline constexpr std::size_t kTagEmbeddingDim = 300;

// Row-major float32 matrix, one row per segment. Immutable once built; the
// constructor rejects empty shapes and non-finite values.
class FeatureMatrix {
 public:
  FeatureMatrix(std::size_t num_segments, std::size_t dim,
                std::vector<float> values);

  std::size_t num_segments() const { return num_segments_; }
  std::size_t dim() const { return dim_; }
  std::span<const float> values() const { return values_; }
  std::span<const float> row(std::size_t i) const {
    return std::span<const float>(values_).subspan(i * dim_, dim_);
  }
  float at(std::size_t i, std::size_t j) const { return values_[i * dim_ + j]; }

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  std::size_t num_segments_;
  std::size_t dim_;
  std::vector<float> values_;
};

// Half-open time interval [start, end) in seconds.
struct SegmentSpan {
  double start = 0.0;
  double end = 0.0;

  double length() const { return end - start; }
  bool Contains(double t) const { return t >= start && t < end; }
  friend bool operator==(const SegmentSpan&, const SegmentSpan&) = default;
};

// Length of the intersection of two spans (0 when disjoint or touching).
double OverlapLength(const SegmentSpan& a, const SegmentSpan& b);

struct GifSpan {
  double start = 0.0;
  double end = 0.0;
  // Normalized viewcount in [0, 1].
  double popularity = 0.0;
  std::string creator_id;

  SegmentSpan span() const { return {start, end}; }
  double length() const { return end - start; }
  friend bool operator==(const GifSpan&, const GifSpan&) = default;
};

enum class Label : std::uint8_t { kPositive, kNegative, kIgnored };

struct ContextMeta {
  int category_index = 0;
  int num_categories = 1;
  std::vector<float> tag_embedding;  // kTagEmbeddingDim entries

  friend bool operator==(const ContextMeta&, const ContextMeta&) = default;
};

struct VideoRecord {
  std::string id;
  double duration = 0.0;
  std::vector<SegmentSpan> segments;
  std::vector<GifSpan> gifs;
  std::vector<Label> labels;  // empty or one per segment
  std::optional<ContextMeta> context;

  friend bool operator==(const VideoRecord&, const VideoRecord&) = default;
};

// Throws kInvalidArgument on any broken invariant: span ordering/overlap,
// spans outside [0, duration], popularity outside [0, 1], label count, or a
// malformed context block.
void ValidateSpan(const SegmentSpan& span);
void ValidateContext(const ContextMeta& context);
void ValidateVideoRecord(const VideoRecord& video);

}  // namespace v2g

#endif  // V2G_TYPES_H_
