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

#include "v2g/types.h"

#include <algorithm>
#include <cmath>

#include "v2g/error.h"

namespace v2g {

FeatureMatrix::FeatureMatrix(std::size_t num_segments, std::size_t dim,
                             std::vector<float> values)
    : num_segments_(num_segments), dim_(dim), values_(std::move(values)) {
  if (num_segments_ == 0 || dim_ == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "feature matrix needs at least one row and one column");
  }
  if (values_.size() != num_segments_ * dim_) {
    throw Error(ErrorCode::kDimMismatch,
                "feature matrix holds " + std::to_string(values_.size()) +
                    " values, shape needs " +
                    std::to_string(num_segments_ * dim_));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::kNonFiniteValue,
                  "feature value " + std::to_string(i) + " is not finite");
    }
  }
}

double OverlapLength(const SegmentSpan& a, const SegmentSpan& b) {
  return std::max(0.0, std::min(a.end, b.end) - std::max(a.start, b.start));
}

void ValidateSpan(const SegmentSpan& span) {
  if (!std::isfinite(span.start) || !std::isfinite(span.end) ||
      span.start < 0.0 || !(span.end > span.start)) {
    throw Error(ErrorCode::kInvalidArgument,
                "span [" + std::to_string(span.start) + ", " +
                    std::to_string(span.end) + ") is not a valid interval");
  }
}

void ValidateContext(const ContextMeta& context) {
  if (context.num_categories < 1) {
    throw Error(ErrorCode::kInvalidArgument, "num_categories must be >= 1");
  }
  if (context.category_index < 0 ||
      context.category_index >= context.num_categories) {
    throw Error(ErrorCode::kCategoryOutOfRange,
                "category_index " + std::to_string(context.category_index) +
                    " outside [0, " + std::to_string(context.num_categories) +
                    ")");
  }
  if (context.tag_embedding.size() != kTagEmbeddingDim) {
    throw Error(ErrorCode::kInvalidArgument,
                "tag_embedding must have 300 entries, got " +
                    std::to_string(context.tag_embedding.size()));
  }
  for (float v : context.tag_embedding) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFiniteValue, "tag_embedding not finite");
    }
  }
}

void ValidateVideoRecord(const VideoRecord& video) {
  const auto where = [&](const std::string& what) {
    return "video '" + video.id + "': " + what;
  };
  if (!std::isfinite(video.duration) || video.duration <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, where("duration must be > 0"));
  }
  for (std::size_t i = 0; i < video.segments.size(); ++i) {
    const SegmentSpan& s = video.segments[i];
    ValidateSpan(s);
    if (s.end > video.duration) {
      throw Error(ErrorCode::kInvalidArgument,
                  where("segment " + std::to_string(i) + " exceeds duration"));
    }
    if (i > 0 && s.start < video.segments[i - 1].end) {
      throw Error(ErrorCode::kInvalidArgument,
                  where("segments must be sorted and non-overlapping"));
    }
  }
  for (const GifSpan& g : video.gifs) {
    ValidateSpan(g.span());
    if (g.end > video.duration) {
      throw Error(ErrorCode::kInvalidArgument, where("gif exceeds duration"));
    }
    if (!(g.popularity >= 0.0 && g.popularity <= 1.0)) {
      throw Error(ErrorCode::kPopularityOutOfRange,
                  where("gif popularity outside [0, 1]"));
    }
  }
  if (!video.labels.empty() && video.labels.size() != video.segments.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                where("labels length differs from segments length"));
  }
  if (video.context) ValidateContext(*video.context);
}

}  // namespace v2g
