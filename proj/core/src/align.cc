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

#include "v2g/align.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "v2g/error.h"

namespace v2g {
namespace {

void CheckTrack(const HashTrack& track, const char* name) {
  if (track.hashes.empty()) {
    throw Error(ErrorCode::kDegenerateTrack, std::string(name) + " track is empty");
  }
  if (track.hashes.size() != track.timestamps.size()) {
    throw Error(ErrorCode::kDegenerateTrack,
                std::string(name) + " track has " +
                    std::to_string(track.hashes.size()) + " hashes but " +
                    std::to_string(track.timestamps.size()) + " timestamps");
  }
  for (std::size_t i = 0; i < track.timestamps.size(); ++i) {
    if (!std::isfinite(track.timestamps[i]) ||
        (i > 0 && !(track.timestamps[i] > track.timestamps[i - 1]))) {
      throw Error(ErrorCode::kDegenerateTrack,
                  std::string(name) +
                      " timestamps must be finite and strictly increasing");
    }
  }
}

}  // namespace

Alignment AlignGif(const HashTrack& gif, const HashTrack& video,
                   int max_bit_distance) {
  CheckTrack(gif, "gif");
  CheckTrack(video, "video");
  if (max_bit_distance < 0 || max_bit_distance > 64) {
    throw Error(ErrorCode::kInvalidArgument, "max_bit_distance outside [0, 64]");
  }

  struct BestMatch {
    double offset;
    int distance;
  };
  std::vector<std::optional<BestMatch>> best(gif.hashes.size());
  std::vector<double> offsets;
  for (std::size_t i = 0; i < gif.hashes.size(); ++i) {
    int best_distance = std::numeric_limits<int>::max();
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < video.hashes.size(); ++j) {
      const int d = HammingDistance(gif.hashes[i], video.hashes[j]);
      if (d < best_distance) {
        best_distance = d;
        best_j = j;
      }
    }
    if (best_distance <= max_bit_distance) {
      const double offset = video.timestamps[best_j] - gif.timestamps[i];
      best[i] = BestMatch{offset, best_distance};
      offsets.push_back(offset);
    }
  }
  if (offsets.empty()) {
    throw Error(ErrorCode::kNoMatch,
                "no gif frame lies within " + std::to_string(max_bit_distance) +
                    " bits of any video frame");
  }
  std::sort(offsets.begin(), offsets.end());
  const double offset = offsets[(offsets.size() - 1) / 2];

  std::size_t matched = 0;
  double distance_sum = 0.0;
  for (const auto& m : best) {
    if (m && std::abs(m->offset - offset) <= kInlierToleranceSeconds) {
      ++matched;
      distance_sum += m->distance;
    }
  }
  Alignment result;
  result.video_start = offset + gif.timestamps.front();
  result.video_end = offset + gif.timestamps.back();
  result.matched_fraction =
      static_cast<double>(matched) / static_cast<double>(gif.hashes.size());
  result.mean_bit_distance = distance_sum / static_cast<double>(matched);
  if (!(result.video_end > result.video_start)) {
    // A single-frame GIF has no extent of its own.
    throw Error(ErrorCode::kDegenerateTrack,
                "gif track needs at least two frames to span an interval");
  }
  return result;
}

std::vector<Label> LabelSegments(std::span<const SegmentSpan> segments,
                                 std::span<const SegmentSpan> gif_spans,
                                 double threshold) {
  std::vector<Label> labels;
  labels.reserve(segments.size());
  for (const SegmentSpan& segment : segments) {
    double max_overlap = 0.0;
    for (const SegmentSpan& gif : gif_spans) {
      max_overlap = std::max(max_overlap, OverlapLength(segment, gif));
    }
    if (max_overlap / segment.length() > threshold) {
      labels.push_back(Label::kPositive);
    } else if (max_overlap == 0.0) {
      labels.push_back(Label::kNegative);
    } else {
      labels.push_back(Label::kIgnored);
    }
  }
  return labels;
}

std::vector<Label> LabelSegments(const VideoRecord& video, double threshold) {
  std::vector<SegmentSpan> spans;
  spans.reserve(video.gifs.size());
  for (const GifSpan& g : video.gifs) spans.push_back(g.span());
  return LabelSegments(video.segments, spans, threshold);
}

std::vector<double> ReadTimestamps(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::vector<double> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    double t;
    if (!(ss >> t)) {
      throw Error(ErrorCode::kFormatError, "bad timestamp line: '" + line + "'");
    }
    out.push_back(t);
  }
  return out;
}

HashTrack LoadHashTrack(const std::filesystem::path& hashes,
                        const std::filesystem::path& timestamps) {
  return {ReadHashDump(hashes), ReadTimestamps(timestamps)};
}

}  // namespace v2g
