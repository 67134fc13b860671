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

#ifndef V2G_ALIGN_H_
#define V2G_ALIGN_H_

#include <filesystem>
#include <span>
#include <vector>

#include "v2g/phash.h"
#include "v2g/types.h"

namespace v2g {

// Frame hashes with their presentation times (seconds, strictly increasing).
struct HashTrack {
  std::vector<PHash64> hashes;
  std::vector<double> timestamps;
};

struct Alignment {
  double video_start = 0.0;
  double video_end = 0.0;
  double mean_bit_distance = 0.0;
  double matched_fraction = 0.0;
};

inline constexpr int kDefaultMaxBitDistance = 10;
inline constexpr double kInlierToleranceSeconds = 0.5;
inline constexpr double kDefaultOverlapThreshold = 0.66;

// Locates a GIF inside its source video.
//
// Every GIF frame is compared against every video frame (O(nk) Hamming
// distances). A frame's best match is its nearest video frame within
// `max_bit_distance` (earliest on ties); each best match implies an offset
// t_video - t_gif. The alignment offset is the lower median of those offsets,
// which tolerates repeated frames in static scenes. A GIF frame counts as
// matched when its best match lies within 0.5 s of the median prediction;
// mean_bit_distance averages the distances of the matched frames.
//
// Throws kDegenerateTrack for empty or malformed tracks and kNoMatch when no
// GIF frame has a candidate. Pure; safe to call concurrently.
Alignment AlignGif(const HashTrack& gif, const HashTrack& video,
                   int max_bit_distance = kDefaultMaxBitDistance);

// Positive iff some span covers more than `threshold` of the segment's
// length; negative iff the segment touches no span at all; ignored otherwise.
std::vector<Label> LabelSegments(std::span<const SegmentSpan> segments,
                                 std::span<const SegmentSpan> gif_spans,
                                 double threshold = kDefaultOverlapThreshold);

std::vector<Label> LabelSegments(const VideoRecord& video,
                                 double threshold = kDefaultOverlapThreshold);

// One float per line, seconds.
std::vector<double> ReadTimestamps(const std::filesystem::path& path);

HashTrack LoadHashTrack(const std::filesystem::path& hashes,
                        const std::filesystem::path& timestamps);

}  // namespace v2g

#endif  // V2G_ALIGN_H_
