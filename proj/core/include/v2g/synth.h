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

#ifndef V2G_SYNTH_H_
#define V2G_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "v2g/dataset_io.h"

namespace v2g {

// Generator for labeled datasets with a planted ground truth.
//
// A hidden unit vector w is shared by all videos. Segment s of video v gets
// features x(s) = c_v + z_s, where z_s ~ N(0, I) and the per-video offset
// c_v = video_offset_scale * a_v * w (a_v ~ N(0, 1)) shifts every segment of
// a video along w. The planted score is u(s) = w . x(s); the top
// `positives_per_video` segments by u(s) + noise_level * N(0, 1) are labeled
// positive and each gets a GIF span equal to its segment span. Because the
// offset is shared inside a video, within-video order is informative while
// cross-video comparisons are dominated by a_v.
//
// With probability outlier_fraction a video's labels are randomly permuted;
// its GIF spans follow the permuted positives and its GIFs are drawn with a
// lower viewcount.
struct SynthOptions {
  std::size_t num_videos = 100;
  std::size_t segs_per_video = 20;
  std::size_t dim = 64;
  double noise_level = 0.0;
  double outlier_fraction = 0.0;
  std::uint64_t seed = 0;
  // 0 selects max(1, segs_per_video / 10).
  std::size_t positives_per_video = 0;
  double video_offset_scale = 3.0;
  int num_categories = 5;
};

struct SynthVideo {
  LabeledVideo video;
  std::vector<double> planted_scores;  // u(s) per segment, noise-free
  bool permuted = false;
};

struct SynthDataset {
  std::vector<SynthVideo> videos;
  std::vector<double> hidden_weights;
  std::size_t num_permuted = 0;

  Dataset ToDataset() const;
};

SynthDataset SynthesizeDataset(const SynthOptions& options);

}  // namespace v2g

#endif  // V2G_SYNTH_H_
