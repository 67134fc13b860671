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

#ifndef V2G_EVAL_H_
#define V2G_EVAL_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "v2g/types.h"

namespace v2g {

inline constexpr double kDefaultRecallAlpha = 0.5;

struct RankedVideo {
  VideoRecord video;
  std::vector<double> scores;  // one per segment
};

// Segment indices by descending score; ties go to the earlier start.
std::vector<std::size_t> RankOrder(const RankedVideo& ranked);

// Normalized meaningful summary duration for one ground-truth span.
//
// Segments are taken in rank order until their overlap with `gt` reaches
// alpha * |gt|; |G*| is the total duration taken. Returns
//   (|G*| - alpha |gt|) / (|V| - alpha |gt|)
// which is 0 for a selection inside gt that stops right at the recall point
// and 1 when the ground truth is ranked last. Throws kUnreachableRecall if
// the segments cannot cover alpha * |gt| at all.
double Nmsd(const RankedVideo& ranked, const SegmentSpan& gt, double alpha);

// Mean nMSD over the video's GIFs. GIFs whose recall is unreachable are left
// out; throws kUnreachableRecall when none remain and kNoPositives when the
// video has no GIF.
double VideoNmsd(const RankedVideo& ranked, double alpha);

// Average precision over the ranked segments. Positives are the positive
// labels (derived from the GIF spans when the record has none); ignored
// segments are removed from the list. Throws kNoPositives.
double AveragePrecision(const RankedVideo& ranked);

struct VideoMetrics {
  std::string id;
  std::optional<double> nmsd;
  std::optional<double> ap;
};

struct MetricReport {
  double nmsd = 0.0;  // mean over videos with an nMSD
  double map = 0.0;   // mean over videos with an AP
  std::size_t nmsd_count = 0;
  std::size_t ap_count = 0;
  std::size_t warnings = 0;  // per-video metrics that could not be computed
  std::vector<VideoMetrics> per_video;
};

// Per-video metrics plus unweighted means. Videos whose metric fails are
// skipped for that metric and counted in `warnings`.
MetricReport Evaluate(std::span<const RankedVideo> ranked, double alpha);

// Videos with GIFs from at least two distinct creators.
std::vector<VideoRecord> SelectMultiCreatorVideos(
    std::span<const VideoRecord> videos);

// Approximate upper bound: each GIF in turn plays the role of a prediction
// (segments scored by their covered fraction) and is evaluated against the
// GIFs of the other creators. Per video, the held-out results are averaged.
// Throws kInsufficientCreators if a video has fewer than two creators.
MetricReport UpperBound(std::span<const VideoRecord> videos, double alpha);

// Pretty JSON report and CSV (video_id,nmsd,ap; empty cells for missing).
std::string ReportToJson(const MetricReport& report);
std::string ReportToCsv(const MetricReport& report);

}  // namespace v2g

#endif  // V2G_EVAL_H_
