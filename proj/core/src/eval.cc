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

#include "v2g/eval.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "json.hpp"
#include "v2g/align.h"
#include "v2g/error.h"

namespace v2g {
namespace {

// Relative slack when comparing covered duration to the recall target, so
// that exact coverage survives floating-point summation.
constexpr double kRecallTolerance = 1e-12;

void CheckScores(const RankedVideo& ranked) {
  if (ranked.scores.size() != ranked.video.segments.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "video " + ranked.video.id + ": " +
                    std::to_string(ranked.scores.size()) + " scores for " +
                    std::to_string(ranked.video.segments.size()) + " segments");
  }
  for (double s : ranked.scores) {
    if (!std::isfinite(s)) {
      throw Error(ErrorCode::kNonFiniteValue,
                  "video " + ranked.video.id + ": non-finite score");
    }
  }
}

std::vector<Label> PositiveLabels(const VideoRecord& video) {
  if (!video.labels.empty()) return video.labels;
  return LabelSegments(video);
}

// Mean nMSD of a ranking against a set of ground-truth spans, skipping the
// unreachable ones.
double MeanNmsd(const RankedVideo& ranked, std::span<const SegmentSpan> gts,
                double alpha) {
  if (gts.empty()) {
    throw Error(ErrorCode::kNoPositives, "video " + ranked.video.id + " has no GIF");
  }
  double sum = 0.0;
  std::size_t n = 0;
  for (const SegmentSpan& gt : gts) {
    try {
      sum += Nmsd(ranked, gt, alpha);
      ++n;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUnreachableRecall) throw;
    }
  }
  if (n == 0) {
    throw Error(ErrorCode::kUnreachableRecall,
                "video " + ranked.video.id + ": recall unreachable for every GIF");
  }
  return sum / static_cast<double>(n);
}

std::string FormatNumber(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void Finish(MetricReport& report) {
  double nmsd_sum = 0.0;
  double ap_sum = 0.0;
  report.nmsd_count = 0;
  report.ap_count = 0;
  for (const VideoMetrics& m : report.per_video) {
    if (m.nmsd) {
      nmsd_sum += *m.nmsd;
      ++report.nmsd_count;
    }
    if (m.ap) {
      ap_sum += *m.ap;
      ++report.ap_count;
    }
  }
  report.nmsd = report.nmsd_count ? nmsd_sum / report.nmsd_count : 0.0;
  report.map = report.ap_count ? ap_sum / report.ap_count : 0.0;
}

}  // namespace

std::vector<std::size_t> RankOrder(const RankedVideo& ranked) {
  CheckScores(ranked);
  std::vector<std::size_t> order(ranked.scores.size());
  std::iota(order.begin(), order.end(), 0);
  const auto& segs = ranked.video.segments;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (ranked.scores[a] != ranked.scores[b]) {
      return ranked.scores[a] > ranked.scores[b];
    }
    return segs[a].start < segs[b].start;
  });
  return order;
}

double Nmsd(const RankedVideo& ranked, const SegmentSpan& gt, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must lie in (0, 1]");
  }
  if (!(gt.length() > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "ground-truth span is empty");
  }
  const double target = alpha * gt.length();
  const double duration = ranked.video.duration;
  if (!(duration > target)) {
    throw Error(ErrorCode::kInvalidArgument,
                "video " + ranked.video.id +
                    ": duration must exceed alpha * |gt|");
  }
  const double needed = target * (1.0 - kRecallTolerance);

  double reachable = 0.0;
  for (const SegmentSpan& s : ranked.video.segments) {
    reachable += OverlapLength(s, gt);
  }
  if (reachable < needed) {
    throw Error(ErrorCode::kUnreachableRecall,
                "video " + ranked.video.id + ": segments cover " +
                    FormatNumber(reachable) + "s of a " + FormatNumber(target) +
                    "s recall target");
  }

  double covered = 0.0;
  double selected = 0.0;
  for (std::size_t i : RankOrder(ranked)) {
    const SegmentSpan& s = ranked.video.segments[i];
    covered += OverlapLength(s, gt);
    selected += s.length();
    if (covered >= needed) break;
  }
  const double v = (selected - target) / (duration - target);
  return std::clamp(v, 0.0, 1.0);
}

double VideoNmsd(const RankedVideo& ranked, double alpha) {
  std::vector<SegmentSpan> gts;
  for (const GifSpan& g : ranked.video.gifs) gts.push_back(g.span());
  return MeanNmsd(ranked, gts, alpha);
}

double AveragePrecision(const RankedVideo& ranked) {
  const std::vector<Label> labels = PositiveLabels(ranked.video);
  std::size_t rank = 0;
  std::size_t hits = 0;
  double sum = 0.0;
  for (std::size_t i : RankOrder(ranked)) {
    if (labels[i] == Label::kIgnored) continue;
    ++rank;
    if (labels[i] == Label::kPositive) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(rank);
    }
  }
  if (hits == 0) {
    throw Error(ErrorCode::kNoPositives,
                "video " + ranked.video.id + " has no positive segment");
  }
  return sum / static_cast<double>(hits);
}

MetricReport Evaluate(std::span<const RankedVideo> ranked, double alpha) {
  if (ranked.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "nothing to evaluate");
  }
  MetricReport report;
  for (const RankedVideo& r : ranked) {
    CheckScores(r);
    VideoMetrics m{r.video.id, std::nullopt, std::nullopt};
    try {
      m.nmsd = VideoNmsd(r, alpha);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUnreachableRecall &&
          e.code() != ErrorCode::kNoPositives) {
        throw;
      }
      ++report.warnings;
    }
    try {
      m.ap = AveragePrecision(r);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoPositives) throw;
      ++report.warnings;
    }
    report.per_video.push_back(std::move(m));
  }
  Finish(report);
  return report;
}

std::vector<VideoRecord> SelectMultiCreatorVideos(
    std::span<const VideoRecord> videos) {
  std::vector<VideoRecord> out;
  for (const VideoRecord& v : videos) {
    std::set<std::string> creators;
    for (const GifSpan& g : v.gifs) creators.insert(g.creator_id);
    if (creators.size() >= 2) out.push_back(v);
  }
  return out;
}

MetricReport UpperBound(std::span<const VideoRecord> videos, double alpha) {
  if (videos.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "nothing to evaluate");
  }
  MetricReport report;
  for (const VideoRecord& video : videos) {
    std::set<std::string> creators;
    for (const GifSpan& g : video.gifs) creators.insert(g.creator_id);
    if (creators.size() < 2) {
      throw Error(ErrorCode::kInsufficientCreators,
                  "video " + video.id + " has GIFs from fewer than two creators");
    }
    double nmsd_sum = 0.0;
    std::size_t nmsd_n = 0;
    double ap_sum = 0.0;
    std::size_t ap_n = 0;
    for (const GifSpan& held : video.gifs) {
      RankedVideo ranked{video, {}};
      ranked.video.labels.clear();
      ranked.video.gifs.clear();
      std::vector<SegmentSpan> rest;
      for (const GifSpan& g : video.gifs) {
        if (g.creator_id == held.creator_id) continue;
        rest.push_back(g.span());
        ranked.video.gifs.push_back(g);
      }
      for (const SegmentSpan& s : video.segments) {
        ranked.scores.push_back(s.length() > 0.0
                                    ? OverlapLength(s, held.span()) / s.length()
                                    : 0.0);
      }
      try {
        nmsd_sum += MeanNmsd(ranked, rest, alpha);
        ++nmsd_n;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kUnreachableRecall) throw;
      }
      try {
        ap_sum += AveragePrecision(ranked);
        ++ap_n;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kNoPositives) throw;
      }
    }
    VideoMetrics m{video.id, std::nullopt, std::nullopt};
    if (nmsd_n > 0) {
      m.nmsd = nmsd_sum / static_cast<double>(nmsd_n);
    } else {
      ++report.warnings;
    }
    if (ap_n > 0) {
      m.ap = ap_sum / static_cast<double>(ap_n);
    } else {
      ++report.warnings;
    }
    report.per_video.push_back(std::move(m));
  }
  Finish(report);
  return report;
}

std::string ReportToJson(const MetricReport& report) {
  nlohmann::ordered_json j;
  j["nmsd"] = report.nmsd;
  j["map"] = report.map;
  j["nmsd_count"] = report.nmsd_count;
  j["ap_count"] = report.ap_count;
  j["warnings"] = report.warnings;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const VideoMetrics& m : report.per_video) {
    nlohmann::ordered_json row;
    row["id"] = m.id;
    row["nmsd"] = m.nmsd ? nlohmann::ordered_json(*m.nmsd) : nullptr;
    row["ap"] = m.ap ? nlohmann::ordered_json(*m.ap) : nullptr;
    rows.push_back(std::move(row));
  }
  j["per_video"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string ReportToCsv(const MetricReport& report) {
  std::string out = "video_id,nmsd,ap\n";
  for (const VideoMetrics& m : report.per_video) {
    out += m.id;
    out += ',';
    if (m.nmsd) out += FormatNumber(*m.nmsd);
    out += ',';
    if (m.ap) out += FormatNumber(*m.ap);
    out += '\n';
  }
  return out;
}

}  // namespace v2g
