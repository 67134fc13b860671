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

#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "test_util.h"
#include "v2g/rng.h"

namespace v2g {
namespace {

// Unit-length segments covering [0, n).
VideoRecord UnitVideo(std::size_t n, const std::string& id = "v") {
  VideoRecord v;
  v.id = id;
  v.duration = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    v.segments.push_back({static_cast<double>(i), static_cast<double>(i + 1)});
  }
  return v;
}

RankedVideo Ranked(VideoRecord v, std::vector<double> scores) {
  return {std::move(v), std::move(scores)};
}

TEST(NmsdTest, HandComputedThird) {
  VideoRecord v = UnitVideo(4);
  // Segments 2 and 3 (1-based) are [1, 3).
  const RankedVideo r = Ranked(v, {0.9, 0.1, 0.8, 0.2});
  EXPECT_NEAR(Nmsd(r, {1.0, 3.0}, 0.5), 1.0 / 3.0, 1e-15);
}

TEST(NmsdTest, ExactSegmentRankedFirst) {
  VideoRecord v;
  v.id = "v";
  v.duration = 20;
  v.segments = {{0, 5}, {5, 9}, {9, 20}};
  const RankedVideo r = Ranked(v, {0.0, 1.0, 0.5});
  // |G*| = |gt| = 4: 0.5 * 4 / (20 - 2).
  EXPECT_NEAR(Nmsd(r, {5, 9}, 0.5), 2.0 / 18.0, 1e-15);
}

TEST(NmsdTest, FineSegmentsInsideGtReachZero) {
  const RankedVideo r = Ranked(UnitVideo(10), {0, 0, 5, 4, 3, 2, 0, 0, 0, 0});
  EXPECT_NEAR(Nmsd(r, {2, 6}, 0.5), 0.0, 1e-15);
}

TEST(NmsdTest, GtRankedLastIsOne) {
  // Ties go to the earlier start, so segment 7 is taken last.
  const RankedVideo r = Ranked(UnitVideo(8), {8, 7, 6, 5, 4, 3, 0, 0});
  EXPECT_DOUBLE_EQ(Nmsd(r, {7, 8}, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(Nmsd(r, {6.5, 8}, 1.0), 1.0);
}

TEST(NmsdTest, TiesBreakByEarlierStart) {
  const RankedVideo r = Ranked(UnitVideo(4), {1, 1, 1, 1});
  // Order 0, 1, 2: covered reaches 0.5 in segment 2.
  EXPECT_NEAR(Nmsd(r, {2, 3}, 0.5), (3 - 0.5) / (4 - 0.5), 1e-15);
  const std::vector<std::size_t> order = RankOrder(r);
  EXPECT_EQ(order, (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(NmsdTest, UnreachableRecall) {
  VideoRecord v;
  v.id = "v";
  v.duration = 10;
  v.segments = {{0, 2}, {8, 10}};
  const RankedVideo r = Ranked(v, {1, 2});
  EXPECT_V2G_ERROR(Nmsd(r, {2, 8}, 0.5), kUnreachableRecall);
  EXPECT_THROW(Nmsd(r, {0, 2}, 0.0), Error);
}

TEST(NmsdTest, RandomVideosStayInUnitIntervalAndMatchOracle) {
  Rng rng(10);
  for (int trial = 0; trial < 3000; ++trial) {
    const std::size_t n = 2 + rng.UniformInt(15);
    VideoRecord v;
    v.id = "r";
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double len = rng.Uniform(0.2, 3.0);
      v.segments.push_back({t, t + len});
      t += len;
    }
    v.duration = t;
    std::vector<double> scores(n);
    for (double& s : scores) s = static_cast<double>(rng.UniformInt(5));
    const double a = rng.Uniform(0.0, t * 0.8);
    const SegmentSpan gt{a, a + rng.Uniform(0.1, t - a)};
    const double alpha = rng.Uniform(0.05, 1.0);
    if (!(t > alpha * gt.length())) continue;
    const RankedVideo r = Ranked(v, scores);
    const double got = Nmsd(r, gt, alpha);
    EXPECT_GE(got, 0.0);
    EXPECT_LE(got, 1.0);
    EXPECT_NEAR(got, std::clamp(oracle::NmsdByHand(v.segments, scores, t, gt, alpha), 0.0, 1.0),
                1e-12);
  }
}

TEST(NmsdTest, InvariantUnderMonotoneTransforms) {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const VideoRecord v = UnitVideo(12);
    std::vector<double> s(12);
    for (double& x : s) x = rng.Normal();
    std::vector<double> t(12);
    for (std::size_t i = 0; i < 12; ++i) t[i] = std::exp(3 * s[i]) + 7;
    const double a = static_cast<double>(rng.UniformInt(10));
    const SegmentSpan gt{a, a + 1 + static_cast<double>(rng.UniformInt(2))};
    EXPECT_EQ(Nmsd(Ranked(v, s), gt, 0.5), Nmsd(Ranked(v, t), gt, 0.5));
  }
}

TEST(VideoNmsdTest, MeanOverGifs) {
  VideoRecord v = UnitVideo(4);
  v.gifs = {{1, 3, 0.0, "a"}, {0, 1, 0.0, "b"}};
  const RankedVideo r = Ranked(v, {0.9, 0.1, 0.8, 0.2});
  const double first = Nmsd(r, {1, 3}, 0.5);
  const double second = Nmsd(r, {0, 1}, 0.5);
  EXPECT_NEAR(VideoNmsd(r, 0.5), (first + second) / 2, 1e-15);
  v.gifs.clear();
  EXPECT_V2G_ERROR(VideoNmsd(Ranked(v, {1, 2, 3, 4}), 0.5), kNoPositives);
}

TEST(AveragePrecisionTest, Examples) {
  VideoRecord v = UnitVideo(3);
  v.labels = {Label::kPositive, Label::kNegative, Label::kPositive};
  EXPECT_NEAR(AveragePrecision(Ranked(v, {3, 2, 1})), 5.0 / 6.0, 1e-15);
  EXPECT_DOUBLE_EQ(AveragePrecision(Ranked(v, {3, 1, 2})), 1.0);

  VideoRecord w = UnitVideo(6);
  w.labels.assign(6, Label::kNegative);
  w.labels[4] = Label::kPositive;
  // Positive at rank 3 of 6.
  EXPECT_DOUBLE_EQ(AveragePrecision(Ranked(w, {6, 5, 3, 2, 4, 1})), 1.0 / 3.0);

  w.labels[4] = Label::kNegative;
  EXPECT_V2G_ERROR(AveragePrecision(Ranked(w, {1, 2, 3, 4, 5, 6})), kNoPositives);
}

TEST(AveragePrecisionTest, IgnoredSegmentsAreSkipped) {
  VideoRecord v = UnitVideo(3);
  v.labels = {Label::kIgnored, Label::kNegative, Label::kPositive};
  EXPECT_DOUBLE_EQ(AveragePrecision(Ranked(v, {3, 1, 2})), 1.0);
}

TEST(AveragePrecisionTest, LabelsDerivedFromGifsWhenMissing) {
  VideoRecord v = UnitVideo(4);
  v.gifs = {{2, 3, 0.0, ""}};
  EXPECT_DOUBLE_EQ(AveragePrecision(Ranked(v, {0, 2, 1, 0})), 0.5);
}

TEST(EvaluateTest, PerfectRankingAndMeans) {
  VideoRecord fine = UnitVideo(10, "fine");
  fine.gifs = {{2, 6, 0.0, ""}};
  const RankedVideo perfect = Ranked(fine, {0, 0, 4, 3, 2, 1, 0, 0, 0, 0});
  MetricReport r = Evaluate(std::vector<RankedVideo>{perfect}, 0.5);
  EXPECT_NEAR(r.nmsd, 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(r.map, 1.0);
  EXPECT_EQ(r.warnings, 0u);
  ASSERT_EQ(r.per_video.size(), 1u);
  EXPECT_EQ(r.per_video[0].id, "fine");

  // nMSD 0.2 and 0.4 on two ten-second videos, gt [0, 2) with alpha 0.5:
  // |G*| = 1 + 0.2 * 9 = 2.8 and 1 + 0.4 * 9 = 4.6.
  VideoRecord a;
  a.id = "a";
  a.duration = 10;
  a.segments = {{0, 2.8}, {2.8, 10}};
  a.gifs = {{0, 2, 0.0, ""}};
  VideoRecord b = a;
  b.id = "b";
  b.segments = {{0, 4.6}, {4.6, 10}};
  const std::vector<RankedVideo> two = {Ranked(a, {1, 0}), Ranked(b, {1, 0})};
  r = Evaluate(two, 0.5);
  EXPECT_NEAR(r.per_video[0].nmsd.value(), 0.2, 1e-12);
  EXPECT_NEAR(r.per_video[1].nmsd.value(), 0.4, 1e-12);
  EXPECT_NEAR(r.nmsd, 0.3, 1e-12);
  // Permutation invariant.
  const std::vector<RankedVideo> swapped = {two[1], two[0]};
  EXPECT_DOUBLE_EQ(Evaluate(swapped, 0.5).nmsd, r.nmsd);
}

TEST(EvaluateTest, UnreachableVideoIsSkippedWithWarning) {
  VideoRecord ok = UnitVideo(4, "ok");
  ok.gifs = {{0, 1, 0.0, ""}};
  VideoRecord gap;
  gap.id = "gap";
  gap.duration = 10;
  gap.segments = {{0, 1}, {9, 10}};
  gap.gifs = {{2, 8, 0.0, ""}};
  gap.labels = {Label::kPositive, Label::kNegative};
  const std::vector<RankedVideo> vs = {Ranked(ok, {4, 3, 2, 1}), Ranked(gap, {1, 0})};
  const MetricReport r = Evaluate(vs, 0.5);
  EXPECT_EQ(r.warnings, 1u);
  EXPECT_EQ(r.nmsd_count, 1u);
  EXPECT_FALSE(r.per_video[1].nmsd.has_value());
  EXPECT_TRUE(r.per_video[1].ap.has_value());
  // Only "ok" counts: (1 - 0.5) / (4 - 0.5).
  EXPECT_NEAR(r.nmsd, 1.0 / 7.0, 1e-15);
  EXPECT_THROW(Evaluate(std::vector<RankedVideo>{}, 0.5), Error);
}

TEST(UpperBoundTest, AgreeingCreatorsHitTheMinimum) {
  VideoRecord v = UnitVideo(10);
  v.gifs = {{2, 6, 0.5, "a"}, {2, 6, 0.5, "b"}};
  const MetricReport r = UpperBound(std::vector<VideoRecord>{v}, 0.5);
  EXPECT_NEAR(r.nmsd, 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(r.map, 1.0);
}

TEST(UpperBoundTest, DisjointCreatorsMatchBruteForce) {
  VideoRecord v = UnitVideo(10);
  v.gifs = {{0, 2, 0.5, "a"}, {6, 8, 0.5, "b"}};
  const MetricReport r = UpperBound(std::vector<VideoRecord>{v}, 0.5);
  // Each held-out GIF ranks its own span first and is scored on the other.
  const std::vector<double> score_a = {1, 1, 0, 0, 0, 0, 0, 0, 0, 0};
  const std::vector<double> score_b = {0, 0, 0, 0, 0, 0, 1, 1, 0, 0};
  const double expected =
      (oracle::NmsdByHand(v.segments, score_a, 10, {6, 8}, 0.5) +
       oracle::NmsdByHand(v.segments, score_b, 10, {0, 2}, 0.5)) /
      2;
  EXPECT_NEAR(expected, 4.0 / 9.0, 1e-15);
  EXPECT_NEAR(r.nmsd, expected, 1e-15);
}

TEST(UpperBoundTest, NeedsTwoCreators) {
  VideoRecord v = UnitVideo(5);
  v.gifs = {{0, 2, 0.5, "a"}, {3, 4, 0.5, "a"}};
  EXPECT_V2G_ERROR(UpperBound(std::vector<VideoRecord>{v}, 0.5), kInsufficientCreators);
  EXPECT_TRUE(SelectMultiCreatorVideos(std::vector<VideoRecord>{v}).empty());
  v.gifs[1].creator_id = "b";
  EXPECT_EQ(SelectMultiCreatorVideos(std::vector<VideoRecord>{v}).size(), 1u);
}

TEST(ReportTest, JsonAndCsv) {
  MetricReport r;
  r.nmsd = 0.25;
  r.map = 0.5;
  r.per_video = {{"x", 0.25, std::nullopt}, {"y", std::nullopt, 0.5}};
  const std::string json = ReportToJson(r);
  EXPECT_NE(json.find("\"nmsd\": 0.25"), std::string::npos);
  EXPECT_NE(json.find("\"ap\": null"), std::string::npos);
  EXPECT_EQ(ReportToCsv(r), "video_id,nmsd,ap\nx,0.25,\ny,,0.5\n");
}

}  // namespace
}  // namespace v2g
