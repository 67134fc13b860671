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

#include <cstdint>
#include <vector>

#include <Eigen/Core>
#include <benchmark/benchmark.h>

#include "v2g/align.h"
#include "v2g/eval.h"
#include "v2g/phash.h"
#include "v2g/ranknet.h"
#include "v2g/rng.h"
#include "v2g/shotseg.h"

namespace v2g {
namespace {

GrayFrame NoiseFrame(int width, int height, Rng& rng) {
  std::vector<std::uint8_t> px(static_cast<std::size_t>(width) * height);
  for (auto& p : px) p = static_cast<std::uint8_t>(rng.UniformInt(256));
  return GrayFrame(width, height, std::move(px));
}

void BM_PHash(benchmark::State& state) {
  Rng rng(1);
  const GrayFrame frame = NoiseFrame(static_cast<int>(state.range(0)),
                                     static_cast<int>(state.range(0)) * 3 / 4, rng);
  for (auto _ : state) benchmark::DoNotOptimize(ComputePHash(frame));
}
BENCHMARK(BM_PHash)->Arg(64)->Arg(320)->Arg(640);

void BM_AlignGif(benchmark::State& state) {
  Rng rng(2);
  HashTrack video;
  for (int i = 0; i < state.range(0); ++i) {
    video.hashes.push_back({rng.NextU64()});
    video.timestamps.push_back(i / 15.0);
  }
  HashTrack gif;
  for (int i = 0; i < 45; ++i) {
    gif.hashes.push_back(video.hashes[static_cast<std::size_t>(state.range(0) / 2 + i)]);
    gif.timestamps.push_back(i / 15.0);
  }
  for (auto _ : state) benchmark::DoNotOptimize(AlignGif(gif, video));
}
BENCHMARK(BM_AlignGif)->Arg(900)->Arg(9000);

void BM_SegmentSequence(benchmark::State& state) {
  Rng rng(3);
  FrameSequence seq;
  seq.num_frames = static_cast<std::size_t>(state.range(0));
  seq.dim = 16;
  for (std::size_t i = 0; i < seq.num_frames * seq.dim; ++i) {
    seq.values.push_back(rng.Normal() + static_cast<double>((i / seq.dim) / 40));
  }
  const double penalty = DefaultPenalty(seq);
  for (auto _ : state) benchmark::DoNotOptimize(SegmentSequence(seq, penalty, 5));
}
BENCHMARK(BM_SegmentSequence)->Arg(250)->Arg(1000);

RankNetModel BenchModel(std::size_t input_dim) {
  NetConfig config;
  config.input_dim = input_dim;
  Rng rng(4);
  return InitModel(config, rng);
}

void BM_ForwardBackward(benchmark::State& state) {
  const RankNetModel model = BenchModel(static_cast<std::size_t>(state.range(0)));
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(state.range(0), 100);
  const Eigen::VectorXd d = Eigen::VectorXd::Ones(100);
  Rng rng(5);
  for (auto _ : state) {
    const BatchForward f = ForwardBatch(model, x, ForwardMode::kTrain, &rng);
    benchmark::DoNotOptimize(Backward(model, f.cache, d));
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_ForwardBackward)->Arg(64)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_EvalForward(benchmark::State& state) {
  const RankNetModel model = BenchModel(4096);
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(4096, state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ForwardBatch(model, x, ForwardMode::kEval).scores);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EvalForward)->Arg(1)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Nmsd(benchmark::State& state) {
  Rng rng(6);
  RankedVideo r;
  r.video.id = "v";
  double t = 0.0;
  for (int i = 0; i < state.range(0); ++i) {
    const double len = rng.Uniform(1.0, 3.0);
    r.video.segments.push_back({t, t + len});
    r.scores.push_back(rng.Normal());
    t += len;
  }
  r.video.duration = t;
  const SegmentSpan gt{0.4 * t, 0.45 * t};
  for (auto _ : state) benchmark::DoNotOptimize(Nmsd(r, gt, kDefaultRecallAlpha));
}
BENCHMARK(BM_Nmsd)->Arg(20)->Arg(500);

}  // namespace
}  // namespace v2g

BENCHMARK_MAIN();
