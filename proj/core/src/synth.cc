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

#include "v2g/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "v2g/error.h"
#include "v2g/loss.h"
#include "v2g/rng.h"

namespace v2g {
namespace {

std::string VideoId(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "vid%05zu", index);
  return buf;
}

}  // namespace

Dataset SynthDataset::ToDataset() const {
  Dataset dataset;
  dataset.reserve(videos.size());
  for (const auto& v : videos) dataset.push_back(v.video);
  return dataset;
}

SynthDataset SynthesizeDataset(const SynthOptions& options) {
  if (options.num_videos == 0 || options.segs_per_video == 0 ||
      options.dim == 0) {
    throw Error(ErrorCode::kInvalidArgument, "synth counts must be >= 1");
  }
  if (!(options.noise_level >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "noise_level must be >= 0");
  }
  if (!(options.outlier_fraction >= 0.0 && options.outlier_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "outlier_fraction must lie in [0, 1)");
  }
  if (options.num_categories < 1) {
    throw Error(ErrorCode::kInvalidArgument, "num_categories must be >= 1");
  }
  const std::size_t num_pos =
      std::min(options.segs_per_video,
               options.positives_per_video > 0
                   ? options.positives_per_video
                   : std::max<std::size_t>(1, options.segs_per_video / 10));

  const Rng root(options.seed);
  SynthDataset out;

  Rng weight_rng = root.Split(0);
  out.hidden_weights.resize(options.dim);
  double norm = 0.0;
  for (double& w : out.hidden_weights) {
    w = weight_rng.Normal();
    norm += w * w;
  }
  norm = std::sqrt(norm);
  for (double& w : out.hidden_weights) w /= norm;

  // Raw viewcounts per GIF, normalized once every video exists.
  std::vector<double> views;

  for (std::size_t v = 0; v < options.num_videos; ++v) {
    Rng rng = root.Split(v + 1);
    const std::size_t n = options.segs_per_video;
    const std::size_t d = options.dim;

    const double offset = options.video_offset_scale * rng.Normal();
    std::vector<float> values(n * d);
    std::vector<double> planted(n);
    std::vector<double> noisy(n);
    for (std::size_t s = 0; s < n; ++s) {
      double score = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const float x =
            static_cast<float>(offset * out.hidden_weights[j] + rng.Normal());
        values[s * d + j] = x;
        score += out.hidden_weights[j] * static_cast<double>(x);
      }
      planted[s] = score;
    }
    for (std::size_t s = 0; s < n; ++s) {
      noisy[s] = planted[s] + options.noise_level * rng.Normal();
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return noisy[a] > noisy[b];
                     });
    std::vector<Label> labels(n, Label::kNegative);
    for (std::size_t r = 0; r < num_pos; ++r) labels[order[r]] = Label::kPositive;

    const bool permuted = rng.Bernoulli(options.outlier_fraction);
    if (permuted) rng.Shuffle(std::span<Label>(labels));

    VideoRecord record;
    record.id = VideoId(v);
    double t = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      const double len = rng.Uniform(1.0, 3.0);
      record.segments.push_back({t, t + len});
      t += len;
    }
    record.duration = t;
    for (std::size_t s = 0; s < n; ++s) {
      if (labels[s] != Label::kPositive) continue;
      GifSpan gif;
      gif.start = record.segments[s].start;
      gif.end = record.segments[s].end;
      gif.creator_id = "synth";
      record.gifs.push_back(gif);
      views.push_back(std::exp((permuted ? 5.0 : 8.0) + 1.5 * rng.Normal()));
    }
    record.labels = labels;

    ContextMeta context;
    context.num_categories = options.num_categories;
    context.category_index = static_cast<int>(
        rng.UniformInt(static_cast<std::uint64_t>(options.num_categories)));
    context.tag_embedding.resize(kTagEmbeddingDim);
    for (float& e : context.tag_embedding) {
      e = static_cast<float>(0.1 * rng.Normal());
    }
    record.context = std::move(context);

    out.num_permuted += permuted ? 1 : 0;
    out.videos.push_back(
        {LabeledVideo{std::move(record), FeatureMatrix(n, d, std::move(values))},
         std::move(planted), permuted});
  }

  const std::vector<double> popularity = NormalizeViewcounts(views);
  std::size_t next = 0;
  for (auto& v : out.videos) {
    for (auto& gif : v.video.record.gifs) gif.popularity = popularity[next++];
  }
  return out;
}

}  // namespace v2g
