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

#ifndef V2G_RANKNET_H_
#define V2G_RANKNET_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "v2g/dataset_io.h"
#include "v2g/rng.h"
#include "v2g/types.h"

namespace v2g {

struct NetConfig {
  std::size_t input_dim = 0;
  std::vector<std::size_t> hidden = {512, 128};
  // Drop probabilities (inverted dropout): on the input, and on the output of
  // the first hidden layer.
  double dropout_input = 0.8;
  double dropout_hidden1 = 0.25;
  // Biases on the hidden layers. The linear output unit always has one.
  bool include_biases = true;

  friend bool operator==(const NetConfig&, const NetConfig&) = default;
};

void ValidateNetConfig(const NetConfig& config);

// Weight is (out x in); bias is empty when the layer has none.
struct DenseLayer {
  Eigen::MatrixXd weight;
  Eigen::VectorXd bias;
};

// Scoring MLP h: R^d -> R. Hidden layers are ReLU; the output is one linear
// unit. The revision counter advances on every mutable access so forward
// caches can detect that the parameters moved under them.
class RankNetModel {
 public:
  RankNetModel(NetConfig config, std::vector<DenseLayer> layers);

  const NetConfig& config() const { return config_; }
  std::span<const DenseLayer> layers() const { return layers_; }
  std::vector<DenseLayer>& mutable_layers() {
    ++revision_;
    return layers_;
  }
  std::uint64_t revision() const { return revision_; }

  // Rounds every parameter to the nearest float32, the precision of the
  // model file.
  void RoundToFloat();

  bool ParametersEqual(const RankNetModel& other) const;

 private:
  NetConfig config_;
  std::vector<DenseLayer> layers_;
  std::uint64_t revision_ = 0;
};

// Glorot-uniform weights, U(-a, a) with a = sqrt(6 / (fan_in + fan_out)),
// drawn as float32 values; biases zero.
RankNetModel InitModel(const NetConfig& config, Rng& rng);

std::size_t ParamCount(const NetConfig& config);

enum class ForwardMode { kEval, kTrain };

// Everything backward needs from one forward pass over a batch.
struct ForwardCache {
  const RankNetModel* model = nullptr;
  std::uint64_t revision = 0;
  std::vector<Eigen::MatrixXd> inputs;  // input of each layer, after dropout
  std::vector<Eigen::MatrixXd> pre_activations;  // hidden layers only
  Eigen::MatrixXd input_mask;    // empty in eval mode
  Eigen::MatrixXd hidden1_mask;  // empty in eval mode
};

struct BatchForward {
  Eigen::VectorXd scores;
  ForwardCache cache;
};

// Columns of `inputs` are samples. Train mode needs `rng` for dropout masks.
BatchForward ForwardBatch(const RankNetModel& model,
                          const Eigen::MatrixXd& inputs, ForwardMode mode,
                          Rng* rng = nullptr);

struct SingleForward {
  double score = 0.0;
  ForwardCache cache;
};

SingleForward Forward(const RankNetModel& model, std::span<const double> x,
                      ForwardMode mode = ForwardMode::kEval,
                      Rng* rng = nullptr);

// Parameter gradients with the same shapes as the model's layers.
struct ModelGradients {
  std::vector<DenseLayer> layers;
};

// Gradient of sum_i d_scores[i] * score_i with respect to every parameter,
// honouring the dropout masks recorded in `cache`. Throws kStaleCache if the
// model changed after the forward pass.
ModelGradients Backward(const RankNetModel& model, const ForwardCache& cache,
                        const Eigen::VectorXd& d_scores);
ModelGradients Backward(const RankNetModel& model, const ForwardCache& cache,
                        double d_score);

struct Ensemble {
  std::vector<RankNetModel> models;
  bool use_context = false;
};

void ValidateEnsemble(const Ensemble& ensemble);
double EnsembleScore(const Ensemble& ensemble, std::span<const double> x);

// Context block appended to a segment's features:
//   one-hot(category, num_categories) | tag embedding (300) |
//   segment start (s) | segment ordinal | start / video duration.
std::size_t ContextDim(int num_categories);
std::vector<double> BuildContextVector(const ContextMeta& meta,
                                       const SegmentSpan& segment,
                                       const VideoRecord& video,
                                       std::size_t segment_index);

// Network input for every segment of a video, one column per segment, with
// the context block appended when `use_context` is set.
Eigen::MatrixXd BuildInputs(const LabeledVideo& video, bool use_context);

std::vector<double> ScoreSegments(const Ensemble& ensemble,
                                  const Eigen::MatrixXd& inputs);
std::vector<double> ScoreSegments(const Ensemble& ensemble,
                                  const LabeledVideo& video);

// Model file: "V2GM" | u32 LE header length | JSON header (config and layer
// shapes) | float32 LE parameters, layer by layer, weights row-major then
// bias.
void SaveModel(const RankNetModel& model, const std::filesystem::path& path);
RankNetModel LoadModel(const std::filesystem::path& path);

// Directory with ensemble.json plus one model file per member.
void SaveEnsemble(const Ensemble& ensemble, const std::filesystem::path& dir);
Ensemble LoadEnsemble(const std::filesystem::path& dir);

}  // namespace v2g

#endif  // V2G_RANKNET_H_
