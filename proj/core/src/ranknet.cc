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

#include "v2g/ranknet.h"

#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>

#include "json.hpp"
#include "v2g/error.h"

namespace v2g {
namespace {

using nlohmann::json;

constexpr std::array<char, 4> kModelMagic = {'V', '2', 'G', 'M'};
constexpr int kModelVersion = 1;

Eigen::MatrixXd DropoutMask(Eigen::Index rows, Eigen::Index cols, double rate,
                            Rng& rng) {
  const double keep_scale = 1.0 / (1.0 - rate);
  Eigen::MatrixXd mask(rows, cols);
  // Column-major fill order, so masks depend only on (rows, cols, stream).
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      mask(r, c) = rng.Uniform() < rate ? 0.0 : keep_scale;
    }
  }
  return mask;
}

void PutU32(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xff),
                         static_cast<char>((v >> 8) & 0xff),
                         static_cast<char>((v >> 16) & 0xff),
                         static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes, 4);
}

std::uint32_t GetU32(const std::string& bytes, std::size_t pos) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[pos])) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[pos + 1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[pos + 2])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[pos + 3])) << 24;
}

void PutF32(std::ostream& out, double v) {
  PutU32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
}

json ConfigToJson(const NetConfig& c) {
  return {{"input_dim", c.input_dim},
          {"hidden", c.hidden},
          {"dropout_input", c.dropout_input},
          {"dropout_hidden1", c.dropout_hidden1},
          {"include_biases", c.include_biases}};
}

NetConfig ConfigFromJson(const json& j) {
  NetConfig c;
  c.input_dim = j.at("input_dim").get<std::size_t>();
  c.hidden = j.at("hidden").get<std::vector<std::size_t>>();
  c.dropout_input = j.at("dropout_input").get<double>();
  c.dropout_hidden1 = j.at("dropout_hidden1").get<double>();
  c.include_biases = j.at("include_biases").get<bool>();
  return c;
}

// (rows, cols, has_bias) of every layer implied by a config.
struct LayerShape {
  std::size_t rows;
  std::size_t cols;
  bool bias;
};

std::vector<LayerShape> LayerShapes(const NetConfig& config) {
  std::vector<LayerShape> shapes;
  std::size_t fan_in = config.input_dim;
  for (std::size_t width : config.hidden) {
    shapes.push_back({width, fan_in, config.include_biases});
    fan_in = width;
  }
  shapes.push_back({1, fan_in, true});
  return shapes;
}

}  // namespace

void ValidateNetConfig(const NetConfig& config) {
  if (config.input_dim == 0) {
    throw Error(ErrorCode::kInvalidArgument, "input_dim must be >= 1");
  }
  if (config.hidden.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one hidden layer");
  }
  for (std::size_t h : config.hidden) {
    if (h == 0) throw Error(ErrorCode::kInvalidArgument, "hidden width must be >= 1");
  }
  for (double p : {config.dropout_input, config.dropout_hidden1}) {
    if (!(p >= 0.0 && p < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "dropout must lie in [0, 1)");
    }
  }
}

RankNetModel::RankNetModel(NetConfig config, std::vector<DenseLayer> layers)
    : config_(std::move(config)), layers_(std::move(layers)) {
  ValidateNetConfig(config_);
  const auto shapes = LayerShapes(config_);
  if (shapes.size() != layers_.size()) {
    throw Error(ErrorCode::kDimMismatch, "layer count does not match config");
  }
  for (std::size_t l = 0; l < shapes.size(); ++l) {
    const DenseLayer& layer = layers_[l];
    if (static_cast<std::size_t>(layer.weight.rows()) != shapes[l].rows ||
        static_cast<std::size_t>(layer.weight.cols()) != shapes[l].cols ||
        static_cast<std::size_t>(layer.bias.size()) !=
            (shapes[l].bias ? shapes[l].rows : 0)) {
      throw Error(ErrorCode::kDimMismatch,
                  "layer " + std::to_string(l) + " shape does not match config");
    }
    if (!layer.weight.allFinite() || !layer.bias.allFinite()) {
      throw Error(ErrorCode::kNonFiniteValue, "model parameters must be finite");
    }
  }
}

void RankNetModel::RoundToFloat() {
  ++revision_;
  for (DenseLayer& layer : layers_) {
    layer.weight = layer.weight.cast<float>().cast<double>();
    layer.bias = layer.bias.cast<float>().cast<double>();
  }
}

bool RankNetModel::ParametersEqual(const RankNetModel& other) const {
  if (!(config_ == other.config_) || layers_.size() != other.layers_.size()) {
    return false;
  }
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    if (layers_[l].weight != other.layers_[l].weight ||
        layers_[l].bias != other.layers_[l].bias) {
      return false;
    }
  }
  return true;
}

RankNetModel InitModel(const NetConfig& config, Rng& rng) {
  ValidateNetConfig(config);
  std::vector<DenseLayer> layers;
  for (const LayerShape& shape : LayerShapes(config)) {
    const double a = std::sqrt(6.0 / static_cast<double>(shape.rows + shape.cols));
    DenseLayer layer;
    layer.weight.resize(static_cast<Eigen::Index>(shape.rows),
                        static_cast<Eigen::Index>(shape.cols));
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
        layer.weight(r, c) = static_cast<float>(rng.Uniform(-a, a));
      }
    }
    layer.bias = Eigen::VectorXd::Zero(
        shape.bias ? static_cast<Eigen::Index>(shape.rows) : 0);
    layers.push_back(std::move(layer));
  }
  return RankNetModel(config, std::move(layers));
}

std::size_t ParamCount(const NetConfig& config) {
  ValidateNetConfig(config);
  std::size_t total = 0;
  for (const LayerShape& s : LayerShapes(config)) {
    total += s.rows * s.cols + (s.bias ? s.rows : 0);
  }
  return total;
}

BatchForward ForwardBatch(const RankNetModel& model,
                          const Eigen::MatrixXd& inputs, ForwardMode mode,
                          Rng* rng) {
  const NetConfig& config = model.config();
  if (static_cast<std::size_t>(inputs.rows()) != config.input_dim) {
    throw Error(ErrorCode::kDimMismatch,
                "input has " + std::to_string(inputs.rows()) +
                    " features, model expects " +
                    std::to_string(config.input_dim));
  }
  const bool train = mode == ForwardMode::kTrain;
  if (train && rng == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "train mode needs an rng");
  }
  const auto layers = model.layers();
  const std::size_t num_hidden = layers.size() - 1;

  BatchForward out;
  ForwardCache& cache = out.cache;
  cache.model = &model;
  cache.revision = model.revision();

  Eigen::MatrixXd activation = inputs;
  if (train && config.dropout_input > 0.0) {
    cache.input_mask =
        DropoutMask(inputs.rows(), inputs.cols(), config.dropout_input, *rng);
    activation = activation.cwiseProduct(cache.input_mask);
  }
  for (std::size_t l = 0; l < num_hidden; ++l) {
    cache.inputs.push_back(activation);
    Eigen::MatrixXd z = layers[l].weight * activation;
    if (layers[l].bias.size() > 0) z.colwise() += layers[l].bias;
    activation = z.cwiseMax(0.0);
    cache.pre_activations.push_back(std::move(z));
    if (l == 0 && train && config.dropout_hidden1 > 0.0) {
      cache.hidden1_mask = DropoutMask(activation.rows(), activation.cols(),
                                       config.dropout_hidden1, *rng);
      activation = activation.cwiseProduct(cache.hidden1_mask);
    }
  }
  cache.inputs.push_back(activation);
  const DenseLayer& head = layers.back();
  out.scores = (head.weight * activation).transpose();
  out.scores.array() += head.bias(0);
  return out;
}

SingleForward Forward(const RankNetModel& model, std::span<const double> x,
                      ForwardMode mode, Rng* rng) {
  const Eigen::MatrixXd column = Eigen::Map<const Eigen::VectorXd>(
      x.data(), static_cast<Eigen::Index>(x.size()));
  BatchForward batch = ForwardBatch(model, column, mode, rng);
  return {batch.scores(0), std::move(batch.cache)};
}

ModelGradients Backward(const RankNetModel& model, const ForwardCache& cache,
                        const Eigen::VectorXd& d_scores) {
  if (cache.model != &model || cache.revision != model.revision()) {
    throw Error(ErrorCode::kStaleCache,
                "forward cache does not belong to the current parameters");
  }
  const auto layers = model.layers();
  const std::size_t num_hidden = layers.size() - 1;
  if (cache.inputs.size() != layers.size() ||
      d_scores.size() != cache.inputs.back().cols()) {
    throw Error(ErrorCode::kDimMismatch, "gradient batch size mismatch");
  }

  ModelGradients grads;
  grads.layers.resize(layers.size());

  // Upstream gradient as a 1 x batch row.
  Eigen::MatrixXd upstream = d_scores.transpose();
  DenseLayer& head = grads.layers.back();
  head.weight = upstream * cache.inputs.back().transpose();
  head.bias = Eigen::VectorXd::Constant(1, d_scores.sum());
  Eigen::MatrixXd d_activation = layers.back().weight.transpose() * upstream;

  for (std::size_t l = num_hidden; l-- > 0;) {
    if (l == 0 && cache.hidden1_mask.size() > 0) {
      d_activation = d_activation.cwiseProduct(cache.hidden1_mask);
    }
    const Eigen::MatrixXd& z = cache.pre_activations[l];
    const Eigen::MatrixXd dz =
        d_activation.cwiseProduct((z.array() > 0.0).cast<double>().matrix());
    DenseLayer& g = grads.layers[l];
    g.weight = dz * cache.inputs[l].transpose();
    if (layers[l].bias.size() > 0) {
      g.bias = dz.rowwise().sum();
    } else {
      g.bias.resize(0);
    }
    if (l > 0) d_activation = layers[l].weight.transpose() * dz;
  }
  return grads;
}

ModelGradients Backward(const RankNetModel& model, const ForwardCache& cache,
                        double d_score) {
  return Backward(model, cache, Eigen::VectorXd::Constant(1, d_score));
}

void ValidateEnsemble(const Ensemble& ensemble) {
  if (ensemble.models.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "ensemble is empty");
  }
  for (const RankNetModel& m : ensemble.models) {
    if (m.config().input_dim != ensemble.models.front().config().input_dim) {
      throw Error(ErrorCode::kDimMismatch, "ensemble members disagree on input_dim");
    }
  }
}

double EnsembleScore(const Ensemble& ensemble, std::span<const double> x) {
  ValidateEnsemble(ensemble);
  double total = 0.0;
  for (const RankNetModel& m : ensemble.models) {
    total += Forward(m, x, ForwardMode::kEval).score;
  }
  return total / static_cast<double>(ensemble.models.size());
}

std::size_t ContextDim(int num_categories) {
  return static_cast<std::size_t>(num_categories) + kTagEmbeddingDim + 3;
}

std::vector<double> BuildContextVector(const ContextMeta& meta,
                                       const SegmentSpan& segment,
                                       const VideoRecord& video,
                                       std::size_t segment_index) {
  ValidateContext(meta);
  if (!(video.duration > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "video duration must be > 0");
  }
  std::vector<double> out(ContextDim(meta.num_categories), 0.0);
  out[static_cast<std::size_t>(meta.category_index)] = 1.0;
  std::size_t k = static_cast<std::size_t>(meta.num_categories);
  for (float e : meta.tag_embedding) out[k++] = e;
  out[k++] = segment.start;
  out[k++] = static_cast<double>(segment_index);
  out[k++] = segment.start / video.duration;
  return out;
}

Eigen::MatrixXd BuildInputs(const LabeledVideo& video, bool use_context) {
  const FeatureMatrix& f = video.features;
  const std::size_t n = f.num_segments();
  std::size_t rows = f.dim();
  if (use_context) {
    if (!video.record.context) {
      throw Error(ErrorCode::kInvalidArgument,
                  "video '" + video.record.id + "' has no context metadata");
    }
    rows += ContextDim(video.record.context->num_categories);
  }
  if (video.record.segments.size() != n) {
    throw Error(ErrorCode::kDimMismatch,
                "video '" + video.record.id + "' segment/feature count mismatch");
  }
  Eigen::MatrixXd inputs(static_cast<Eigen::Index>(rows),
                         static_cast<Eigen::Index>(n));
  for (std::size_t s = 0; s < n; ++s) {
    const auto row = f.row(s);
    for (std::size_t j = 0; j < row.size(); ++j) {
      inputs(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(s)) = row[j];
    }
    if (use_context) {
      const auto ctx = BuildContextVector(*video.record.context,
                                          video.record.segments[s],
                                          video.record, s);
      for (std::size_t j = 0; j < ctx.size(); ++j) {
        inputs(static_cast<Eigen::Index>(f.dim() + j),
               static_cast<Eigen::Index>(s)) = ctx[j];
      }
    }
  }
  return inputs;
}

std::vector<double> ScoreSegments(const Ensemble& ensemble,
                                  const Eigen::MatrixXd& inputs) {
  ValidateEnsemble(ensemble);
  Eigen::VectorXd total = Eigen::VectorXd::Zero(inputs.cols());
  for (const RankNetModel& m : ensemble.models) {
    total += ForwardBatch(m, inputs, ForwardMode::kEval).scores;
  }
  total /= static_cast<double>(ensemble.models.size());
  return std::vector<double>(total.data(), total.data() + total.size());
}

std::vector<double> ScoreSegments(const Ensemble& ensemble,
                                  const LabeledVideo& video) {
  return ScoreSegments(ensemble, BuildInputs(video, ensemble.use_context));
}

void SaveModel(const RankNetModel& model, const std::filesystem::path& path) {
  json header = {{"version", kModelVersion}, {"config", ConfigToJson(model.config())}};
  json shapes = json::array();
  for (const DenseLayer& layer : model.layers()) {
    shapes.push_back({{"rows", layer.weight.rows()},
                      {"cols", layer.weight.cols()},
                      {"bias", layer.bias.size()}});
  }
  header["layers"] = std::move(shapes);
  const std::string text = header.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out.write(kModelMagic.data(), kModelMagic.size());
  PutU32(out, static_cast<std::uint32_t>(text.size()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const DenseLayer& layer : model.layers()) {
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
        PutF32(out, layer.weight(r, c));
      }
    }
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) PutF32(out, layer.bias(r));
  }
  out.flush();
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed: " + path.string());
}

RankNetModel LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  if (bytes.size() < 8 || !std::equal(kModelMagic.begin(), kModelMagic.end(),
                                      bytes.begin())) {
    throw Error(ErrorCode::kFormatError, path.string() + " is not a V2GM model");
  }
  const std::size_t header_len = GetU32(bytes, 4);
  if (bytes.size() < 8 + header_len) {
    throw Error(ErrorCode::kFormatError, "model header is truncated");
  }
  NetConfig config;
  std::vector<LayerShape> declared;
  try {
    const json header = json::parse(bytes.substr(8, header_len));
    if (header.at("version").get<int>() != kModelVersion) {
      throw Error(ErrorCode::kFormatError, "unsupported model version");
    }
    config = ConfigFromJson(header.at("config"));
    for (const auto& l : header.at("layers")) {
      declared.push_back({l.at("rows").get<std::size_t>(),
                          l.at("cols").get<std::size_t>(),
                          l.at("bias").get<std::size_t>() > 0});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormatError, std::string("bad model header: ") + e.what());
  }
  try {
    ValidateNetConfig(config);
  } catch (const Error& e) {
    throw Error(ErrorCode::kFormatError, e.what());
  }
  const auto expected = LayerShapes(config);
  if (declared.size() != expected.size()) {
    throw Error(ErrorCode::kFormatError, "layer count disagrees with config");
  }
  for (std::size_t l = 0; l < expected.size(); ++l) {
    if (declared[l].rows != expected[l].rows ||
        declared[l].cols != expected[l].cols ||
        declared[l].bias != expected[l].bias) {
      throw Error(ErrorCode::kFormatError,
                  "layer " + std::to_string(l) + " shape disagrees with config");
    }
  }

  std::size_t pos = 8 + header_len;
  const auto next = [&]() -> double {
    if (pos + 4 > bytes.size()) {
      throw Error(ErrorCode::kFormatError, "model parameters are truncated");
    }
    const float v = std::bit_cast<float>(GetU32(bytes, pos));
    pos += 4;
    return v;
  };
  std::vector<DenseLayer> layers;
  for (const LayerShape& s : expected) {
    DenseLayer layer;
    layer.weight.resize(static_cast<Eigen::Index>(s.rows),
                        static_cast<Eigen::Index>(s.cols));
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) layer.weight(r, c) = next();
    }
    layer.bias.resize(s.bias ? static_cast<Eigen::Index>(s.rows) : 0);
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) layer.bias(r) = next();
    layers.push_back(std::move(layer));
  }
  if (pos != bytes.size()) {
    throw Error(ErrorCode::kFormatError, "trailing bytes after model parameters");
  }
  try {
    return RankNetModel(config, std::move(layers));
  } catch (const Error& e) {
    throw Error(ErrorCode::kFormatError, e.what());
  }
}

void SaveEnsemble(const Ensemble& ensemble, const std::filesystem::path& dir) {
  ValidateEnsemble(ensemble);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + dir.string());
  json manifest = {{"use_context", ensemble.use_context}};
  json members = json::array();
  for (std::size_t m = 0; m < ensemble.models.size(); ++m) {
    const std::string name = "member_" + std::to_string(m) + ".v2gm";
    SaveModel(ensemble.models[m], dir / name);
    members.push_back(name);
  }
  manifest["members"] = std::move(members);
  std::ofstream out(dir / "ensemble.json", std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write ensemble manifest");
  out << manifest.dump(2) << '\n';
}

Ensemble LoadEnsemble(const std::filesystem::path& dir) {
  std::ifstream in(dir / "ensemble.json");
  if (!in) {
    throw Error(ErrorCode::kIoFailure, "no ensemble.json in " + dir.string());
  }
  Ensemble ensemble;
  try {
    const json manifest = json::parse(in);
    ensemble.use_context = manifest.value("use_context", false);
    for (const auto& name : manifest.at("members")) {
      ensemble.models.push_back(LoadModel(dir / name.get<std::string>()));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormatError, std::string("bad ensemble.json: ") + e.what());
  }
  ValidateEnsemble(ensemble);
  return ensemble;
}

}  // namespace v2g
