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

#include "v2g/dataset_io.h"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "json.hpp"
#include "v2g/error.h"

namespace v2g {
namespace {

using nlohmann::json;

constexpr std::array<char, 4> kFeatureMagic = {'V', '2', 'G', 'F'};

void PutU32(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xff),
                         static_cast<char>((v >> 8) & 0xff),
                         static_cast<char>((v >> 16) & 0xff),
                         static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes, 4);
}

bool GetU32(std::istream& in, std::uint32_t* v) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4)) return false;
  *v = static_cast<std::uint32_t>(bytes[0]) |
       static_cast<std::uint32_t>(bytes[1]) << 8 |
       static_cast<std::uint32_t>(bytes[2]) << 16 |
       static_cast<std::uint32_t>(bytes[3]) << 24;
  return true;
}

const char* LabelToken(Label label) {
  switch (label) {
    case Label::kPositive: return "pos";
    case Label::kNegative: return "neg";
    case Label::kIgnored: return "ign";
  }
  return "ign";
}

Label ParseLabel(const std::string& token) {
  if (token == "pos") return Label::kPositive;
  if (token == "neg") return Label::kNegative;
  if (token == "ign") return Label::kIgnored;
  throw Error(ErrorCode::kFormatError, "unknown label '" + token + "'");
}

}  // namespace

FeatureMatrix DecodeFeatures(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size())) {
    throw Error(ErrorCode::kTruncatedFile, "missing V2GF magic");
  }
  if (magic != kFeatureMagic) {
    throw Error(ErrorCode::kMagicMismatch, "not a V2GF feature file");
  }
  std::uint32_t version = 0, rows = 0, cols = 0;
  if (!GetU32(in, &version) || !GetU32(in, &rows) || !GetU32(in, &cols)) {
    throw Error(ErrorCode::kTruncatedFile, "V2GF header is incomplete");
  }
  if (version != kFeatureFileVersion) {
    throw Error(ErrorCode::kFormatError,
                "unsupported V2GF version " + std::to_string(version));
  }
  if (rows == 0 || cols == 0) {
    throw Error(ErrorCode::kFormatError, "V2GF declares an empty matrix");
  }
  const std::size_t count = static_cast<std::size_t>(rows) * cols;
  std::vector<float> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t bits = 0;
    if (!GetU32(in, &bits)) {
      throw Error(ErrorCode::kTruncatedFile,
                  "V2GF declares " + std::to_string(count) +
                      " floats, file ends after " + std::to_string(i));
    }
    values[i] = std::bit_cast<float>(bits);
  }
  return FeatureMatrix(rows, cols, std::move(values));
}

FeatureMatrix ReadFeatures(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  }
  return DecodeFeatures(in);
}

void EncodeFeatures(const FeatureMatrix& matrix, std::ostream& out) {
  out.write(kFeatureMagic.data(), kFeatureMagic.size());
  PutU32(out, kFeatureFileVersion);
  PutU32(out, static_cast<std::uint32_t>(matrix.num_segments()));
  PutU32(out, static_cast<std::uint32_t>(matrix.dim()));
  for (float v : matrix.values()) PutU32(out, std::bit_cast<std::uint32_t>(v));
}

void WriteFeatures(const FeatureMatrix& matrix,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  }
  EncodeFeatures(matrix, out);
  out.flush();
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed: " + path.string());
}

VideoRecord ParseVideoRecord(const std::string& json_line) {
  VideoRecord video;
  try {
    const json j = json::parse(json_line);
    video.id = j.at("id").get<std::string>();
    video.duration = j.at("duration").get<double>();
    for (const auto& s : j.at("segments")) {
      if (!s.is_array() || s.size() != 2) {
        throw Error(ErrorCode::kFormatError, "segment must be [start, end]");
      }
      video.segments.push_back({s[0].get<double>(), s[1].get<double>()});
    }
    if (j.contains("gifs")) {
      for (const auto& g : j.at("gifs")) {
        GifSpan gif;
        gif.start = g.at("start").get<double>();
        gif.end = g.at("end").get<double>();
        gif.popularity = g.value("popularity", 0.0);
        gif.creator_id = g.value("creator_id", std::string());
        video.gifs.push_back(std::move(gif));
      }
    }
    if (j.contains("labels") && !j.at("labels").is_null()) {
      for (const auto& l : j.at("labels")) {
        video.labels.push_back(ParseLabel(l.get<std::string>()));
      }
    }
    if (j.contains("context") && !j.at("context").is_null()) {
      const json& c = j.at("context");
      ContextMeta context;
      context.category_index = c.at("category_index").get<int>();
      context.num_categories = c.at("num_categories").get<int>();
      context.tag_embedding = c.at("tag_embedding").get<std::vector<float>>();
      video.context = std::move(context);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormatError,
                std::string("bad video record: ") + e.what());
  }
  ValidateVideoRecord(video);
  return video;
}

std::string SerializeVideoRecord(const VideoRecord& video) {
  json j;
  j["id"] = video.id;
  j["duration"] = video.duration;
  json segments = json::array();
  for (const auto& s : video.segments) segments.push_back({s.start, s.end});
  j["segments"] = std::move(segments);
  json gifs = json::array();
  for (const auto& g : video.gifs) {
    json gj = {{"start", g.start}, {"end", g.end}, {"popularity", g.popularity}};
    if (!g.creator_id.empty()) gj["creator_id"] = g.creator_id;
    gifs.push_back(std::move(gj));
  }
  j["gifs"] = std::move(gifs);
  if (!video.labels.empty()) {
    json labels = json::array();
    for (Label l : video.labels) labels.push_back(LabelToken(l));
    j["labels"] = std::move(labels);
  }
  if (video.context) {
    j["context"] = {{"category_index", video.context->category_index},
                    {"num_categories", video.context->num_categories},
                    {"tag_embedding", video.context->tag_embedding}};
  }
  return j.dump();
}

std::vector<VideoRecord> ReadVideoRecords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::vector<VideoRecord> videos;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    videos.push_back(ParseVideoRecord(line));
  }
  return videos;
}

void WriteVideoRecords(const std::vector<VideoRecord>& videos,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  for (const auto& v : videos) out << SerializeVideoRecord(v) << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed: " + path.string());
}

std::filesystem::path MetaPath(const std::filesystem::path& dir) {
  return dir / "meta.jsonl";
}

std::filesystem::path FeaturePath(const std::filesystem::path& dir,
                                  const std::string& video_id) {
  return dir / "features" / (video_id + ".v2gf");
}

Dataset LoadDataset(const std::filesystem::path& dir) {
  Dataset dataset;
  for (VideoRecord& record : ReadVideoRecords(MetaPath(dir))) {
    FeatureMatrix features = ReadFeatures(FeaturePath(dir, record.id));
    if (features.num_segments() != record.segments.size()) {
      throw Error(ErrorCode::kDimMismatch,
                  "video '" + record.id + "' has " +
                      std::to_string(record.segments.size()) +
                      " segments but " +
                      std::to_string(features.num_segments()) +
                      " feature rows");
    }
    dataset.push_back({std::move(record), std::move(features)});
  }
  return dataset;
}

void SaveDataset(const Dataset& dataset, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir / "features", ec);
  if (ec) {
    throw Error(ErrorCode::kIoFailure,
                "cannot create " + dir.string() + ": " + ec.message());
  }
  std::vector<VideoRecord> records;
  records.reserve(dataset.size());
  for (const auto& video : dataset) {
    records.push_back(video.record);
    WriteFeatures(video.features, FeaturePath(dir, video.record.id));
  }
  WriteVideoRecords(records, MetaPath(dir));
}

}  // namespace v2g
