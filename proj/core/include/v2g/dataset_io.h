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

#ifndef V2G_DATASET_IO_H_
#define V2G_DATASET_IO_H_

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "v2g/types.h"

namespace v2g {

// V2GF feature file:
//   "V2GF" | u32 version (=1) | u32 num_segments | u32 dim |
//   num_segments * dim float32, row-major. All integers/floats little-endian.
inline constexpr std::uint32_t kFeatureFileVersion = 1;

FeatureMatrix ReadFeatures(const std::filesystem::path& path);
FeatureMatrix DecodeFeatures(std::istream& in);
void WriteFeatures(const FeatureMatrix& matrix,
                   const std::filesystem::path& path);
void EncodeFeatures(const FeatureMatrix& matrix, std::ostream& out);

// One JSON object per line: id, duration, segments [[s,e],...], gifs
// [{start,end,popularity,creator_id?}], labels ["pos"|"neg"|"ign"]?,
// context {category_index, num_categories, tag_embedding}?.
VideoRecord ParseVideoRecord(const std::string& json_line);
std::string SerializeVideoRecord(const VideoRecord& video);
std::vector<VideoRecord> ReadVideoRecords(const std::filesystem::path& path);
void WriteVideoRecords(const std::vector<VideoRecord>& videos,
                       const std::filesystem::path& path);

// A dataset directory holds `meta.jsonl` plus `features/<id>.v2gf` per video.
struct LabeledVideo {
  VideoRecord record;
  FeatureMatrix features;
};

using Dataset = std::vector<LabeledVideo>;

std::filesystem::path MetaPath(const std::filesystem::path& dir);
std::filesystem::path FeaturePath(const std::filesystem::path& dir,
                                  const std::string& video_id);
Dataset LoadDataset(const std::filesystem::path& dir);
void SaveDataset(const Dataset& dataset, const std::filesystem::path& dir);

}  // namespace v2g

#endif  // V2G_DATASET_IO_H_
