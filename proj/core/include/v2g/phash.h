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

#ifndef V2G_PHASH_H_
#define V2G_PHASH_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace v2g {

// 8-bit grayscale image, row-major.
class GrayFrame {
 public:
  GrayFrame(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  const std::vector<std::uint8_t>& pixels() const { return pixels_; }
  std::uint8_t at(int x, int y) const { return pixels_[y * width_ + x]; }

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> pixels_;
};

struct PHash64 {
  std::uint64_t bits = 0;
  friend bool operator==(PHash64, PHash64) = default;
};

inline constexpr int kHashSide = 32;
inline constexpr int kHashBlock = 8;

// Bilinear resize with pixel-center alignment: destination pixel i samples
// source coordinate (i + 0.5) * src / dst - 0.5, clamped to the image.
std::vector<double> ResizeBilinear(const GrayFrame& frame, int out_width,
                                   int out_height);

// Orthonormal 2-D type-II DCT of an n x n row-major block.
std::vector<double> Dct2d(const std::vector<double>& block, int n);

// DCT perceptual hash:
//   1. bilinear resize to 32x32;
//   2. 2-D type-II DCT (double precision);
//   3. keep the top-left 8x8 block and drop the DC term (0,0);
//   4. threshold the remaining 63 coefficients at their median, strictly.
// Bit r*8+c holds coefficient (r, c); bit 0 (the DC slot) is always 0.
// Coefficients with magnitude below 1e-9 are snapped to 0 so that flat
// regions hash identically on every platform.
PHash64 ComputePHash(const GrayFrame& frame);

int HammingDistance(PHash64 a, PHash64 b);

// Binary PGM (P5, maxval 255). Comments (#) in the header are allowed.
GrayFrame ReadPgm(const std::filesystem::path& path);
GrayFrame DecodePgm(const std::string& bytes);
void WritePgm(const GrayFrame& frame, const std::filesystem::path& path);

// Hash dump: one lowercase 16-hex-digit hash per line.
std::string FormatHash(PHash64 hash);
PHash64 ParseHash(const std::string& text);
std::vector<PHash64> ReadHashDump(const std::filesystem::path& path);
void WriteHashDump(const std::vector<PHash64>& hashes,
                   const std::filesystem::path& path);

}  // namespace v2g

#endif  // V2G_PHASH_H_
