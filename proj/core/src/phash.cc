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

#include "v2g/phash.h"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>

#include "v2g/error.h"

namespace v2g {
namespace {

constexpr double kSnapToZero = 1e-9;

// Source sample positions for one axis of the bilinear resize.
struct AxisTap {
  int lo;
  int hi;
  double frac;
};

std::vector<AxisTap> BuildTaps(int src, int dst) {
  std::vector<AxisTap> taps(dst);
  const double scale = static_cast<double>(src) / dst;
  for (int i = 0; i < dst; ++i) {
    double pos = (i + 0.5) * scale - 0.5;
    pos = std::clamp(pos, 0.0, static_cast<double>(src - 1));
    const int lo = static_cast<int>(std::floor(pos));
    taps[i] = {lo, std::min(lo + 1, src - 1), pos - lo};
  }
  return taps;
}

// Skips whitespace and '#' comments, then reads an unsigned decimal.
bool ReadHeaderInt(const std::string& bytes, std::size_t* pos, long* value) {
  std::size_t i = *pos;
  while (i < bytes.size()) {
    if (std::isspace(static_cast<unsigned char>(bytes[i]))) {
      ++i;
    } else if (bytes[i] == '#') {
      while (i < bytes.size() && bytes[i] != '\n') ++i;
    } else {
      break;
    }
  }
  if (i >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[i]))) {
    return false;
  }
  long v = 0;
  while (i < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[i]))) {
    v = v * 10 + (bytes[i] - '0');
    if (v > 1'000'000'000L) return false;
    ++i;
  }
  *pos = i;
  *value = v;
  return true;
}

}  // namespace

GrayFrame::GrayFrame(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width_ < 1 || height_ < 1) {
    throw Error(ErrorCode::kInvalidArgument, "frame must be at least 1x1");
  }
  if (pixels_.size() != static_cast<std::size_t>(width_) * height_) {
    throw Error(ErrorCode::kInvalidArgument,
                "pixel count does not match frame size");
  }
}

std::vector<double> ResizeBilinear(const GrayFrame& frame, int out_width,
                                   int out_height) {
  const auto xs = BuildTaps(frame.width(), out_width);
  const auto ys = BuildTaps(frame.height(), out_height);
  std::vector<double> out(static_cast<std::size_t>(out_width) * out_height);
  for (int y = 0; y < out_height; ++y) {
    const AxisTap& ty = ys[y];
    for (int x = 0; x < out_width; ++x) {
      const AxisTap& tx = xs[x];
      const double top = (1.0 - tx.frac) * frame.at(tx.lo, ty.lo) +
                         tx.frac * frame.at(tx.hi, ty.lo);
      const double bottom = (1.0 - tx.frac) * frame.at(tx.lo, ty.hi) +
                            tx.frac * frame.at(tx.hi, ty.hi);
      out[y * out_width + x] = (1.0 - ty.frac) * top + ty.frac * bottom;
    }
  }
  return out;
}

std::vector<double> Dct2d(const std::vector<double>& block, int n) {
  std::vector<double> basis(static_cast<std::size_t>(n) * n);
  for (int u = 0; u < n; ++u) {
    const double alpha = u == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (int x = 0; x < n; ++x) {
      basis[u * n + x] =
          alpha * std::cos(std::numbers::pi * (2 * x + 1) * u / (2.0 * n));
    }
  }
  // Rows, then columns.
  std::vector<double> tmp(block.size(), 0.0);
  for (int r = 0; r < n; ++r) {
    for (int u = 0; u < n; ++u) {
      double acc = 0.0;
      for (int x = 0; x < n; ++x) acc += basis[u * n + x] * block[r * n + x];
      tmp[r * n + u] = acc;
    }
  }
  std::vector<double> out(block.size(), 0.0);
  for (int c = 0; c < n; ++c) {
    for (int v = 0; v < n; ++v) {
      double acc = 0.0;
      for (int y = 0; y < n; ++y) acc += basis[v * n + y] * tmp[y * n + c];
      out[v * n + c] = acc;
    }
  }
  return out;
}

PHash64 ComputePHash(const GrayFrame& frame) {
  const std::vector<double> coeffs =
      Dct2d(ResizeBilinear(frame, kHashSide, kHashSide), kHashSide);

  double block[kHashBlock * kHashBlock];
  for (int r = 0; r < kHashBlock; ++r) {
    for (int c = 0; c < kHashBlock; ++c) {
      double v = coeffs[r * kHashSide + c];
      if (std::abs(v) < kSnapToZero) v = 0.0;
      block[r * kHashBlock + c] = v;
    }
  }
  std::vector<double> ac(block + 1, block + kHashBlock * kHashBlock);
  std::nth_element(ac.begin(), ac.begin() + ac.size() / 2, ac.end());
  const double median = ac[ac.size() / 2];

  PHash64 hash;
  for (int i = 1; i < kHashBlock * kHashBlock; ++i) {
    if (block[i] > median) hash.bits |= std::uint64_t{1} << i;
  }
  return hash;
}

int HammingDistance(PHash64 a, PHash64 b) {
  return std::popcount(a.bits ^ b.bits);
}

GrayFrame DecodePgm(const std::string& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw Error(ErrorCode::kBadHeader, "not a binary (P5) PGM");
  }
  std::size_t pos = 2;
  long width = 0, height = 0, maxval = 0;
  if (!ReadHeaderInt(bytes, &pos, &width) ||
      !ReadHeaderInt(bytes, &pos, &height) ||
      !ReadHeaderInt(bytes, &pos, &maxval)) {
    throw Error(ErrorCode::kBadHeader, "malformed PGM header");
  }
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kBadHeader, "PGM dimensions must be positive");
  }
  if (maxval != 255) {
    throw Error(ErrorCode::kUnsupportedMaxval,
                "PGM maxval " + std::to_string(maxval) + " (only 255)");
  }
  if (pos >= bytes.size() ||
      !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    throw Error(ErrorCode::kBadHeader, "PGM header must end in whitespace");
  }
  ++pos;
  const std::size_t count = static_cast<std::size_t>(width) * height;
  if (bytes.size() - pos < count) {
    throw Error(ErrorCode::kTruncatedFile,
                "PGM raster has " + std::to_string(bytes.size() - pos) +
                    " bytes, needs " + std::to_string(count));
  }
  std::vector<std::uint8_t> pixels(bytes.begin() + pos,
                                   bytes.begin() + pos + count);
  return GrayFrame(static_cast<int>(width), static_cast<int>(height),
                   std::move(pixels));
}

GrayFrame ReadPgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return DecodePgm(bytes);
}

void WritePgm(const GrayFrame& frame, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out << "P5\n" << frame.width() << ' ' << frame.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(frame.pixels().data()),
            static_cast<std::streamsize>(frame.pixels().size()));
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed: " + path.string());
}

std::string FormatHash(PHash64 hash) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash.bits));
  return buf;
}

PHash64 ParseHash(const std::string& text) {
  if (text.size() != 16) {
    throw Error(ErrorCode::kFormatError, "hash must be 16 hex digits: '" + text + "'");
  }
  std::uint64_t bits = 0;
  for (char ch : text) {
    int digit;
    if (ch >= '0' && ch <= '9') {
      digit = ch - '0';
    } else if (ch >= 'a' && ch <= 'f') {
      digit = ch - 'a' + 10;
    } else {
      throw Error(ErrorCode::kFormatError,
                  "hash must be lowercase hex: '" + text + "'");
    }
    bits = (bits << 4) | static_cast<std::uint64_t>(digit);
  }
  return {bits};
}

std::vector<PHash64> ReadHashDump(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::vector<PHash64> hashes;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
      line.pop_back();
    }
    if (line.empty()) continue;
    hashes.push_back(ParseHash(line));
  }
  return hashes;
}

void WriteHashDump(const std::vector<PHash64>& hashes,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  for (PHash64 h : hashes) out << FormatHash(h) << '\n';
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed: " + path.string());
}

}  // namespace v2g
