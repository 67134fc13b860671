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

#ifndef V2G_RNG_H_
#define V2G_RNG_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

namespace v2g {

// Counter-based generator: the i-th output of a stream is
// Mix64(seed + i * kGamma), i.e. the SplitMix64 sequence. The stream is fully
// determined by (seed, counter), so results are identical on every platform.
// Independent child streams are derived with Split().
//
// Every distribution below is defined in terms of NextU64() only; nothing
// goes through <random> distributions, whose output is implementation-defined.
class Rng {
 public:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t NextU64();

  // Uniform in [0, 1) with 53 random bits.
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, n). n must be positive. Unbiased (rejection).
  std::uint64_t UniformInt(std::uint64_t n);

  // Standard normal via Box-Muller; consumes exactly two outputs per call.
  double Normal();

  bool Bernoulli(double p) { return Uniform() < p; }

  // A statistically independent stream keyed by `stream_id`. Does not advance
  // this generator.
  Rng Split(std::uint64_t stream_id) const;

  template <typename T>
  void Shuffle(std::span<T> items) {
    // Fisher-Yates, high index first.
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(UniformInt(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

std::uint64_t Mix64(std::uint64_t z);

}  // namespace v2g

#endif  // V2G_RNG_H_
