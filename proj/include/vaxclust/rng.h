/*
 * Copyright 2026 The vaxclust Authors.
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

#ifndef VAXCLUST_RNG_H_
#define VAXCLUST_RNG_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace vaxclust {

// Portable pseudo-random generator. The whole stream is a pure function of
// the seed, so fixtures can be regenerated in any language:
//
//   state:   xoshiro256** (Blackman & Vigna), 4 x uint64.
//   seeding: the 4 state words are successive outputs of SplitMix64 started
//            at `seed`.
//   Uniform01():   (NextU64() >> 11) * 2^-53, in [0, 1).
//   Bounded(n):    rejection sampling on NextU64() against the largest
//                  multiple of n, then modulo n.
//   Normal():      Box-Muller with u1 = 1 - Uniform01(), u2 = Uniform01();
//                  returns sqrt(-2 ln u1) * cos(2 pi u2). One normal per two
//                  uniforms, nothing cached.
//   Shuffle(v):    Fisher-Yates from the back: for i = n-1..1, swap v[i] with
//                  v[Bounded(i + 1)].
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t NextU64();
  double Uniform01();
  uint64_t Bounded(uint64_t n);
  double Normal();
  double Normal(double mean, double sd) { return mean + sd * Normal(); }

  // Samples an index with probability proportional to `weights`.
  std::size_t Categorical(std::span<const double> weights);

  template <typename T>
  void Shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(Bounded(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  template <typename T>
  void Shuffle(std::vector<T>& values) {
    Shuffle(std::span<T>(values));
  }

 private:
  std::array<uint64_t, 4> state_;
};

uint64_t SplitMix64(uint64_t& state);

// Identity permutation shuffled with Rng(seed).
std::vector<std::size_t> RandomPermutation(std::size_t n, uint64_t seed);

}  // namespace vaxclust

#endif  // VAXCLUST_RNG_H_
