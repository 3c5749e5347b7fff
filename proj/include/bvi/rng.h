// Copyright 2026 The bvi Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BVI_RNG_H_
#define BVI_RNG_H_

#include <cstdint>
#include <limits>

namespace bvi {

// Counter-based 64-bit generator: the i-th output (i = 0, 1, ...) is
// SplitMix64's finalizer applied to seed + (i + 1) * 0x9E3779B97F4A7C15.
// Being a pure function of (seed, counter) makes every stream reproducible
// from its seed alone, across platforms and languages.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return At(seed_, counter_++); }

  // Output number `counter` of the stream `seed`.
  static result_type At(std::uint64_t seed, std::uint64_t counter);

  // Uniform double in [0, 1) with 53 random bits.
  double Uniform();

  // Uniform double in (0, 1), never exactly zero.
  double OpenUniform();

  // Standard normal via the inverse CDF of an OpenUniform() draw.
  double Normal();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace bvi

#endif  // BVI_RNG_H_
