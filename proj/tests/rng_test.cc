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

#include "bvi/rng.h"

#include <cmath>
#include <cstdint>

#include "gtest/gtest.h"

namespace bvi {
namespace {

// Reference SplitMix64 stream, written out independently.
std::uint64_t SplitMix64Next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

TEST(CounterRngTest, MatchesSplitMix64Stream) {
  for (std::uint64_t seed : {0ull, 1ull, 7ull, 0xDEADBEEFull}) {
    std::uint64_t state = seed;
    CounterRng rng(seed);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(rng(), SplitMix64Next(state));
  }
}

TEST(CounterRngTest, KnownFirstOutput) {
  EXPECT_EQ(CounterRng::At(0, 0), 0xE220A8397B1DCDAFull);
}

TEST(CounterRngTest, RandomAccessAgreesWithSequence) {
  CounterRng rng(42);
  for (std::uint64_t i = 0; i < 10; ++i) EXPECT_EQ(rng(), CounterRng::At(42, i));
  EXPECT_EQ(rng.counter(), 10u);
}

TEST(CounterRngTest, UniformRangeAndMean) {
  CounterRng rng(9);
  double sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 4 * std::sqrt(1.0 / 12 / n));
}

TEST(CounterRngTest, OpenUniformNeverZero) {
  CounterRng rng(0);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.OpenUniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(CounterRngTest, NormalMoments) {
  CounterRng rng(1234);
  const int n = 200000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.Normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 4 / std::sqrt(double(n)));
  EXPECT_NEAR(sq / n, 1.0, 4 * std::sqrt(2.0 / n));
}

TEST(CounterRngTest, NormalIsInverseCdfOfOpenUniform) {
  CounterRng a(5), b(5);
  for (int i = 0; i < 100; ++i) {
    const double u = b.OpenUniform();
    const double z = a.Normal();
    EXPECT_NEAR(0.5 * std::erfc(-z / std::sqrt(2.0)), u, 1e-14);
  }
}

}  // namespace
}  // namespace bvi
