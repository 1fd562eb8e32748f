// Copyright 2026 The TTSDS Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ttsds/noise.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gtest/gtest.h"
#include "ttsds/rng.hpp"

namespace ttsds {
namespace {

// Reference values from an independent implementation of xoshiro256**
// seeded by four splitmix64 outputs.
TEST(Rng, MatchesReferenceStream) {
  Xoshiro256 rng(42);
  EXPECT_EQ(rng.next(), 0x15780b2e0c2ec716ULL);
  EXPECT_EQ(rng.next(), 0x6104d9866d113a7eULL);
  EXPECT_EQ(rng.next(), 0xae17533239e499a1ULL);
}

TEST(Rng, Uniform01Range) {
  Xoshiro256 rng(7);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, DerivedSeedsDependOnLabelsOnly) {
  EXPECT_EQ(derive_seed(1, "pitch", "ljs"), derive_seed(1, "pitch", "ljs"));
  EXPECT_NE(derive_seed(1, "pitch", "ljs"), derive_seed(2, "pitch", "ljs"));
  EXPECT_NE(derive_seed(1, "pitch", "ljs"), derive_seed(1, "ljs", "pitch"));
  EXPECT_NE(derive_seed(1, "ab", "c"), derive_seed(1, "a", "bc"));
}

TEST(Noise, SampleCounts) {
  EXPECT_EQ(generate_noise(NoiseKind::kUniform, 3.0, 16000, 0).samples.size(), 48000u);
  EXPECT_EQ(generate_noise(NoiseKind::kNormal, 0.5, 22050, 0).samples.size(), 11025u);
  EXPECT_EQ(generate_noise(NoiseKind::kZeros, 0.001, 16000, 0).samples.size(), 16u);
  EXPECT_EQ(generate_noise(NoiseKind::kNormal, 0.0625, 16000, 0).samples.size(), 1000u);
  EXPECT_THROW(generate_noise(NoiseKind::kOnes, 0.0, 16000, 0), DataError);
}

TEST(Noise, UniformReferenceSamples) {
  const auto w = generate_noise(NoiseKind::kUniform, 1.0, 16000, 42);
  EXPECT_EQ(w.samples[0], static_cast<float>(-0.8322740793228149));
  EXPECT_EQ(w.samples[1], static_cast<float>(-0.2420395016670227));
  EXPECT_EQ(w.samples[2], static_cast<float>(0.3600868284702301));
  EXPECT_EQ(w.samples[3], static_cast<float>(0.8493859171867371));
}

TEST(Noise, DeterministicPerSeed) {
  for (NoiseKind k : kAllNoiseKinds) {
    EXPECT_EQ(generate_noise(k, 0.5, 16000, 9).samples, generate_noise(k, 0.5, 16000, 9).samples);
  }
  EXPECT_NE(generate_noise(NoiseKind::kUniform, 0.5, 16000, 9).samples,
            generate_noise(NoiseKind::kUniform, 0.5, 16000, 10).samples);
}

TEST(Noise, Distributions) {
  const auto u = generate_noise(NoiseKind::kUniform, 10.0, 16000, 3).samples;
  EXPECT_TRUE(std::all_of(u.begin(), u.end(), [](float v) { return v >= -1.0f && v < 1.0f; }));
  double mean = 0.0, sq = 0.0;
  for (float v : u) mean += v;
  mean /= u.size();
  for (float v : u) sq += (v - mean) * (v - mean);
  EXPECT_NEAR(mean, 0.0, 0.01);
  EXPECT_NEAR(sq / u.size(), 1.0 / 3.0, 0.01);

  const auto n = generate_noise(NoiseKind::kNormal, 10.0, 16000, 3).samples;
  mean = sq = 0.0;
  for (float v : n) mean += v;
  mean /= n.size();
  for (float v : n) sq += (v - mean) * (v - mean);
  EXPECT_NEAR(mean, 0.0, 0.002);
  EXPECT_NEAR(std::sqrt(sq / n.size()), kNormalNoiseSigma, 0.002);
  EXPECT_TRUE(std::all_of(n.begin(), n.end(), [](float v) { return v >= -1.0f && v <= 1.0f; }));

  const auto z = generate_noise(NoiseKind::kZeros, 0.1, 16000, 3).samples;
  EXPECT_TRUE(std::all_of(z.begin(), z.end(), [](float v) { return v == 0.0f; }));
  const auto o = generate_noise(NoiseKind::kOnes, 0.1, 16000, 3).samples;
  EXPECT_TRUE(std::all_of(o.begin(), o.end(), [](float v) { return v == 1.0f; }));
}

TEST(Noise, KindNames) {
  std::set<std::string> names;
  for (NoiseKind k : kAllNoiseKinds) {
    names.insert(std::string(to_string(k)));
    EXPECT_EQ(parse_noise_kind(to_string(k)), k);
  }
  EXPECT_EQ(names, (std::set<std::string>{"uniform", "normal", "zeros", "ones"}));
  EXPECT_FALSE(parse_noise_kind("pink"));
}

}  // namespace
}  // namespace ttsds
