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

#ifndef TTSDS_NOISE_HPP_
#define TTSDS_NOISE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "ttsds/error.hpp"
#include "ttsds/rng.hpp"
#include "ttsds/wav.hpp"

namespace ttsds {

enum class NoiseKind { kUniform, kNormal, kZeros, kOnes };

inline constexpr NoiseKind kAllNoiseKinds[] = {NoiseKind::kUniform, NoiseKind::kNormal,
                                               NoiseKind::kZeros, NoiseKind::kOnes};

inline std::string_view to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::kUniform: return "uniform";
    case NoiseKind::kNormal: return "normal";
    case NoiseKind::kZeros: return "zeros";
    case NoiseKind::kOnes: return "ones";
  }
  return "?";
}

inline std::optional<NoiseKind> parse_noise_kind(std::string_view s) {
  for (NoiseKind k : kAllNoiseKinds) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

inline constexpr double kNormalNoiseSigma = 0.1;

// Sample count is round(duration_s * sample_rate).
//   uniform: U[-1, 1) as 2u - 1 with u = (next() >> 11) * 2^-53
//   normal:  Box-Muller pairs (cos branch first), sigma 0.1, clipped to [-1, 1]
inline Waveform generate_noise(NoiseKind kind, double duration_s, std::uint32_t sample_rate,
                               std::uint64_t seed) {
  if (!(duration_s > 0.0)) throw DataError("noise duration must be positive");
  if (sample_rate == 0) throw DataError("sample rate must be positive");
  const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.assign(n, 0.0f);
  Xoshiro256 rng(seed);
  switch (kind) {
    case NoiseKind::kZeros:
      break;
    case NoiseKind::kOnes:
      std::fill(w.samples.begin(), w.samples.end(), 1.0f);
      break;
    case NoiseKind::kUniform:
      for (auto& v : w.samples) v = static_cast<float>(2.0 * rng.uniform01() - 1.0);
      break;
    case NoiseKind::kNormal:
      for (std::size_t i = 0; i < n; i += 2) {
        const double u1 = 1.0 - rng.uniform01();  // (0, 1]
        const double u2 = rng.uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1)) * kNormalNoiseSigma;
        const double phi = 2.0 * std::numbers::pi * u2;
        w.samples[i] = static_cast<float>(std::clamp(r * std::cos(phi), -1.0, 1.0));
        if (i + 1 < n) w.samples[i + 1] = static_cast<float>(std::clamp(r * std::sin(phi), -1.0, 1.0));
      }
      break;
  }
  return w;
}

}  // namespace ttsds

#endif  // TTSDS_NOISE_HPP_
