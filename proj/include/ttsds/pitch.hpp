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

#ifndef TTSDS_PITCH_HPP_
#define TTSDS_PITCH_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "ttsds/error.hpp"
#include "ttsds/wav.hpp"

namespace ttsds {

struct PitchConfig {
  double frame_ms = 50.0;
  double hop_ms = 10.0;
  double f0_min = 50.0;
  double f0_max = 500.0;
  double threshold = 0.15;  // absolute threshold on the normalized difference

  void validate() const {
    if (!(frame_ms > 0.0) || !(hop_ms > 0.0)) throw ConfigError("pitch: frame and hop must be positive");
    if (!(f0_min > 0.0) || !(f0_max > f0_min)) throw ConfigError("pitch: need 0 < f0_min < f0_max");
    if (!(threshold > 0.0)) throw ConfigError("pitch: threshold must be positive");
  }
};

// Frame-level F0 in Hz; 0.0 marks an unvoiced frame.
struct PitchTrack {
  std::vector<float> f0;
};

// Frame geometry in samples at a given rate.
struct PitchGeometry {
  std::size_t frame = 0;
  std::size_t hop = 0;
  std::size_t lag_min = 0;
  std::size_t lag_max = 0;

  static PitchGeometry make(const PitchConfig& cfg, std::uint32_t sample_rate) {
    cfg.validate();
    const double fs = sample_rate;
    PitchGeometry g;
    g.frame = static_cast<std::size_t>(std::lround(cfg.frame_ms * fs / 1000.0));
    g.hop = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(cfg.hop_ms * fs / 1000.0)));
    g.lag_min = std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(fs / cfg.f0_max)));
    g.lag_max = static_cast<std::size_t>(std::ceil(fs / cfg.f0_min));
    if (g.lag_max + 2 > g.frame) {
      throw ConfigError("pitch: frame too short for f0_min (need frame > sample_rate / f0_min)");
    }
    return g;
  }

  std::size_t frame_count(std::size_t n_samples) const {
    return n_samples < frame ? 0 : (n_samples - frame) / hop + 1;
  }
};

namespace detail {

// YIN on one frame: difference function over a window of frame - lag_max
// samples, cumulative-mean normalization, absolute threshold, walk to the
// local minimum, parabolic refinement. Returns the refined lag or 0.
inline double yin_lag(std::span<const float> frame, const PitchGeometry& g, double threshold,
                      std::vector<double>& diff) {
  const std::size_t window = g.frame - g.lag_max;
  diff.assign(g.lag_max + 2, 0.0);
  for (std::size_t lag = 1; lag <= g.lag_max + 1 && lag + window <= frame.size(); ++lag) {
    double acc = 0.0;
    for (std::size_t j = 0; j < window; ++j) {
      const double delta = static_cast<double>(frame[j]) - frame[j + lag];
      acc += delta * delta;
    }
    diff[lag] = acc;
  }
  // diff becomes the cumulative-mean-normalized difference in place.
  double running = 0.0;
  diff[0] = 1.0;
  for (std::size_t lag = 1; lag < diff.size(); ++lag) {
    running += diff[lag];
    diff[lag] = running > 0.0 ? diff[lag] * static_cast<double>(lag) / running : 1.0;
  }
  std::size_t lag = g.lag_min;
  while (lag <= g.lag_max && diff[lag] >= threshold) ++lag;
  if (lag > g.lag_max) return 0.0;
  while (lag + 1 <= g.lag_max && diff[lag + 1] < diff[lag]) ++lag;

  const double left = diff[lag - 1], mid = diff[lag], right = diff[lag + 1];
  const double denom = left - 2.0 * mid + right;
  double shift = 0.0;
  if (denom > 0.0) shift = std::clamp(0.5 * (left - right) / denom, -0.5, 0.5);
  return static_cast<double>(lag) + shift;
}

}  // namespace detail

inline PitchTrack extract_pitch(const Waveform& w, const PitchConfig& cfg = {}) {
  const PitchGeometry g = PitchGeometry::make(cfg, w.sample_rate);
  PitchTrack track;
  const std::size_t frames = g.frame_count(w.samples.size());
  track.f0.assign(frames, 0.0f);
  std::vector<double> scratch;
  const std::span<const float> all(w.samples);
  for (std::size_t f = 0; f < frames; ++f) {
    const double lag = detail::yin_lag(all.subspan(f * g.hop, g.frame), g, cfg.threshold, scratch);
    if (lag <= 0.0) continue;
    const double f0 = static_cast<double>(w.sample_rate) / lag;
    if (f0 >= cfg.f0_min && f0 <= cfg.f0_max) track.f0[f] = static_cast<float>(f0);
  }
  return track;
}

}  // namespace ttsds

#endif  // TTSDS_PITCH_HPP_
