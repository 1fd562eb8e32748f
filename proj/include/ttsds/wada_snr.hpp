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

#ifndef TTSDS_WADA_SNR_HPP_
#define TTSDS_WADA_SNR_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <span>

#include "ttsds/error.hpp"
#include "ttsds/wav.hpp"

namespace ttsds {

inline constexpr double kWadaMinDb = -20.0;
inline constexpr double kWadaMaxDb = 100.0;

// G(snr) = log E|z| - E log|z| for z = gamma(0.4)-amplitude speech plus
// Gaussian noise, at integer SNRs -20..100 dB. Regenerate with
// tools/gen_wada_table.py.
inline constexpr std::array<double, 121> kWadaTable = {
    0.40943470, 0.40945950, 0.40949762, 0.40955585,
    0.40964412, 0.40977680, 0.40997422, 0.41026473,
    0.41068699, 0.41129251, 0.41214827, 0.41333908,
    0.41496934, 0.41716371, 0.42006640, 0.42383855,
    0.42865366, 0.43469103, 0.44212755, 0.45112839,
    0.46183732, 0.47436773, 0.48879504, 0.50515144,
    0.52342326, 0.54355138, 0.56543434, 0.58893370,
    0.61388120, 0.64008667, 0.66734632, 0.69545050,
    0.72419070, 0.75336533, 0.78278429, 0.81227220,
    0.84167053, 0.87083865, 0.89965408, 0.92801212,
    0.95582492, 0.98302037, 1.00954067, 1.03534094,
    1.06038765, 1.08465732, 1.10813505, 1.13081336,
    1.15269102, 1.17377204, 1.19406475, 1.21358106,
    1.23233570, 1.25034569, 1.26762978, 1.28420806,
    1.30010156, 1.31533194, 1.32992126, 1.34389172,
    1.35726554, 1.37006476, 1.38231115, 1.39402611,
    1.40523061, 1.41594510, 1.42618950, 1.43598315,
    1.44534479, 1.45429254, 1.46284393, 1.47101584,
    1.47882453, 1.48628568, 1.49341434, 1.50022498,
    1.50673149, 1.51294719, 1.51888488, 1.52455681,
    1.52997471, 1.53514984, 1.54009295, 1.54481436,
    1.54932393, 1.55363110, 1.55774489, 1.56167393,
    1.56542647, 1.56901042, 1.57243332, 1.57570237,
    1.57882447, 1.58180620, 1.58465387, 1.58737348,
    1.58997078, 1.59245127, 1.59482018, 1.59708253,
    1.59924311, 1.60130649, 1.60327704, 1.60515893,
    1.60695615, 1.60867250, 1.61031162, 1.61187699,
    1.61337191, 1.61479957, 1.61616298, 1.61746503,
    1.61870849, 1.61989599, 1.62103005, 1.62211307,
    1.62314735, 1.62413509, 1.62507837, 1.62597920,
    1.62683949,
};

// Waveform amplitude statistic log(mean|x|) - mean(log|x|) after peak
// normalization. Magnitudes below 1e-10 are floored.
inline double wada_statistic(std::span<const float> samples) {
  constexpr double kEps = 1e-10;
  double peak = 0.0;
  for (float v : samples) peak = std::max(peak, std::abs(static_cast<double>(v)));
  double sum_abs = 0.0, sum_log = 0.0;
  for (float v : samples) {
    const double a = std::max(kEps, std::abs(static_cast<double>(v)) / peak);
    sum_abs += a;
    sum_log += std::log(a);
  }
  const double n = static_cast<double>(samples.size());
  return std::log(std::max(kEps, sum_abs / n)) - sum_log / n;
}

// Maps a statistic onto dB by linear interpolation in kWadaTable, clamped.
inline double wada_db_from_statistic(double g) {
  if (g <= kWadaTable.front()) return kWadaMinDb;
  if (g >= kWadaTable.back()) return kWadaMaxDb;
  const auto it = std::upper_bound(kWadaTable.begin(), kWadaTable.end(), g);
  const auto hi = static_cast<std::size_t>(it - kWadaTable.begin());
  const std::size_t lo = hi - 1;
  const double frac = (g - kWadaTable[lo]) / (kWadaTable[hi] - kWadaTable[lo]);
  return kWadaMinDb + static_cast<double>(lo) + frac;
}

// Blind SNR estimate in dB, clamped to [-20, 100].
inline double estimate_wada_snr(std::span<const float> samples) {
  if (samples.empty()) throw DataError("degenerate signal: empty waveform");
  const float first = samples.front();
  if (std::all_of(samples.begin(), samples.end(), [&](float v) { return v == first; })) {
    throw DataError(first == 0.0f ? "degenerate signal: all-zero waveform"
                                  : "degenerate signal: constant waveform");
  }
  return wada_db_from_statistic(wada_statistic(samples));
}

inline double estimate_wada_snr(const Waveform& w) { return estimate_wada_snr(std::span<const float>(w.samples)); }

}  // namespace ttsds

#endif  // TTSDS_WADA_SNR_HPP_
