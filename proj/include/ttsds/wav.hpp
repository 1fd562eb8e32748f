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

#ifndef TTSDS_WAV_HPP_
#define TTSDS_WAV_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ttsds/error.hpp"
#include "ttsds/json_util.hpp"

namespace ttsds {

// Mono audio with samples nominally in [-1, 1].
struct Waveform {
  std::vector<float> samples;
  std::uint32_t sample_rate = 16000;

  double duration_s() const {
    return static_cast<double>(samples.size()) / static_cast<double>(sample_rate);
  }
};

namespace detail {

inline std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
inline std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline constexpr std::uint16_t kWavPcm = 1;
inline constexpr std::uint16_t kWavFloat = 3;
inline constexpr std::uint16_t kWavExtensible = 0xFFFE;

}  // namespace detail

// Decodes RIFF/WAVE bytes holding 16-bit PCM or 32-bit float samples.
// Channels are averaged; a 16-bit value v maps to v / 32768.
inline Waveform decode_wav_bytes(std::string_view bytes, const std::string& origin) {
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t size = bytes.size();
  if (size < 12 || bytes.substr(0, 4) != "RIFF" || bytes.substr(8, 4) != "WAVE") {
    throw DataError(origin + ": parse error: not a RIFF/WAVE file");
  }
  std::size_t pos = 12;
  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0, block_align = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;
  while (pos + 8 <= size) {
    const std::string_view id = bytes.substr(pos, 4);
    const std::uint32_t chunk = detail::le32(p + pos + 4);
    pos += 8;
    if (chunk > size - pos) {
      // Streaming writers sometimes leave the data size unset; take what is there.
      if (id != "data") throw DataError(origin + ": parse error: chunk '" + std::string(id) + "' overruns file");
    }
    const std::size_t avail = std::min<std::size_t>(chunk, size - pos);
    if (id == "fmt ") {
      if (avail < 16) throw DataError(origin + ": parse error: short fmt chunk");
      format = detail::le16(p + pos);
      channels = detail::le16(p + pos + 2);
      rate = detail::le32(p + pos + 4);
      block_align = detail::le16(p + pos + 12);
      bits = detail::le16(p + pos + 14);
      if (format == detail::kWavExtensible) {
        if (avail < 26) throw DataError(origin + ": parse error: short extensible fmt chunk");
        format = detail::le16(p + pos + 24);  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (id == "data") {
      data = p + pos;
      data_size = avail;
    }
    pos += avail + (avail & 1u);
  }
  if (!have_fmt) throw DataError(origin + ": parse error: missing fmt chunk");
  if (data == nullptr) throw DataError(origin + ": parse error: missing data chunk");
  const bool pcm16 = format == detail::kWavPcm && bits == 16;
  const bool float32 = format == detail::kWavFloat && bits == 32;
  if (!pcm16 && !float32) {
    throw DataError(origin + ": unsupported encoding (format " + std::to_string(format) + ", " +
                    std::to_string(bits) + " bits)");
  }
  if (channels == 0 || rate == 0) throw DataError(origin + ": parse error: zero channels or rate");
  const std::size_t bytes_per_sample = bits / 8;
  if (block_align != channels * bytes_per_sample) {
    throw DataError(origin + ": parse error: inconsistent block alignment");
  }
  const std::size_t frames = data_size / block_align;

  Waveform w;
  w.sample_rate = rate;
  w.samples.resize(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const unsigned char* s = data + f * block_align + c * bytes_per_sample;
      if (pcm16) {
        acc += static_cast<double>(static_cast<std::int16_t>(detail::le16(s))) / 32768.0;
      } else {
        acc += static_cast<double>(std::bit_cast<float>(detail::le32(s)));
      }
    }
    const float v = static_cast<float>(acc / channels);
    if (!std::isfinite(v)) {
      throw DataError(origin + ": non-finite sample at frame " + std::to_string(f));
    }
    w.samples[f] = v;
  }
  return w;
}

inline Waveform decode_wav(const std::filesystem::path& path) {
  return decode_wav_bytes(read_text_file(path), path.string());
}

// Float sample to 16-bit PCM with clipping; inverse of the decode scaling.
inline std::int16_t to_pcm16(float v) {
  const double scaled = std::nearbyint(static_cast<double>(v) * 32768.0);
  return static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
}

inline std::string encode_wav_pcm16(const Waveform& w) {
  std::string out;
  auto u16 = [&](std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>(v >> 8));
  };
  auto u32 = [&](std::uint32_t v) {
    for (int s = 0; s < 32; s += 8) out.push_back(static_cast<char>((v >> s) & 0xff));
  };
  const auto data_bytes = static_cast<std::uint32_t>(w.samples.size() * 2);
  out += "RIFF";
  u32(36 + data_bytes);
  out += "WAVEfmt ";
  u32(16);
  u16(detail::kWavPcm);
  u16(1);
  u32(w.sample_rate);
  u32(w.sample_rate * 2);
  u16(2);
  u16(16);
  out += "data";
  u32(data_bytes);
  for (float v : w.samples) u16(static_cast<std::uint16_t>(to_pcm16(v)));
  return out;
}

inline void write_wav_pcm16(const Waveform& w, const std::filesystem::path& path) {
  write_text_file(path, encode_wav_pcm16(w));
}

// What a waveform looks like after a 16-bit write/decode round trip.
inline Waveform quantize_pcm16(Waveform w) {
  for (auto& v : w.samples) v = static_cast<float>(to_pcm16(v) / 32768.0);
  return w;
}

}  // namespace ttsds

#endif  // TTSDS_WAV_HPP_
