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

#ifndef TTSDS_EXTRACT_HPP_
#define TTSDS_EXTRACT_HPP_

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ttsds/derived_features.hpp"
#include "ttsds/error.hpp"
#include "ttsds/feature_store.hpp"
#include "ttsds/json_util.hpp"
#include "ttsds/noise.hpp"
#include "ttsds/parallel.hpp"
#include "ttsds/pitch.hpp"
#include "ttsds/rng.hpp"
#include "ttsds/wada_snr.hpp"
#include "ttsds/wav.hpp"

namespace ttsds {

inline constexpr std::string_view kFeatureFileExtension = ".ttsf";

struct AudioFeatureTables {
  FeatureTable pitch;
  FeatureTable wada_snr;
};

// Pitch and WADA SNR for `count` utterances. `source(i)` yields the i-th
// waveform; it is called from worker threads. Degenerate signals get no SNR
// frame and a warning.
inline AudioFeatureTables audio_feature_tables(const std::vector<std::string>& ids,
                                               const std::function<Waveform(std::size_t)>& source,
                                               const PitchConfig& cfg, std::size_t jobs,
                                               std::vector<std::string>& warnings) {
  const std::size_t n = ids.size();
  std::vector<std::vector<float>> f0(n), snr(n);
  std::vector<std::string> notes(n);
  parallel_for(n, jobs, [&](std::size_t i) {
    const Waveform w = source(i);
    f0[i] = extract_pitch(w, cfg).f0;
    try {
      snr[i] = {static_cast<float>(estimate_wada_snr(w))};
    } catch (const DataError& e) {
      notes[i] = "wada_snr: utterance '" + ids[i] + "': " + e.what() + ", skipped";
    }
  });
  AudioFeatureTables out;
  out.pitch.feature_id = "pitch";
  out.wada_snr.feature_id = "wada_snr";
  for (std::size_t i = 0; i < n; ++i) {
    out.pitch.add(ids[i], std::move(f0[i]));
    out.wada_snr.add(ids[i], std::move(snr[i]));
    if (!notes[i].empty()) warnings.push_back(std::move(notes[i]));
  }
  return out;
}

struct ExtractOptions {
  std::filesystem::path wav_dir;
  std::filesystem::path out_dir;
  std::string dataset_id;
  DatasetRole role = DatasetRole::kCandidate;
  PitchConfig pitch;
  std::optional<std::filesystem::path> transcripts;
  std::map<std::string, std::filesystem::path> hypotheses;  // asr id -> TSV
  std::map<std::string, std::filesystem::path> tokens;      // tokenizer id -> token file
  std::size_t jobs = 1;
};

struct ExtractResult {
  DatasetManifest manifest;
  std::filesystem::path manifest_path;
  std::size_t utterances = 0;
  std::vector<std::string> warnings;
};

namespace detail {

inline std::filesystem::path feature_path(const std::filesystem::path& dir, const std::string& id) {
  return dir / (id + std::string(kFeatureFileExtension));
}

// Writes derived text/token features next to the audio ones and records
// everything in the manifest.
inline void add_side_features(DatasetManifest& m, const std::filesystem::path& out_dir,
                              std::vector<std::string>& warnings) {
  if (!m.hypotheses.empty() && !m.transcripts) {
    throw ConfigError("hypotheses given without reference transcripts");
  }
  if (m.transcripts) {
    const TextTable refs = read_text_table(*m.transcripts);
    for (const auto& [asr, path] : m.hypotheses) {
      const std::string fid = wer_feature_id(asr);
      const auto table = wer_table(refs, read_text_table(path), fid, warnings);
      write_feature_file(table, feature_path(out_dir, fid));
      m.feature_files[fid] = feature_path(out_dir, fid);
    }
  }
  for (const auto& [tok, path] : m.tokens) {
    const std::string fid = token_length_feature_id(tok);
    write_feature_file(token_length_table(read_token_file(path), fid), feature_path(out_dir, fid));
    m.feature_files[fid] = feature_path(out_dir, fid);
  }
}

inline std::filesystem::path write_manifest(const DatasetManifest& m, const std::filesystem::path& out_dir) {
  const auto path = out_dir / "manifest.json";
  write_text_file(path, manifest_to_json(m, std::filesystem::absolute(out_dir)).dump(2) + "\n");
  return path;
}

}  // namespace detail

// Runs the native extractors over every *.wav in wav_dir (sorted by name,
// utterance id = file stem) and writes feature files plus manifest.json.
inline ExtractResult extract_dataset(const ExtractOptions& opts) {
  if (opts.dataset_id.empty()) throw ConfigError("extract: dataset id must not be empty");
  if (!std::filesystem::is_directory(opts.wav_dir)) {
    throw DataError("extract: not a directory: " + opts.wav_dir.string());
  }
  std::vector<std::filesystem::path> wavs;
  for (const auto& entry : std::filesystem::directory_iterator(opts.wav_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav") wavs.push_back(entry.path());
  }
  std::sort(wavs.begin(), wavs.end());
  std::vector<std::string> ids;
  for (const auto& p : wavs) ids.push_back(p.stem().string());

  ExtractResult result;
  std::filesystem::create_directories(opts.out_dir);
  const auto out_dir = std::filesystem::absolute(opts.out_dir);
  const auto tables = audio_feature_tables(
      ids, [&](std::size_t i) { return decode_wav(wavs[i]); }, opts.pitch, opts.jobs, result.warnings);

  DatasetManifest& m = result.manifest;
  m.dataset_id = opts.dataset_id;
  m.role = opts.role;
  for (const FeatureTable* t : {&tables.pitch, &tables.wada_snr}) {
    const auto path = detail::feature_path(out_dir, t->feature_id);
    write_feature_file(*t, path);
    m.feature_files[t->feature_id] = path;
  }
  if (opts.transcripts) m.transcripts = std::filesystem::absolute(*opts.transcripts);
  for (const auto& [k, v] : opts.hypotheses) m.hypotheses[k] = std::filesystem::absolute(v);
  for (const auto& [k, v] : opts.tokens) m.tokens[k] = std::filesystem::absolute(v);
  detail::add_side_features(m, out_dir, result.warnings);
  result.manifest_path = detail::write_manifest(m, out_dir);
  result.manifest.source = result.manifest_path;
  result.utterances = ids.size();
  return result;
}

struct NoiseDatasetOptions {
  std::filesystem::path out_dir;
  std::vector<NoiseKind> kinds{std::begin(kAllNoiseKinds), std::end(kAllNoiseKinds)};
  std::size_t count = 100;
  double duration_s = 3.0;
  std::uint32_t sample_rate = 16000;
  std::uint64_t seed = 0;
  bool write_wav = true;
  bool write_features = true;
  PitchConfig pitch;
  // When set, noise utterances borrow these transcripts (cyclically) and get
  // an empty hypothesis for every ASR id, as an ASR system returns on noise.
  std::optional<std::filesystem::path> transcripts;
  std::vector<std::string> asr_ids;
  std::size_t jobs = 1;
};

inline std::string noise_dataset_id(NoiseKind k) { return "noise_" + std::string(to_string(k)); }

inline std::string noise_utterance_id(NoiseKind k, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_%04zu", i);
  return std::string(to_string(k)) + buf;
}

// Seed of utterance i of kind k; independent of which kinds are generated.
inline std::uint64_t noise_seed(std::uint64_t base, NoiseKind k, std::size_t i) {
  return derive_seed(base, to_string(k), std::to_string(i));
}

// Writes one distractor dataset directory per noise kind. Features are
// computed on the 16-bit quantized signal, i.e. exactly what `extract` would
// see when reading the written WAVs.
inline std::vector<ExtractResult> generate_noise_datasets(const NoiseDatasetOptions& opts) {
  if (opts.count == 0) throw ConfigError("gen-noise: count must be positive");
  std::optional<TextTable> refs;
  if (opts.transcripts) {
    refs = read_text_table(*opts.transcripts);
    if (refs->empty()) throw DataError(opts.transcripts->string() + ": no transcripts");
  } else if (!opts.asr_ids.empty()) {
    throw ConfigError("gen-noise: ASR ids need --transcripts");
  }
  std::vector<ExtractResult> results;
  for (NoiseKind kind : opts.kinds) {
    ExtractResult r;
    const auto dir = std::filesystem::absolute(opts.out_dir / noise_dataset_id(kind));
    std::filesystem::create_directories(dir);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < opts.count; ++i) ids.push_back(noise_utterance_id(kind, i));
    auto make = [&](std::size_t i) {
      return quantize_pcm16(generate_noise(kind, opts.duration_s, opts.sample_rate,
                                           noise_seed(opts.seed, kind, i)));
    };
    if (opts.write_wav) {
      std::filesystem::create_directories(dir / "wav");
      parallel_for(opts.count, opts.jobs,
                   [&](std::size_t i) { write_wav_pcm16(make(i), dir / "wav" / (ids[i] + ".wav")); });
    }
    DatasetManifest& m = r.manifest;
    m.dataset_id = noise_dataset_id(kind);
    m.role = DatasetRole::kDistractor;
    if (opts.write_features) {
      const auto tables = audio_feature_tables(ids, make, opts.pitch, opts.jobs, r.warnings);
      for (const FeatureTable* t : {&tables.pitch, &tables.wada_snr}) {
        const auto path = detail::feature_path(dir, t->feature_id);
        write_feature_file(*t, path);
        m.feature_files[t->feature_id] = path;
      }
    }
    if (refs) {
      TextTable own, empty;
      for (std::size_t i = 0; i < opts.count; ++i) {
        own.emplace_back(ids[i], (*refs)[i % refs->size()].second);
        empty.emplace_back(ids[i], "");
      }
      m.transcripts = dir / "transcripts.tsv";
      write_text_table(own, *m.transcripts);
      for (const auto& asr : opts.asr_ids) {
        const auto path = dir / ("hypotheses_" + asr + ".tsv");
        write_text_table(empty, path);
        m.hypotheses[asr] = path;
      }
      if (opts.write_features) detail::add_side_features(m, dir, r.warnings);
    }
    r.manifest_path = detail::write_manifest(m, dir);
    r.manifest.source = r.manifest_path;
    r.utterances = opts.count;
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace ttsds

#endif  // TTSDS_EXTRACT_HPP_
