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

#ifndef TTSDS_REGISTRY_HPP_
#define TTSDS_REGISTRY_HPP_

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "ttsds/error.hpp"

namespace ttsds {

// The five perceptual factors, in report column order.
enum class Factor { kGeneral, kEnvironment, kIntelligibility, kProsody, kSpeaker };

inline constexpr std::array<Factor, 5> kAllFactors = {
    Factor::kGeneral, Factor::kEnvironment, Factor::kIntelligibility, Factor::kProsody,
    Factor::kSpeaker};

inline std::string_view to_string(Factor f) {
  switch (f) {
    case Factor::kGeneral: return "general";
    case Factor::kEnvironment: return "environment";
    case Factor::kIntelligibility: return "intelligibility";
    case Factor::kProsody: return "prosody";
    case Factor::kSpeaker: return "speaker";
  }
  return "?";
}

inline std::optional<Factor> parse_factor(std::string_view s) {
  for (Factor f : kAllFactors) {
    if (to_string(f) == s) return f;
  }
  return std::nullopt;
}

enum class DimClass { kScalar, kVector };

struct FeatureInfo {
  std::string id;
  Factor factor;
  DimClass dim_class;
};

// Feature id -> (factor, dimension class). Iteration order is the order
// features are aggregated and reported in: by factor, then registration.
class FeatureRegistry {
 public:
  // The default feature set. Native features: pitch, wada_snr,
  // wer_<asr>, hubert_token_length; the rest arrive as feature files.
  static FeatureRegistry standard() {
    FeatureRegistry r;
    r.add("hubert", Factor::kGeneral, DimClass::kVector);
    r.add("wav2vec2", Factor::kGeneral, DimClass::kVector);
    r.add("voicefixer_pesq", Factor::kEnvironment, DimClass::kScalar);
    r.add("wada_snr", Factor::kEnvironment, DimClass::kScalar);
    r.add("wer_wav2vec2", Factor::kIntelligibility, DimClass::kScalar);
    r.add("wer_whisper", Factor::kIntelligibility, DimClass::kScalar);
    r.add("hubert_token_length", Factor::kProsody, DimClass::kScalar);
    r.add("pitch", Factor::kProsody, DimClass::kScalar);
    r.add("mpm", Factor::kProsody, DimClass::kVector);
    r.add("dvector", Factor::kSpeaker, DimClass::kVector);
    r.add("wespeaker", Factor::kSpeaker, DimClass::kVector);
    return r;
  }

  // Adds or remaps a feature. A remapped feature moves to its new factor.
  void add(std::string id, Factor factor, DimClass dim_class) {
    std::erase_if(features_, [&](const FeatureInfo& f) { return f.id == id; });
    features_.push_back({std::move(id), factor, dim_class});
  }

  // Registered features, plus two naming conventions for derived features:
  // wer_<asr> is a scalar intelligibility feature and <tokenizer>_token_length
  // a scalar prosody feature.
  std::optional<FeatureInfo> find(std::string_view id) const {
    for (const auto& f : features_) {
      if (f.id == id) return f;
    }
    if (id.starts_with("wer_") && id.size() > 4) {
      return FeatureInfo{std::string(id), Factor::kIntelligibility, DimClass::kScalar};
    }
    if (id.ends_with("_token_length") && id.size() > 13) {
      return FeatureInfo{std::string(id), Factor::kProsody, DimClass::kScalar};
    }
    return std::nullopt;
  }

  FeatureInfo at(std::string_view id) const {
    auto f = find(id);
    if (!f) throw ConfigError("unknown feature '" + std::string(id) + "' (not in the feature registry)");
    return *f;
  }

  // Sorts ids into report order: factor, then registration, then name.
  std::vector<std::string> ordered(std::vector<std::string> ids) const {
    auto key = [&](const std::string& id) {
      const FeatureInfo info = at(id);
      std::size_t pos = features_.size();
      for (std::size_t i = 0; i < features_.size(); ++i) {
        if (features_[i].id == id) pos = i;
      }
      return std::tuple(static_cast<int>(info.factor), pos, id);
    };
    std::sort(ids.begin(), ids.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
  }

  const std::vector<FeatureInfo>& features() const { return features_; }

 private:
  std::vector<FeatureInfo> features_;
};

}  // namespace ttsds

#endif  // TTSDS_REGISTRY_HPP_
