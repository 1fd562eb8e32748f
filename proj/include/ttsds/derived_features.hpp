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

#ifndef TTSDS_DERIVED_FEATURES_HPP_
#define TTSDS_DERIVED_FEATURES_HPP_

#include <string>
#include <unordered_map>
#include <vector>

#include "ttsds/feature_store.hpp"
#include "ttsds/text_features.hpp"

namespace ttsds {

// Per-utterance WER as a scalar feature. Utterances without a usable
// reference or hypothesis keep zero frames and add a warning.
inline FeatureTable wer_table(const TextTable& transcripts, const TextTable& hypotheses,
                              std::string feature_id, std::vector<std::string>& warnings) {
  std::unordered_map<std::string, const std::string*> hyp;
  for (const auto& [id, text] : hypotheses) hyp.emplace(id, &text);
  FeatureTable table;
  table.feature_id = std::move(feature_id);
  table.dim = 1;
  for (const auto& [id, ref] : transcripts) {
    const auto it = hyp.find(id);
    if (it == hyp.end()) {
      warnings.push_back(table.feature_id + ": no hypothesis for utterance '" + id + "', skipped");
      table.add(id, std::vector<float>{});
      continue;
    }
    try {
      table.add(id, std::vector<double>{compute_wer(ref, *it->second)});
    } catch (const DataError& e) {
      warnings.push_back(table.feature_id + ": utterance '" + id + "': " + e.what() + ", skipped");
      table.add(id, std::vector<float>{});
    }
  }
  return table;
}

// Run lengths of repeated tokens, one scalar frame per run.
inline FeatureTable token_length_table(const TokenTable& tokens, std::string feature_id) {
  FeatureTable table;
  table.feature_id = std::move(feature_id);
  table.dim = 1;
  for (const auto& [id, toks] : tokens) {
    const auto runs = token_run_lengths(toks);
    table.add(id, std::vector<float>(runs.begin(), runs.end()));
  }
  return table;
}

inline constexpr std::string_view kTokenLengthSuffix = "_token_length";

inline std::string wer_feature_id(std::string_view asr_id) { return "wer_" + std::string(asr_id); }

inline std::string token_length_feature_id(std::string_view tokenizer_id) {
  return std::string(tokenizer_id) + std::string(kTokenLengthSuffix);
}

}  // namespace ttsds

#endif  // TTSDS_DERIVED_FEATURES_HPP_
