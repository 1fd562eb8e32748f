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

#ifndef TTSDS_TEXT_FEATURES_HPP_
#define TTSDS_TEXT_FEATURES_HPP_

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ttsds/error.hpp"

namespace ttsds {

// Lengths of maximal runs of equal tokens, in order.
template <typename T>
std::vector<std::uint32_t> token_run_lengths(std::span<const T> tokens) {
  std::vector<std::uint32_t> runs;
  for (std::size_t i = 0; i < tokens.size();) {
    std::size_t j = i + 1;
    while (j < tokens.size() && tokens[j] == tokens[i]) ++j;
    runs.push_back(static_cast<std::uint32_t>(j - i));
    i = j;
  }
  return runs;
}

template <typename T>
std::vector<std::uint32_t> token_run_lengths(const std::vector<T>& tokens) {
  return token_run_lengths(std::span<const T>(tokens));
}

// Lowercases ASCII, drops everything that is not a letter, digit, apostrophe
// or whitespace, then splits on whitespace. Bytes >= 0x80 (UTF-8 sequences)
// are kept as letters.
inline std::vector<std::string> normalize_words(std::string_view text) {
  std::vector<std::string> words;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) words.push_back(std::move(cur));
    cur.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      flush();
    } else if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '\'' || c >= 0x80) {
      cur.push_back(ch);
    } else if (c >= 'A' && c <= 'Z') {
      cur.push_back(static_cast<char>(c - 'A' + 'a'));
    }
  }
  flush();
  return words;
}

inline std::size_t word_edit_distance(const std::vector<std::string>& ref,
                                      const std::vector<std::string>& hyp) {
  std::vector<std::size_t> prev(hyp.size() + 1), cur(hyp.size() + 1);
  for (std::size_t j = 0; j <= hyp.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= ref.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= hyp.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[hyp.size()];
}

// Word error rate; may exceed 1 when the hypothesis has many insertions.
inline double compute_wer(std::string_view reference, std::string_view hypothesis) {
  const auto ref = normalize_words(reference);
  if (ref.empty()) throw DataError("empty reference");
  const auto hyp = normalize_words(hypothesis);
  return static_cast<double>(word_edit_distance(ref, hyp)) / static_cast<double>(ref.size());
}

}  // namespace ttsds

#endif  // TTSDS_TEXT_FEATURES_HPP_
