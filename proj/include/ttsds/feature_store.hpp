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

#ifndef TTSDS_FEATURE_STORE_HPP_
#define TTSDS_FEATURE_STORE_HPP_

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ttsds/error.hpp"
#include "ttsds/json_util.hpp"

namespace ttsds {

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian platforms are not supported");

inline constexpr std::string_view kFeatureMagic = "TTSDSF01";

// All observations of one utterance: n frames of `dim` floats, row-major.
struct Utterance {
  std::string id;
  std::vector<float> values;

  bool operator==(const Utterance&) const = default;
};

// All observations of one feature for one dataset.
struct FeatureTable {
  std::string feature_id;
  std::uint32_t dim = 1;
  std::vector<Utterance> utterances;

  std::size_t frame_count(std::size_t u) const { return utterances[u].values.size() / dim; }

  std::size_t total_frames() const {
    std::size_t n = 0;
    for (std::size_t u = 0; u < utterances.size(); ++u) n += frame_count(u);
    return n;
  }

  void add(std::string id, std::vector<float> values) {
    utterances.push_back({std::move(id), std::move(values)});
  }

  // 64-bit inputs are narrowed to float with round-to-nearest.
  void add(std::string id, std::span<const double> values) {
    std::vector<float> narrowed(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) narrowed[i] = static_cast<float>(values[i]);
    add(std::move(id), std::move(narrowed));
  }

  bool operator==(const FeatureTable&) const = default;
};

// Throws DataError when the table violates any FeatureTable invariant.
inline void validate_table(const FeatureTable& table) {
  const std::string name = table.feature_id.empty() ? "<unnamed>" : table.feature_id;
  if (table.dim == 0) throw DataError("feature '" + name + "': dim must be >= 1");
  std::unordered_set<std::string_view> seen;
  for (const auto& utt : table.utterances) {
    if (!seen.insert(utt.id).second) {
      throw DataError("feature '" + name + "': duplicate utterance id '" + utt.id + "'");
    }
    if (utt.values.size() % table.dim != 0) {
      throw DataError("feature '" + name + "', utterance '" + utt.id +
                      "': value count is not a multiple of dim");
    }
    for (std::size_t i = 0; i < utt.values.size(); ++i) {
      if (!std::isfinite(utt.values[i])) {
        throw DataError("feature '" + name + "': non-finite value in utterance '" + utt.id +
                        "', frame " + std::to_string(i / table.dim));
      }
    }
  }
}

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<char>((v >> shift) & 0xffu));
}

inline std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace detail

// Serializes a table to the little-endian interchange layout.
inline std::string encode_feature_table(const FeatureTable& table) {
  validate_table(table);
  if (table.utterances.size() > UINT32_MAX) throw DataError("too many utterances");
  std::string out(kFeatureMagic);
  detail::put_u32(out, static_cast<std::uint32_t>(table.utterances.size()));
  detail::put_u32(out, table.dim);
  for (std::size_t u = 0; u < table.utterances.size(); ++u) {
    const std::size_t n = table.frame_count(u);
    if (n > UINT32_MAX) throw DataError("utterance '" + table.utterances[u].id + "' too long");
    detail::put_u32(out, static_cast<std::uint32_t>(n));
  }
  for (const auto& utt : table.utterances) {
    detail::put_u32(out, static_cast<std::uint32_t>(utt.id.size()));
    out += utt.id;
  }
  for (const auto& utt : table.utterances) {
    for (float v : utt.values) detail::put_u32(out, std::bit_cast<std::uint32_t>(v));
  }
  return out;
}

inline FeatureTable decode_feature_table(std::string_view bytes, const std::string& origin,
                                         std::string feature_id = {}) {
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::uint64_t size = bytes.size();
  if (size < kFeatureMagic.size() || bytes.substr(0, 6) != kFeatureMagic.substr(0, 6)) {
    throw DataError(origin + ": not a feature file");
  }
  if (bytes.substr(0, 8) != kFeatureMagic) {
    throw DataError(origin + ": unsupported feature file version '" +
                    std::string(bytes.substr(6, 2)) + "'");
  }
  std::uint64_t pos = 8;
  auto need = [&](std::uint64_t n) {
    if (size - pos < n) throw DataError(origin + ": size mismatch (truncated header)");
  };
  need(8);
  const std::uint32_t n_utts = detail::get_u32(p + pos);
  const std::uint32_t dim = detail::get_u32(p + pos + 4);
  pos += 8;
  if (dim == 0) throw DataError(origin + ": invalid header (dim = 0)");

  need(std::uint64_t{4} * n_utts);
  std::vector<std::uint32_t> counts(n_utts);
  std::uint64_t total_values = 0;
  for (std::uint32_t u = 0; u < n_utts; ++u) {
    counts[u] = detail::get_u32(p + pos);
    pos += 4;
    total_values += std::uint64_t{counts[u]} * dim;
  }

  FeatureTable table;
  table.feature_id = std::move(feature_id);
  table.dim = dim;
  table.utterances.resize(n_utts);
  std::unordered_set<std::string_view> seen;
  for (std::uint32_t u = 0; u < n_utts; ++u) {
    need(4);
    const std::uint32_t len = detail::get_u32(p + pos);
    pos += 4;
    need(len);
    table.utterances[u].id.assign(bytes.data() + pos, len);
    pos += len;
  }
  for (const auto& utt : table.utterances) {
    if (!seen.insert(utt.id).second) {
      throw DataError(origin + ": duplicate utterance id '" + utt.id + "'");
    }
  }
  // Overflow-safe: total_values <= 2^32 * 2^32, so compare against remaining / 4.
  if ((size - pos) % 4 != 0 || (size - pos) / 4 != total_values) {
    throw DataError(origin + ": size mismatch (header declares " + std::to_string(total_values) +
                    " values, payload holds " + std::to_string((size - pos) / 4) + ")");
  }
  for (std::uint32_t u = 0; u < n_utts; ++u) {
    auto& values = table.utterances[u].values;
    values.resize(std::size_t{counts[u]} * dim);
    for (auto& v : values) {
      v = std::bit_cast<float>(detail::get_u32(p + pos));
      pos += 4;
      if (!std::isfinite(v)) {
        throw DataError(origin + ": non-finite value in utterance '" + table.utterances[u].id + "'");
      }
    }
  }
  return table;
}

// Writes `table`. Validation happens before the file is opened, so an invalid
// table never leaves a partial file behind.
inline void write_feature_file(const FeatureTable& table, const std::filesystem::path& path) {
  write_text_file(path, encode_feature_table(table));
}

inline FeatureTable read_feature_file(const std::filesystem::path& path,
                                      std::string feature_id = {}) {
  return decode_feature_table(read_text_file(path), path.string(), std::move(feature_id));
}

// ---------------------------------------------------------------------------
// Dataset manifests

enum class DatasetRole { kCandidate, kReference, kDistractor };

inline std::string_view to_string(DatasetRole role) {
  switch (role) {
    case DatasetRole::kCandidate: return "candidate";
    case DatasetRole::kReference: return "reference";
    case DatasetRole::kDistractor: return "distractor";
  }
  return "?";
}

inline std::optional<DatasetRole> parse_role(std::string_view s) {
  if (s == "candidate") return DatasetRole::kCandidate;
  if (s == "reference") return DatasetRole::kReference;
  if (s == "distractor") return DatasetRole::kDistractor;
  return std::nullopt;
}

// A dataset description. Paths are resolved against the manifest's directory.
struct DatasetManifest {
  std::string dataset_id;
  DatasetRole role = DatasetRole::kReference;
  std::map<std::string, std::filesystem::path> feature_files;
  std::optional<std::filesystem::path> transcripts;
  std::map<std::string, std::filesystem::path> hypotheses;
  std::map<std::string, std::filesystem::path> tokens;
  std::filesystem::path source;
};

namespace detail {

inline std::map<std::string, std::filesystem::path> path_map(const Json& doc, const char* key,
                                                             const std::filesystem::path& base,
                                                             const std::string& origin) {
  std::map<std::string, std::filesystem::path> out;
  if (!doc.contains(key)) return out;
  const Json& obj = doc.at(key);
  if (!obj.is_object()) throw DataError(origin + ": '" + key + "' must be an object");
  for (const auto& [name, value] : obj.items()) {
    if (!value.is_string()) {
      throw DataError(origin + ": " + key + "." + name + " must be a path string");
    }
    std::filesystem::path p = base / value.get<std::string>();
    if (!std::filesystem::exists(p)) {
      throw DataError(origin + ": dangling path for " + key + "." + name + ": " + p.string());
    }
    out.emplace(name, std::move(p));
  }
  return out;
}

}  // namespace detail

inline DatasetManifest load_manifest(const std::filesystem::path& path) {
  const std::string origin = path.string();
  const Json doc = load_json_file(path);
  if (!doc.is_object()) throw DataError(origin + ": manifest must be a JSON object");
  const auto base = path.parent_path();

  DatasetManifest m;
  m.source = path;
  if (!doc.contains("dataset_id") || !doc["dataset_id"].is_string() ||
      doc["dataset_id"].get<std::string>().empty()) {
    throw DataError(origin + ": missing or empty 'dataset_id'");
  }
  m.dataset_id = doc["dataset_id"].get<std::string>();
  if (!doc.contains("role") || !doc["role"].is_string()) {
    throw DataError(origin + ": missing 'role'");
  }
  const auto role = parse_role(doc["role"].get<std::string>());
  if (!role) throw DataError(origin + ": unknown role '" + doc["role"].get<std::string>() + "'");
  m.role = *role;
  if (!doc.contains("feature_files")) throw DataError(origin + ": missing 'feature_files'");
  m.feature_files = detail::path_map(doc, "feature_files", base, origin);
  if (doc.contains("transcripts") && !doc["transcripts"].is_null()) {
    if (!doc["transcripts"].is_string()) throw DataError(origin + ": 'transcripts' must be a path");
    std::filesystem::path p = base / doc["transcripts"].get<std::string>();
    if (!std::filesystem::exists(p)) {
      throw DataError(origin + ": dangling path for transcripts: " + p.string());
    }
    m.transcripts = std::move(p);
  }
  m.hypotheses = detail::path_map(doc, "hypotheses", base, origin);
  m.tokens = detail::path_map(doc, "tokens", base, origin);
  return m;
}

// Serializes a manifest with paths relative to `base`.
inline Json manifest_to_json(const DatasetManifest& m, const std::filesystem::path& base) {
  auto rel = [&](const std::filesystem::path& p) {
    return p.is_absolute() ? std::filesystem::relative(p, base).generic_string()
                           : p.generic_string();
  };
  Json doc;
  doc["dataset_id"] = m.dataset_id;
  doc["role"] = std::string(to_string(m.role));
  doc["feature_files"] = Json::object();
  for (const auto& [k, v] : m.feature_files) doc["feature_files"][k] = rel(v);
  if (m.transcripts) doc["transcripts"] = rel(*m.transcripts);
  if (!m.hypotheses.empty()) {
    for (const auto& [k, v] : m.hypotheses) doc["hypotheses"][k] = rel(v);
  }
  if (!m.tokens.empty()) {
    for (const auto& [k, v] : m.tokens) doc["tokens"][k] = rel(v);
  }
  return doc;
}

// ---------------------------------------------------------------------------
// TSV side files

namespace detail {

template <typename Fn>
void for_each_tsv_line(const std::filesystem::path& path, Fn&& fn) {
  std::istringstream in(read_text_file(path));
  std::string line;
  std::size_t lineno = 0;
  std::unordered_set<std::string> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": missing TAB separator");
    }
    std::string id = line.substr(0, tab);
    if (!seen.insert(id).second) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": duplicate utterance id '" +
                      id + "'");
    }
    fn(std::move(id), std::string_view(line).substr(tab + 1), lineno);
  }
}

}  // namespace detail

// utterance_id TAB text, one per line, in file order.
using TextTable = std::vector<std::pair<std::string, std::string>>;

inline TextTable read_text_table(const std::filesystem::path& path) {
  TextTable out;
  detail::for_each_tsv_line(path, [&](std::string id, std::string_view text, std::size_t) {
    out.emplace_back(std::move(id), std::string(text));
  });
  return out;
}

inline void write_text_table(const TextTable& rows, const std::filesystem::path& path) {
  std::string text;
  for (const auto& [id, t] : rows) text += id + '\t' + t + '\n';
  write_text_file(path, text);
}

using TokenTable = std::vector<std::pair<std::string, std::vector<std::int64_t>>>;

inline TokenTable read_token_file(const std::filesystem::path& path) {
  TokenTable out;
  detail::for_each_tsv_line(path, [&](std::string id, std::string_view rest, std::size_t lineno) {
    std::vector<std::int64_t> toks;
    std::istringstream ss{std::string(rest)};
    std::string word;
    while (ss >> word) {
      std::size_t used = 0;
      long long v = -1;
      try {
        v = std::stoll(word, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != word.size() || v < 0) {
        throw DataError(path.string() + ":" + std::to_string(lineno) + ": invalid token '" +
                        word + "'");
      }
      toks.push_back(v);
    }
    out.emplace_back(std::move(id), std::move(toks));
  });
  return out;
}

inline void write_token_file(const TokenTable& rows, const std::filesystem::path& path) {
  std::string text;
  for (const auto& [id, toks] : rows) {
    text += id + '\t';
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (i) text += ' ';
      text += std::to_string(toks[i]);
    }
    text += '\n';
  }
  write_text_file(path, text);
}

}  // namespace ttsds

#endif  // TTSDS_FEATURE_STORE_HPP_
