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

#ifndef TTSDS_SCORING_HPP_
#define TTSDS_SCORING_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <openssl/evp.h>

#include "ttsds/derived_features.hpp"
#include "ttsds/distance.hpp"
#include "ttsds/error.hpp"
#include "ttsds/feature_store.hpp"
#include "ttsds/json_util.hpp"
#include "ttsds/parallel.hpp"
#include "ttsds/registry.hpp"
#include "ttsds/rng.hpp"

namespace ttsds {

inline constexpr std::string_view kEngineVersion = "1.0.0";
inline constexpr std::size_t kRecommendedUtterances = 80;

// ---------------------------------------------------------------------------
// Per-feature score

struct ScoreValue {
  double value = 50.0;
  bool degenerate = false;  // both distances were zero
};

// 100 * w_noise / (w_real + w_noise); above 50 means the candidate sits closer
// to the nearest real dataset than to the nearest distractor.
inline ScoreValue feature_score(double w_real, double w_noise) {
  if (!(w_real >= 0.0) || !(w_noise >= 0.0) || !std::isfinite(w_real) || !std::isfinite(w_noise)) {
    throw NumericalError("feature_score: distances must be finite and non-negative");
  }
  const double total = w_real + w_noise;
  if (total == 0.0) return {50.0, true};
  // Divide first: w / (w + w) is exactly 0.5 and w / (0 + w) exactly 1.
  return {std::clamp(100.0 * (w_noise / total), 0.0, 100.0), false};
}

struct Nearest {
  double distance = 0.0;
  std::string dataset_id;
};

// Smallest distance; ties go to the lexicographically smaller dataset id.
inline Nearest nearest(std::span<const std::pair<std::string, double>> distances,
                       std::string_view feature_id, std::string_view collection) {
  if (distances.empty()) {
    throw ConfigError("feature '" + std::string(feature_id) + "': no " + std::string(collection) +
                      " datasets to compare against");
  }
  Nearest best{distances[0].second, distances[0].first};
  for (const auto& [id, d] : distances.subspan(1)) {
    if (d < best.distance || (d == best.distance && id < best.dataset_id)) best = {d, id};
  }
  return best;
}

struct MinDistances {
  Nearest real;
  Nearest noise;
};

inline double distance_between(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  if (a.dim() != b.dim()) {
    throw DataError("dimension mismatch between '" + a.source_dataset_id + "' (" +
                    std::to_string(a.dim()) + ") and '" + b.source_dataset_id + "' (" +
                    std::to_string(b.dim()) + ")");
  }
  if (method_for_dim(a.dim()) == DistanceMethod::kExact1d) return wasserstein_1d(a, b).value;
  return wasserstein_gaussian(summarize_gaussian(a), summarize_gaussian(b));
}

inline MinDistances min_distances(const EmpiricalDistribution& candidate,
                                  std::span<const EmpiricalDistribution> reals,
                                  std::span<const EmpiricalDistribution> noises,
                                  std::string_view feature_id) {
  auto collect = [&](std::span<const EmpiricalDistribution> pool) {
    std::vector<std::pair<std::string, double>> out;
    for (const auto& d : pool) out.emplace_back(d.source_dataset_id, distance_between(candidate, d));
    return out;
  };
  const auto r = collect(reals);
  const auto n = collect(noises);
  return {nearest(r, feature_id, "reference"), nearest(n, feature_id, "distractor")};
}

// ---------------------------------------------------------------------------
// Report types

struct FeatureScore {
  std::string feature_id;
  DistanceMethod method = DistanceMethod::kExact1d;
  std::uint32_t dim = 1;
  std::size_t n_candidate = 0;
  double score = 50.0;
  double w_real = 0.0;
  double w_noise = 0.0;
  std::string nearest_real;
  std::string nearest_noise;
  bool degenerate = false;
  std::map<std::string, double> real_distances;
  std::map<std::string, double> noise_distances;
};

struct FactorScore {
  Factor factor = Factor::kGeneral;
  bool excluded = false;
  double score = 0.0;
  std::vector<FeatureScore> features;
};

struct Provenance {
  std::string engine_version{kEngineVersion};
  std::uint64_t seed = 0;
  std::size_t max_obs = kDefaultMaxObs;
  std::vector<std::string> references;
  std::vector<std::string> distractors;
  std::map<std::string, std::string> manifest_sha256;  // dataset id -> hash
};

struct ScoreReport {
  std::string candidate_id;
  std::vector<FactorScore> factors;  // always all five, in kAllFactors order
  double ttsds = 0.0;
  std::vector<std::string> warnings;
  Provenance provenance;

  const FactorScore& factor(Factor f) const { return factors.at(static_cast<std::size_t>(f)); }
};

// Mean over member features per factor, then mean over non-excluded factors.
inline ScoreReport aggregate(std::vector<FeatureScore> feature_scores,
                             const FeatureRegistry& registry,
                             const std::set<Factor>& excluded = {}) {
  ScoreReport report;
  std::vector<std::string> ids;
  for (const auto& fs : feature_scores) ids.push_back(fs.feature_id);
  const auto order = registry.ordered(ids);
  if (order.size() != feature_scores.size()) throw ConfigError("aggregate: duplicate feature scores");
  std::sort(feature_scores.begin(), feature_scores.end(), [&](const auto& a, const auto& b) {
    return std::find(order.begin(), order.end(), a.feature_id) <
           std::find(order.begin(), order.end(), b.feature_id);
  });
  for (Factor f : kAllFactors) {
    FactorScore fs;
    fs.factor = f;
    fs.excluded = excluded.contains(f);
    report.factors.push_back(std::move(fs));
  }
  for (auto& s : feature_scores) {
    auto& factor = report.factors[static_cast<std::size_t>(registry.at(s.feature_id).factor)];
    if (factor.excluded) {
      throw ConfigError("feature '" + s.feature_id + "' belongs to excluded factor '" +
                        std::string(to_string(factor.factor)) + "'");
    }
    factor.features.push_back(std::move(s));
  }
  double sum = 0.0;
  std::size_t counted = 0;
  for (auto& factor : report.factors) {
    if (factor.excluded) continue;
    if (factor.features.empty()) {
      throw ConfigError("factor '" + std::string(to_string(factor.factor)) +
                        "' has no features; enable one or exclude the factor");
    }
    double fsum = 0.0;
    for (const auto& s : factor.features) fsum += s.score;
    factor.score = fsum / static_cast<double>(factor.features.size());
    sum += factor.score;
    ++counted;
  }
  if (counted == 0) throw ConfigError("all factors are excluded");
  report.ttsds = sum / static_cast<double>(counted);
  return report;
}

// Unweighted mean of factor scores.
inline double ttsds_from_factors(std::span<const double> factor_scores) {
  if (factor_scores.empty()) throw ConfigError("no factor scores");
  double sum = 0.0;
  for (double v : factor_scores) sum += v;
  return sum / static_cast<double>(factor_scores.size());
}

// Rounds to `decimals` places, sending exact decimal ties to the even digit.
// Ties are detected with a small relative tolerance so that values such as
// 83.85, which are not representable in binary, still count as ties.
inline double round_half_even(double x, int decimals = 1) {
  const double scale = std::pow(10.0, decimals);
  const double scaled = x * scale;
  const double lower = std::floor(scaled);
  const double frac = scaled - lower;
  const double tol = 1e-9 * std::max(1.0, std::abs(scaled));
  double rounded;
  if (std::abs(frac - 0.5) <= tol) {
    rounded = std::fmod(lower, 2.0) == 0.0 ? lower : lower + 1.0;
  } else {
    rounded = frac < 0.5 ? lower : lower + 1.0;
  }
  return rounded / scale;
}

inline std::string format_fixed(double x, int decimals = 1) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(decimals) << round_half_even(x, decimals);
  return out.str();
}

// ---------------------------------------------------------------------------
// Report (de)serialization

inline Json to_json(const FeatureScore& s) {
  Json j;
  j["feature_id"] = s.feature_id;
  j["method"] = std::string(to_string(s.method));
  j["dim"] = s.dim;
  j["n_candidate"] = s.n_candidate;
  j["score"] = s.score;
  j["w_real"] = s.w_real;
  j["w_noise"] = s.w_noise;
  j["nearest_real"] = s.nearest_real;
  j["nearest_noise"] = s.nearest_noise;
  j["degenerate"] = s.degenerate;
  j["distances"]["real"] = s.real_distances;
  j["distances"]["noise"] = s.noise_distances;
  return j;
}

inline Json to_json(const ScoreReport& r) {
  Json j;
  j["candidate_id"] = r.candidate_id;
  j["ttsds"] = r.ttsds;
  j["factors"] = Json::array();
  for (const auto& f : r.factors) {
    Json fj;
    fj["factor"] = std::string(to_string(f.factor));
    fj["excluded"] = f.excluded;
    fj["score"] = f.excluded ? Json(nullptr) : Json(f.score);
    fj["features"] = Json::array();
    for (const auto& s : f.features) fj["features"].push_back(to_json(s));
    j["factors"].push_back(std::move(fj));
  }
  j["warnings"] = r.warnings;
  Json p;
  p["engine_version"] = r.provenance.engine_version;
  p["seed"] = r.provenance.seed;
  p["max_obs"] = r.provenance.max_obs;
  p["references"] = r.provenance.references;
  p["distractors"] = r.provenance.distractors;
  p["manifest_sha256"] = r.provenance.manifest_sha256;
  j["provenance"] = std::move(p);
  return j;
}

inline std::string report_to_string(const ScoreReport& r) { return to_json(r).dump(2) + "\n"; }

// Reads the subset of a report needed by validate and compare.
inline ScoreReport report_from_json(const Json& j, const std::string& origin) {
  try {
    ScoreReport r;
    r.candidate_id = j.at("candidate_id").get<std::string>();
    r.ttsds = j.at("ttsds").get<double>();
    if (j.contains("factors")) {
      for (const auto& fj : j.at("factors")) {
        FactorScore f;
        const auto factor = parse_factor(fj.at("factor").get<std::string>());
        if (!factor) throw DataError(origin + ": unknown factor '" + fj.at("factor").get<std::string>() + "'");
        f.factor = *factor;
        f.excluded = fj.value("excluded", false);
        f.score = fj.at("score").is_null() ? 0.0 : fj.at("score").get<double>();
        if (fj.contains("features")) {
          for (const auto& sj : fj.at("features")) {
            FeatureScore s;
            s.feature_id = sj.at("feature_id").get<std::string>();
            s.score = sj.at("score").get<double>();
            s.w_real = sj.value("w_real", 0.0);
            s.w_noise = sj.value("w_noise", 0.0);
            s.nearest_real = sj.value("nearest_real", "");
            s.nearest_noise = sj.value("nearest_noise", "");
            f.features.push_back(std::move(s));
          }
        }
        r.factors.push_back(std::move(f));
      }
    }
    return r;
  } catch (const Json::exception& e) {
    throw DataError(origin + ": malformed report: " + e.what());
  }
}

inline ScoreReport read_report(const std::filesystem::path& path) {
  return report_from_json(load_json_file(path), path.string());
}

// Aligned text table: System, Gen, Env, Int, Pro, Spk, TTSDS.
inline std::string render_table(std::span<const ScoreReport> reports) {
  std::size_t name_width = 6;
  for (const auto& r : reports) name_width = std::max(name_width, r.candidate_id.size());
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(name_width)) << "System";
  for (const char* col : {"Gen", "Env", "Int", "Pro", "Spk", "TTSDS"}) {
    out << "  " << std::right << std::setw(6) << col;
  }
  out << "\n";
  for (const auto& r : reports) {
    out << std::left << std::setw(static_cast<int>(name_width)) << r.candidate_id;
    for (Factor f : kAllFactors) {
      const auto it = std::find_if(r.factors.begin(), r.factors.end(),
                                   [&](const FactorScore& fs) { return fs.factor == f; });
      const std::string cell =
          (it == r.factors.end() || it->excluded) ? std::string("-") : format_fixed(it->score);
      out << "  " << std::right << std::setw(6) << cell;
    }
    out << "  " << std::right << std::setw(6) << format_fixed(r.ttsds) << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Benchmark manifest and driver

inline std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

struct BenchmarkManifest {
  std::filesystem::path candidate;
  std::vector<std::filesystem::path> references;
  std::vector<std::filesystem::path> distractors;
  std::optional<std::vector<std::string>> features;  // nullopt = "auto"
  std::set<Factor> exclude_factors;
  std::size_t max_obs = kDefaultMaxObs;
  std::uint64_t seed = 0;
  std::map<std::string, Factor> factor_map;  // extra or remapped features
};

inline BenchmarkManifest load_benchmark_manifest(const std::filesystem::path& path) {
  const std::string origin = path.string();
  const Json doc = load_json_file(path);
  const auto base = path.parent_path();
  BenchmarkManifest m;
  try {
    if (!doc.is_object()) throw DataError(origin + ": benchmark manifest must be an object");
    if (!doc.contains("candidate")) throw DataError(origin + ": missing 'candidate'");
    m.candidate = base / doc.at("candidate").get<std::string>();
    for (const auto& p : doc.value("references", Json::array())) {
      m.references.push_back(base / p.get<std::string>());
    }
    for (const auto& p : doc.value("distractors", Json::array())) {
      m.distractors.push_back(base / p.get<std::string>());
    }
    if (doc.contains("features")) {
      const Json& f = doc.at("features");
      if (f.is_string()) {
        if (f.get<std::string>() != "auto") throw DataError(origin + ": 'features' must be a list or \"auto\"");
      } else {
        m.features = f.get<std::vector<std::string>>();
      }
    }
    for (const auto& name : doc.value("exclude_factors", Json::array())) {
      const auto factor = parse_factor(name.get<std::string>());
      if (!factor) throw DataError(origin + ": unknown factor '" + name.get<std::string>() + "'");
      m.exclude_factors.insert(*factor);
    }
    if (doc.contains("max_obs")) m.max_obs = doc.at("max_obs").get<std::size_t>();
    if (doc.contains("seed")) m.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("factor_map")) {
      for (const auto& [feature, name] : doc.at("factor_map").items()) {
        const auto factor = parse_factor(name.get<std::string>());
        if (!factor) throw DataError(origin + ": unknown factor '" + name.get<std::string>() + "'");
        m.factor_map[feature] = *factor;
      }
    }
  } catch (const Json::exception& e) {
    throw DataError(origin + ": malformed benchmark manifest: " + e.what());
  }
  if (m.max_obs < 2) throw ConfigError(origin + ": max_obs must be at least 2");
  return m;
}

struct RunOptions {
  std::size_t jobs = 1;
  std::optional<std::uint64_t> seed;     // overrides the manifest seed
  std::optional<std::size_t> max_obs;    // overrides the manifest max_obs
};

namespace detail {

struct LoadedDataset {
  DatasetManifest manifest;
  std::string sha256;
};

inline std::set<std::string> available_features(const DatasetManifest& m) {
  std::set<std::string> out;
  for (const auto& [id, _] : m.feature_files) out.insert(id);
  if (m.transcripts) {
    for (const auto& [asr, _] : m.hypotheses) out.insert(wer_feature_id(asr));
  }
  for (const auto& [tok, _] : m.tokens) out.insert(token_length_feature_id(tok));
  return out;
}

inline FeatureTable load_feature(const DatasetManifest& m, const std::string& feature_id,
                                 std::vector<std::string>& warnings) {
  if (const auto it = m.feature_files.find(feature_id); it != m.feature_files.end()) {
    return read_feature_file(it->second, feature_id);
  }
  if (m.transcripts) {
    for (const auto& [asr, path] : m.hypotheses) {
      if (wer_feature_id(asr) == feature_id) {
        return wer_table(read_text_table(*m.transcripts), read_text_table(path), feature_id, warnings);
      }
    }
  }
  for (const auto& [tok, path] : m.tokens) {
    if (token_length_feature_id(tok) == feature_id) {
      return token_length_table(read_token_file(path), feature_id);
    }
  }
  throw ConfigError("dataset '" + m.dataset_id + "' has no data for feature '" + feature_id + "'");
}

// One pooled (dataset, feature) cell.
struct Cell {
  std::optional<EmpiricalDistribution> dist;
  std::size_t utterances = 0;
  std::size_t rows = 0;  // pooled observations
  std::vector<std::string> warnings;
  std::vector<double> sorted;              // D = 1
  std::optional<GaussianSummary> gaussian; // D > 1
};

}  // namespace detail

// Scores one candidate against its references and distractors. Reports are a
// pure function of the manifest contents and seed: datasets are processed in
// dataset-id order and every (dataset, feature) cell draws from its own
// seed stream, so neither listing order nor thread count changes the output.
inline ScoreReport run_benchmark(const BenchmarkManifest& bm, const RunOptions& opts = {}) {
  const std::uint64_t seed = opts.seed.value_or(bm.seed);
  const std::size_t max_obs = opts.max_obs.value_or(bm.max_obs);
  std::vector<std::string> warnings;

  FeatureRegistry registry = FeatureRegistry::standard();
  for (const auto& [id, factor] : bm.factor_map) {
    const auto known = registry.find(id);
    registry.add(id, factor, known ? known->dim_class : DimClass::kScalar);
  }

  auto load = [&](const std::filesystem::path& p, DatasetRole expected) {
    detail::LoadedDataset d{load_manifest(p), sha256_hex(read_text_file(p))};
    if (d.manifest.role != expected) {
      warnings.push_back("dataset '" + d.manifest.dataset_id + "' declares role '" +
                         std::string(to_string(d.manifest.role)) + "' but is used as " +
                         std::string(to_string(expected)));
    }
    return d;
  };
  if (bm.references.empty()) throw ConfigError("benchmark needs at least one reference dataset");
  if (bm.distractors.empty()) throw ConfigError("benchmark needs at least one distractor dataset");
  detail::LoadedDataset candidate = load(bm.candidate, DatasetRole::kCandidate);
  std::vector<detail::LoadedDataset> refs, noises;
  for (const auto& p : bm.references) refs.push_back(load(p, DatasetRole::kReference));
  for (const auto& p : bm.distractors) noises.push_back(load(p, DatasetRole::kDistractor));
  auto by_id = [](const auto& a, const auto& b) { return a.manifest.dataset_id < b.manifest.dataset_id; };
  std::sort(refs.begin(), refs.end(), by_id);
  std::sort(noises.begin(), noises.end(), by_id);
  // Role-mismatch warnings were pushed in listing order; restore a canonical order.
  std::sort(warnings.begin(), warnings.end());

  std::vector<const detail::LoadedDataset*> all{&candidate};
  for (const auto& d : refs) all.push_back(&d);
  for (const auto& d : noises) all.push_back(&d);
  {
    std::set<std::string> ids;
    for (const auto* d : all) {
      if (!ids.insert(d->manifest.dataset_id).second) {
        throw ConfigError("dataset id '" + d->manifest.dataset_id + "' appears more than once");
      }
    }
  }

  // Enabled features.
  const auto cand_features = detail::available_features(candidate.manifest);
  std::vector<std::string> enabled;
  if (bm.features) {
    for (const auto& id : *bm.features) {
      registry.at(id);
      if (!cand_features.contains(id)) {
        throw ConfigError("feature '" + id + "' is missing for candidate '" +
                          candidate.manifest.dataset_id + "'");
      }
      enabled.push_back(id);
    }
  } else {
    for (const auto& id : cand_features) {
      if (registry.find(id)) {
        enabled.push_back(id);
      } else {
        warnings.push_back("feature '" + id + "' is not in the registry and was ignored");
      }
    }
  }
  enabled = registry.ordered(enabled);
  std::erase_if(enabled, [&](const std::string& id) {
    return bm.exclude_factors.contains(registry.at(id).factor);
  });
  for (Factor f : kAllFactors) {
    if (bm.exclude_factors.contains(f)) continue;
    const bool covered = std::any_of(enabled.begin(), enabled.end(), [&](const std::string& id) {
      return registry.at(id).factor == f;
    });
    if (!covered) {
      throw ConfigError("factor '" + std::string(to_string(f)) +
                        "' has no enabled features; add one or list it in exclude_factors");
    }
  }
  for (const auto* d : all) {
    const auto have = detail::available_features(d->manifest);
    for (const auto& id : enabled) {
      if (!have.contains(id)) {
        throw ConfigError("feature '" + id + "' is available for the candidate but missing for " +
                          std::string(to_string(d->manifest.role)) + " dataset '" +
                          d->manifest.dataset_id + "'");
      }
    }
  }

  // Load, validate and pool every (dataset, feature) cell.
  const std::size_t n_feat = enabled.size();
  std::vector<detail::Cell> cells(all.size() * n_feat);
  std::vector<std::uint32_t> dims(all.size() * n_feat, 0);
  parallel_for(cells.size(), opts.jobs, [&](std::size_t k) {
    const auto& ds = all[k / n_feat]->manifest;
    const std::string& fid = enabled[k % n_feat];
    auto& cell = cells[k];
    FeatureTable table = detail::load_feature(ds, fid, cell.warnings);
    table.feature_id = fid;
    dims[k] = table.dim;
    cell.utterances = table.utterances.size();
    try {
      cell.dist = pool(table, max_obs, derive_seed(seed, fid, ds.dataset_id), ds.dataset_id);
    } catch (const InsufficientDataError& e) {
      if (k / n_feat == 0) throw;
      cell.warnings.push_back(std::string(e.what()) + "; dataset skipped for this feature");
      return;
    }
    cell.rows = static_cast<std::size_t>(cell.dist->size());
    if (cell.dist->dim() == 1) {
      cell.sorted = column_values(*cell.dist);
      std::sort(cell.sorted.begin(), cell.sorted.end());
    } else {
      cell.gaussian = summarize_gaussian(*cell.dist);
    }
    cell.dist.reset();  // summaries are all we need from here on
  });

  for (std::size_t f = 0; f < n_feat; ++f) {
    const FeatureInfo info = registry.at(enabled[f]);
    for (std::size_t d = 0; d < all.size(); ++d) {
      if (dims[d * n_feat + f] != dims[f]) {
        throw DataError("feature '" + enabled[f] + "': dataset '" + all[d]->manifest.dataset_id +
                        "' has dimension " + std::to_string(dims[d * n_feat + f]) +
                        " but the candidate has " + std::to_string(dims[f]));
      }
    }
    if (info.dim_class == DimClass::kScalar && dims[f] != 1) {
      warnings.push_back("feature '" + enabled[f] + "' is registered as scalar but has dimension " +
                         std::to_string(dims[f]));
    }
  }
  for (std::size_t d = 0; d < all.size(); ++d) {
    std::size_t fewest = SIZE_MAX;
    for (std::size_t f = 0; f < n_feat; ++f) fewest = std::min(fewest, cells[d * n_feat + f].utterances);
    if (n_feat > 0 && fewest < kRecommendedUtterances) {
      warnings.push_back("dataset '" + all[d]->manifest.dataset_id + "' has only " +
                         std::to_string(fewest) + " utterances (at least " +
                         std::to_string(kRecommendedUtterances) + " recommended)");
    }
    for (std::size_t f = 0; f < n_feat; ++f) {
      auto& w = cells[d * n_feat + f].warnings;
      warnings.insert(warnings.end(), w.begin(), w.end());
    }
  }

  // Candidate-vs-dataset distances.
  const std::size_t n_other = all.size() - 1;
  std::vector<double> dist(n_feat * n_other, -1.0);
  parallel_for(dist.size(), opts.jobs, [&](std::size_t k) {
    const std::size_t f = k / n_other, d = 1 + k % n_other;
    const auto& cand = cells[f];
    const auto& other = cells[d * n_feat + f];
    if (other.sorted.empty() && !other.gaussian) return;  // skipped cell
    const double v = cand.gaussian ? wasserstein_gaussian(*cand.gaussian, *other.gaussian)
                                   : wasserstein_1d_sorted(cand.sorted, other.sorted);
    if (!std::isfinite(v)) {
      throw NumericalError("non-finite distance for feature '" + enabled[f] + "' between '" +
                           candidate.manifest.dataset_id + "' and '" +
                           all[d]->manifest.dataset_id + "'");
    }
    dist[k] = v;
  });

  std::vector<FeatureScore> scores;
  for (std::size_t f = 0; f < n_feat; ++f) {
    FeatureScore s;
    s.feature_id = enabled[f];
    s.dim = dims[f];
    s.method = method_for_dim(dims[f]);
    s.n_candidate = cells[f].rows;
    std::vector<std::pair<std::string, double>> r, n;
    for (std::size_t d = 1; d < all.size(); ++d) {
      const double v = dist[f * n_other + d - 1];
      if (v < 0.0) continue;
      const auto& ds = all[d]->manifest;
      (d <= refs.size() ? r : n).emplace_back(ds.dataset_id, v);
      (d <= refs.size() ? s.real_distances : s.noise_distances)[ds.dataset_id] = v;
    }
    const Nearest nr = nearest(r, s.feature_id, "usable reference");
    const Nearest nn = nearest(n, s.feature_id, "usable distractor");
    s.w_real = nr.distance;
    s.w_noise = nn.distance;
    s.nearest_real = nr.dataset_id;
    s.nearest_noise = nn.dataset_id;
    const ScoreValue sv = feature_score(s.w_real, s.w_noise);
    s.score = sv.value;
    s.degenerate = sv.degenerate;
    if (sv.degenerate) {
      warnings.push_back("feature '" + s.feature_id +
                         "': both nearest distances are zero; score set to 50");
    }
    scores.push_back(std::move(s));
  }
  ScoreReport report = aggregate(std::move(scores), registry, bm.exclude_factors);
  report.candidate_id = candidate.manifest.dataset_id;
  report.warnings = std::move(warnings);
  report.provenance.seed = seed;
  report.provenance.max_obs = max_obs;
  for (const auto* d : all) report.provenance.manifest_sha256[d->manifest.dataset_id] = d->sha256;
  for (const auto& d : refs) report.provenance.references.push_back(d.manifest.dataset_id);
  for (const auto& d : noises) report.provenance.distractors.push_back(d.manifest.dataset_id);
  return report;
}

inline ScoreReport run_benchmark(const std::filesystem::path& manifest_path, const RunOptions& opts = {}) {
  return run_benchmark(load_benchmark_manifest(manifest_path), opts);
}

}  // namespace ttsds

#endif  // TTSDS_SCORING_HPP_
