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

#ifndef TTSDS_CLI_HPP_
#define TTSDS_CLI_HPP_

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ttsds/error.hpp"
#include "ttsds/extract.hpp"
#include "ttsds/json_util.hpp"
#include "ttsds/parallel.hpp"
#include "ttsds/registry.hpp"
#include "ttsds/scoring.hpp"
#include "ttsds/stats.hpp"

namespace ttsds {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitNumerical = 3 };

struct SubjectiveScore {
  std::string system_id;
  double value = 0.0;
};

// CSV with a header naming at least the columns system_id and value.
inline std::vector<SubjectiveScore> read_subjective_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t\r\"");
      const auto e = cell.find_last_not_of(" \t\r\"");
      cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    return cells;
  };
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty CSV");
  const auto header = split(line);
  std::optional<std::size_t> id_col, value_col;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "system_id") id_col = i;
    if (header[i] == "value") value_col = i;
  }
  if (!id_col || !value_col) throw DataError(path.string() + ": header must contain system_id and value");
  std::vector<SubjectiveScore> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line);
    if (cells.size() <= std::max(*id_col, *value_col)) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": too few columns");
    }
    SubjectiveScore s;
    s.system_id = cells[*id_col];
    try {
      std::size_t used = 0;
      s.value = std::stod(cells[*value_col], &used);
      if (used != cells[*value_col].size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": invalid value '" +
                      cells[*value_col] + "'");
    }
    out.push_back(std::move(s));
  }
  return out;
}

namespace detail {

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// "name=path" pairs into a map.
inline std::map<std::string, std::filesystem::path> parse_assignments(const std::vector<std::string>& items,
                                                                      const char* flag) {
  std::map<std::string, std::filesystem::path> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      throw CLI::ValidationError(flag, "expected name=path, got '" + item + "'");
    }
    if (!out.emplace(item.substr(0, eq), item.substr(eq + 1)).second) {
      throw CLI::ValidationError(flag, "duplicate name '" + item.substr(0, eq) + "'");
    }
  }
  return out;
}

inline void add_pitch_flags(CLI::App* cmd, PitchConfig& cfg) {
  cmd->add_option("--frame-ms", cfg.frame_ms, "Pitch analysis frame length in ms")->capture_default_str();
  cmd->add_option("--hop-ms", cfg.hop_ms, "Pitch hop in ms")->capture_default_str();
  cmd->add_option("--f0-min", cfg.f0_min, "Lowest F0 searched, Hz")->capture_default_str();
  cmd->add_option("--f0-max", cfg.f0_max, "Highest F0 searched, Hz")->capture_default_str();
  cmd->add_option("--yin-threshold", cfg.threshold, "Voicing threshold on the normalized difference")
      ->capture_default_str();
}

inline void print_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << "\n";
}

inline void emit(const std::string& text, const std::optional<std::string>& out_path, std::ostream& out) {
  if (out_path) {
    write_text_file(*out_path, text);
  } else {
    out << text;
  }
}

inline std::vector<ScoreReport> read_reports(const std::string& list) {
  std::vector<ScoreReport> reports;
  for (const auto& p : split_list(list)) reports.push_back(read_report(p));
  if (reports.empty()) throw ConfigError("no reports given");
  return reports;
}

}  // namespace detail

// Entry point for the ttsds tool; returns the process exit code.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"Distribution-distance benchmark for synthetic speech datasets", "ttsds"};
  app.require_subcommand(1);
  std::size_t jobs = default_jobs();
  app.add_option("--jobs,-j", jobs, "Worker threads")->check(CLI::PositiveNumber);

  // extract
  ExtractOptions ex;
  std::string ex_role = "candidate";
  std::vector<std::string> ex_hyp, ex_tok;
  std::string ex_transcripts;
  auto* extract = app.add_subcommand("extract", "Run the native extractors over a WAV directory");
  extract->add_option("--wav-dir", ex.wav_dir, "Directory of .wav files")->required();
  extract->add_option("--out-dir", ex.out_dir, "Output dataset directory")->required();
  extract->add_option("--dataset-id", ex.dataset_id, "Dataset id")->required();
  extract->add_option("--role", ex_role, "candidate, reference or distractor")
      ->check(CLI::IsMember({"candidate", "reference", "distractor"}))
      ->capture_default_str();
  extract->add_option("--transcripts", ex_transcripts, "Reference transcripts TSV");
  extract->add_option("--hypotheses", ex_hyp, "ASR hypotheses as asr_id=path (repeatable)");
  extract->add_option("--tokens", ex_tok, "Token files as tokenizer_id=path (repeatable)");
  detail::add_pitch_flags(extract, ex.pitch);

  // gen-noise
  NoiseDatasetOptions gn;
  std::string gn_kinds = "uniform,normal,zeros,ones";
  std::string gn_transcripts, gn_asr;
  bool gn_no_wav = false, gn_no_features = false;
  auto* gen = app.add_subcommand("gen-noise", "Generate the synthetic distractor datasets");
  gen->add_option("--out-dir", gn.out_dir, "Output directory (one subdirectory per kind)")->required();
  gen->add_option("--kinds", gn_kinds, "Comma-separated noise kinds")->capture_default_str();
  gen->add_option("--count", gn.count, "Utterances per kind")->capture_default_str()->check(CLI::PositiveNumber);
  gen->add_option("--duration", gn.duration_s, "Seconds per utterance")->capture_default_str()->check(CLI::PositiveNumber);
  gen->add_option("--sample-rate", gn.sample_rate, "Hz")->capture_default_str()->check(CLI::PositiveNumber);
  gen->add_option("--seed", gn.seed, "Base seed")->capture_default_str();
  gen->add_flag("--no-wav", gn_no_wav, "Skip writing WAV files");
  gen->add_flag("--no-features", gn_no_features, "Skip writing feature files");
  gen->add_option("--transcripts", gn_transcripts, "Transcripts to pair with noise utterances");
  gen->add_option("--asr-ids", gn_asr, "Comma-separated ASR ids that get empty hypotheses");
  detail::add_pitch_flags(gen, gn.pitch);

  // score
  std::string sc_manifest;
  std::optional<std::string> sc_out, sc_table;
  std::optional<std::uint64_t> sc_seed;
  std::optional<std::size_t> sc_max_obs;
  auto* score = app.add_subcommand("score", "Score a candidate dataset");
  score->add_option("--manifest", sc_manifest, "Benchmark manifest JSON")->required();
  score->add_option("--out", sc_out, "Report path (default: stdout)");
  score->add_option("--table", sc_table, "Also write an aligned text table to this path");
  score->add_option("--seed", sc_seed, "Override the manifest seed");
  score->add_option("--max-obs", sc_max_obs, "Override the manifest max_obs")->check(CLI::Range(2ul, SIZE_MAX));

  // validate
  std::string va_reports, va_subjective;
  std::optional<std::string> va_out;
  auto* validate = app.add_subcommand("validate", "Spearman correlation against subjective scores");
  validate->add_option("--reports", va_reports, "Comma-separated report paths")->required();
  validate->add_option("--subjective", va_subjective, "CSV with system_id,value")->required();
  validate->add_option("--out", va_out, "Write the correlations as JSON");

  // compare
  std::string co_reports;
  double co_alpha = kDefaultAlpha;
  std::optional<std::string> co_out;
  auto* compare = app.add_subcommand("compare", "Pairwise Wilcoxon tests over per-feature scores");
  compare->add_option("--reports", co_reports, "Comma-separated report paths")->required();
  compare->add_option("--alpha", co_alpha, "Significance level")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  compare->add_option("--out", co_out, "Matrix JSON path (default: stdout)");

  std::vector<std::string> argv_store{"ttsds"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (*extract) {
      ex.jobs = jobs;
      ex.role = *parse_role(ex_role);
      if (!ex_transcripts.empty()) ex.transcripts = ex_transcripts;
      ex.hypotheses = detail::parse_assignments(ex_hyp, "--hypotheses");
      ex.tokens = detail::parse_assignments(ex_tok, "--tokens");
    }
    if (*gen) {
      gn.jobs = jobs;
      gn.write_wav = !gn_no_wav;
      gn.write_features = !gn_no_features;
      gn.kinds.clear();
      for (const auto& k : detail::split_list(gn_kinds)) {
        const auto kind = parse_noise_kind(k);
        if (!kind) throw CLI::ValidationError("--kinds", "unknown noise kind '" + k + "'");
        gn.kinds.push_back(*kind);
      }
      if (!gn_transcripts.empty()) gn.transcripts = gn_transcripts;
      gn.asr_ids = detail::split_list(gn_asr);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*extract) {
      const auto r = extract_dataset(ex);
      detail::print_warnings(r.warnings, err);
      if (r.utterances < kRecommendedUtterances) {
        err << "warning: " << r.utterances << " utterances extracted; " << kRecommendedUtterances
            << "-100 per dataset are recommended\n";
      }
      out << r.manifest_path.string() << "\n";
    } else if (*gen) {
      for (const auto& r : generate_noise_datasets(gn)) {
        detail::print_warnings(r.warnings, err);
        out << r.manifest_path.string() << "\n";
      }
    } else if (*score) {
      RunOptions opts;
      opts.jobs = jobs;
      opts.seed = sc_seed;
      opts.max_obs = sc_max_obs;
      const ScoreReport report = run_benchmark(std::filesystem::path(sc_manifest), opts);
      detail::print_warnings(report.warnings, err);
      detail::emit(report_to_string(report), sc_out, out);
      if (sc_table) write_text_file(*sc_table, render_table(std::span(&report, 1)));
    } else if (*validate) {
      const auto reports = detail::read_reports(va_reports);
      const auto subjective = read_subjective_csv(va_subjective);
      std::map<std::string, double> by_id;
      for (const auto& s : subjective) {
        if (!by_id.emplace(s.system_id, s.value).second) {
          throw DataError(va_subjective + ": duplicate system_id '" + s.system_id + "'");
        }
      }
      RankedSeries subj, ttsds;
      std::map<Factor, RankedSeries> factors;
      for (const auto& r : reports) {
        const auto it = by_id.find(r.candidate_id);
        if (it == by_id.end()) {
          throw DataError(va_subjective + ": no subjective score for system '" + r.candidate_id + "'");
        }
        subj.labels.push_back(r.candidate_id);
        subj.values.push_back(it->second);
        ttsds.labels.push_back(r.candidate_id);
        ttsds.values.push_back(r.ttsds);
        for (const auto& f : r.factors) {
          if (f.excluded) continue;
          factors[f.factor].labels.push_back(r.candidate_id);
          factors[f.factor].values.push_back(f.score);
        }
      }
      Json result;
      result["n"] = reports.size();
      const double rho = spearman(ttsds, subj);
      result["spearman"]["ttsds"] = rho;
      out << "systems: " << reports.size() << "\n";
      out << "spearman ttsds: " << std::fixed << std::setprecision(4) << rho << "\n";
      for (const auto& [factor, series] : factors) {
        const std::string name(to_string(factor));
        if (series.labels.size() != reports.size()) {
          result["spearman"][name] = nullptr;
          continue;
        }
        try {
          const double r = spearman(series, subj);
          result["spearman"][name] = r;
          out << "spearman " << name << ": " << r << "\n";
        } catch (const DataError&) {
          result["spearman"][name] = nullptr;
          out << "spearman " << name << ": undefined\n";
        }
      }
      out.unsetf(std::ios::floatfield);
      if (va_out) write_text_file(*va_out, result.dump(2) + "\n");
    } else if (*compare) {
      const auto reports = detail::read_reports(co_reports);
      std::vector<std::string> feature_ids;
      std::vector<std::vector<double>> vectors;
      for (const auto& r : reports) {
        std::vector<std::string> ids;
        std::vector<double> v;
        for (const auto& f : r.factors) {
          for (const auto& s : f.features) {
            ids.push_back(s.feature_id);
            v.push_back(s.score);
          }
        }
        if (vectors.empty()) {
          feature_ids = ids;
        } else if (ids != feature_ids) {
          throw ConfigError("report '" + r.candidate_id + "' has a different feature set");
        }
        vectors.push_back(std::move(v));
      }
      const auto result = pairwise_significance(vectors, co_alpha, jobs);
      Json j;
      for (const auto& r : reports) j["systems"].push_back(r.candidate_id);
      j["features"] = feature_ids;
      j["alpha"] = co_alpha;
      j["significant"] = result.significant;
      j["p_values"] = result.p_values;
      detail::emit(j.dump(2) + "\n", co_out, out);
    }
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace ttsds

#endif  // TTSDS_CLI_HPP_
