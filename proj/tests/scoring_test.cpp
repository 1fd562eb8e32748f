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

#include "ttsds/scoring.hpp"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "support/leaderboard.hpp"
#include "support/test_support.hpp"

namespace ttsds {
namespace {

using testing::TempDir;

TEST(FeatureScore, Examples) {
  EXPECT_EQ(feature_score(2.0, 2.0).value, 50.0);
  EXPECT_EQ(feature_score(0.0, 7.3).value, 100.0);
  EXPECT_EQ(feature_score(7.3, 0.0).value, 0.0);
  EXPECT_DOUBLE_EQ(feature_score(3.0, 1.0).value, 25.0);
  const auto degenerate = feature_score(0.0, 0.0);
  EXPECT_EQ(degenerate.value, 50.0);
  EXPECT_TRUE(degenerate.degenerate);
  EXPECT_THROW(feature_score(-1.0, 1.0), NumericalError);
  EXPECT_THROW(feature_score(std::nan(""), 1.0), NumericalError);
}

TEST(FeatureScore, StrictlyMonotone) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.01, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const double r = u(rng), n = u(rng), d = u(rng) * 0.1;
    EXPECT_EQ(feature_score(r, r).value, 50.0);
    EXPECT_GT(feature_score(r, n + d).value, feature_score(r, n).value);
    EXPECT_LT(feature_score(r + d, n).value, feature_score(r, n).value);
    EXPECT_EQ(feature_score(0.0, n).value, 100.0);
  }
}

TEST(Nearest, TiesGoToSmallerId) {
  const std::vector<std::pair<std::string, double>> d = {{"b", 1.0}, {"a", 1.0}, {"c", 2.0}};
  const auto n = nearest(d, "f", "reference");
  EXPECT_EQ(n.dataset_id, "a");
  EXPECT_EQ(n.distance, 1.0);
  EXPECT_THROW(nearest({}, "f", "reference"), ConfigError);
}

TEST(MinDistances, PicksClosestOfEachCollection) {
  auto dist = [](std::string id, std::vector<double> v) {
    EmpiricalDistribution d;
    d.source_dataset_id = std::move(id);
    d.data = Eigen::Map<RowMatrix>(v.data(), static_cast<Eigen::Index>(v.size()), 1);
    return d;
  };
  const auto cand = dist("cand", {0.0, 1.0});
  const std::vector<EmpiricalDistribution> reals = {dist("r1", {5.0, 6.0}), dist("r2", {1.0, 2.0})};
  const std::vector<EmpiricalDistribution> noises = {dist("n1", {10.0, 11.0})};
  const auto m = min_distances(cand, reals, noises, "pitch");
  EXPECT_EQ(m.real.dataset_id, "r2");
  EXPECT_DOUBLE_EQ(m.real.distance, 1.0);
  EXPECT_EQ(m.noise.dataset_id, "n1");
  EXPECT_DOUBLE_EQ(m.noise.distance, 10.0);
}

FeatureScore fs(std::string id, double score) {
  FeatureScore s;
  s.feature_id = std::move(id);
  s.score = score;
  return s;
}

TEST(Aggregate, LeaderboardRowsViaSingleFeatureFactors) {
  const auto registry = FeatureRegistry::standard();
  for (const auto& row : testing::leaderboard()) {
    const auto report = aggregate({fs("hubert", row.factors[0]), fs("wada_snr", row.factors[1]),
                                   fs("wer_whisper", row.factors[2]), fs("pitch", row.factors[3]),
                                   fs("wespeaker", row.factors[4])},
                                  registry);
    const double mean =
        (row.factors[0] + row.factors[1] + row.factors[2] + row.factors[3] + row.factors[4]) / 5.0;
    EXPECT_NEAR(report.ttsds, mean, 1e-12) << row.system;
  }
}

TEST(Aggregate, FactorMeansAndExclusion) {
  const auto registry = FeatureRegistry::standard();
  const auto r = aggregate({fs("pitch", 60), fs("hubert_token_length", 80), fs("wada_snr", 70),
                            fs("wer_whisper", 90)},
                           registry, {Factor::kGeneral, Factor::kSpeaker});
  EXPECT_DOUBLE_EQ(r.factor(Factor::kProsody).score, 70.0);
  EXPECT_TRUE(r.factor(Factor::kGeneral).excluded);
  EXPECT_DOUBLE_EQ(r.ttsds, (70.0 + 90.0 + 70.0) / 3.0);
  ASSERT_EQ(r.factors.size(), 5u);
  // Report order within a factor follows the registry.
  EXPECT_EQ(r.factor(Factor::kProsody).features[0].feature_id, "hubert_token_length");
}

TEST(Aggregate, AllFiftyGivesFifty) {
  const auto r = aggregate({fs("hubert", 50), fs("wav2vec2", 50), fs("wada_snr", 50), fs("wer_x", 50),
                            fs("pitch", 50), fs("dvector", 50)},
                           FeatureRegistry::standard());
  EXPECT_EQ(r.ttsds, 50.0);
}

TEST(Aggregate, MissingFactorIsError) {
  try {
    aggregate({fs("pitch", 50)}, FeatureRegistry::standard());
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("general"), std::string::npos);
  }
  EXPECT_THROW(aggregate({fs("mystery", 50)}, FeatureRegistry::standard()), ConfigError);
}

TEST(Rounding, HalfToEven) {
  EXPECT_EQ(round_half_even(86.25), 86.2);
  EXPECT_EQ(round_half_even(86.35), 86.4);
  EXPECT_EQ(round_half_even(83.84), 83.8);
  EXPECT_EQ(round_half_even(83.86), 83.9);
  EXPECT_EQ(round_half_even(0.05), 0.0);
  EXPECT_EQ(round_half_even(0.15), 0.2);
  EXPECT_EQ(format_fixed(86.26), "86.3");
  EXPECT_EQ(format_fixed(100.0), "100.0");
}

TEST(Registry, NamingRulesAndRemap) {
  auto reg = FeatureRegistry::standard();
  EXPECT_EQ(reg.at("wer_parakeet").factor, Factor::kIntelligibility);
  EXPECT_EQ(reg.at("toy_token_length").factor, Factor::kProsody);
  EXPECT_FALSE(reg.find("wer_"));
  EXPECT_FALSE(reg.find("_token_length"));
  reg.add("pitch", Factor::kSpeaker, DimClass::kScalar);
  EXPECT_EQ(reg.at("pitch").factor, Factor::kSpeaker);
  for (Factor f : kAllFactors) EXPECT_EQ(parse_factor(to_string(f)), f);
}

TEST(Report, JsonRoundTripAndTable) {
  auto r = aggregate({fs("hubert", 93.7), fs("wada_snr", 84.7), fs("wer_whisper", 91.6), fs("pitch", 89.8),
                      fs("wespeaker", 71.5)},
                     FeatureRegistry::standard());
  r.candidate_id = "StyleTTS 2";
  const auto back = report_from_json(Json::parse(report_to_string(r)), "mem");
  EXPECT_EQ(back.candidate_id, r.candidate_id);
  EXPECT_EQ(back.ttsds, r.ttsds);
  EXPECT_EQ(back.factor(Factor::kSpeaker).features[0].feature_id, "wespeaker");
  const std::string table = render_table(std::span(&r, 1));
  EXPECT_NE(table.find("StyleTTS 2"), std::string::npos);
  EXPECT_NE(table.find("86.3"), std::string::npos);
  EXPECT_NE(table.find("TTSDS"), std::string::npos);
}

TEST(Sha256, KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

// ---------------------------------------------------------------------------
// run_benchmark on toy manifests

struct ToyBench {
  TempDir dir;

  std::filesystem::path dataset(const std::string& id, DatasetRole role, double mean, double sd,
                                std::uint64_t seed, std::size_t utts = 90, bool with_token = true) {
    std::vector<FeatureTable> tables = {testing::normal_table("pitch", mean, sd, utts, 20, seed),
                                        testing::normal_table("wada_snr", mean / 4, sd, utts, 1, seed + 1)};
    if (with_token) tables.push_back(testing::normal_table("wer_toy", mean / 100, sd / 10, utts, 1, seed + 2));
    return testing::write_dataset(dir / id, id, role, tables);
  }

  std::filesystem::path manifest(const std::filesystem::path& cand, const std::vector<std::filesystem::path>& refs,
                                 const std::vector<std::filesystem::path>& noises, Json extra = Json::object()) {
    Json j = extra;
    j["candidate"] = cand.string();
    for (const auto& r : refs) j["references"].push_back(r.string());
    for (const auto& n : noises) j["distractors"].push_back(n.string());
    if (!j.contains("exclude_factors")) j["exclude_factors"] = {"general", "speaker"};
    const auto path = dir / ("bench_" + std::to_string(counter++) + ".json");
    write_text_file(path, j.dump(2));
    return path;
  }

  int counter = 0;
};

TEST(RunBenchmark, CloserToRealScoresAboveFifty) {
  ToyBench b;
  const auto cand = b.dataset("cand", DatasetRole::kCandidate, 100, 10, 1);
  const auto ref = b.dataset("ref", DatasetRole::kReference, 102, 10, 10);
  const auto noise = b.dataset("noise", DatasetRole::kDistractor, 300, 40, 20);
  const auto report = run_benchmark(b.manifest(cand, {ref}, {noise}));
  EXPECT_EQ(report.candidate_id, "cand");
  for (Factor f : {Factor::kEnvironment, Factor::kIntelligibility, Factor::kProsody}) {
    EXPECT_GT(report.factor(f).score, 50.0) << to_string(f);
  }
  EXPECT_TRUE(report.factor(Factor::kGeneral).excluded);
  const auto& pitch = report.factor(Factor::kProsody).features.at(0);
  EXPECT_EQ(pitch.nearest_real, "ref");
  EXPECT_EQ(pitch.n_candidate, 90u * 20u);
  EXPECT_EQ(report.provenance.manifest_sha256.size(), 3u);
}

TEST(RunBenchmark, MissingFeatureInDistractorIsError) {
  ToyBench b;
  const auto cand = b.dataset("cand", DatasetRole::kCandidate, 100, 10, 1);
  const auto ref = b.dataset("ref", DatasetRole::kReference, 102, 10, 10);
  const auto noise = b.dataset("noise", DatasetRole::kDistractor, 300, 40, 20, 90, false);
  try {
    run_benchmark(b.manifest(cand, {ref}, {noise}));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("wer_toy"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("noise"), std::string::npos);
  }
}

TEST(RunBenchmark, UnknownExplicitFeatureIsError) {
  ToyBench b;
  const auto cand = b.dataset("cand", DatasetRole::kCandidate, 100, 10, 1);
  const auto ref = b.dataset("ref", DatasetRole::kReference, 102, 10, 10);
  const auto noise = b.dataset("noise", DatasetRole::kDistractor, 300, 40, 20);
  EXPECT_THROW(run_benchmark(b.manifest(cand, {ref}, {noise}, {{"features", {"pitch", "bogus"}}})), ConfigError);
}

TEST(RunBenchmark, ListingOrderDoesNotMatter) {
  ToyBench b;
  const auto cand = b.dataset("cand", DatasetRole::kCandidate, 100, 10, 1);
  const auto r1 = b.dataset("r1", DatasetRole::kReference, 102, 10, 10);
  const auto r2 = b.dataset("r2", DatasetRole::kReference, 98, 12, 11);
  const auto n1 = b.dataset("n1", DatasetRole::kDistractor, 300, 40, 20);
  const auto n2 = b.dataset("n2", DatasetRole::kDistractor, -50, 5, 21);
  const Json small = {{"max_obs", 500}, {"seed", 9}};
  const auto a = run_benchmark(b.manifest(cand, {r1, r2}, {n1, n2}, small));
  const auto c = run_benchmark(b.manifest(cand, {r2, r1}, {n2, n1}, small));
  EXPECT_EQ(report_to_string(a), report_to_string(c));
}

TEST(RunBenchmark, JobsDoNotChangeTheReport) {
  ToyBench b;
  const auto cand = b.dataset("cand", DatasetRole::kCandidate, 100, 10, 1);
  const auto r1 = b.dataset("r1", DatasetRole::kReference, 102, 10, 10);
  const auto n1 = b.dataset("n1", DatasetRole::kDistractor, 300, 40, 20);
  const auto m = b.manifest(cand, {r1}, {n1}, {{"max_obs", 700}});
  RunOptions opts;
  const std::string one = report_to_string(run_benchmark(m, opts));
  for (std::size_t jobs : {2u, 3u, 8u}) {
    opts.jobs = jobs;
    EXPECT_EQ(report_to_string(run_benchmark(m, opts)), one) << jobs << " jobs";
  }
}

TEST(RunBenchmark, AddingAReferenceNeverLowersAScore) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> mean(50.0, 250.0);
  for (int trial = 0; trial < 6; ++trial) {
    ToyBench b;
    const auto cand = b.dataset("cand", DatasetRole::kCandidate, 100, 10, trial * 100 + 1);
    const auto n = b.dataset("noise", DatasetRole::kDistractor, 300, 40, trial * 100 + 2);
    std::vector<std::filesystem::path> refs;
    std::vector<double> previous;
    for (int k = 0; k < 4; ++k) {
      refs.push_back(b.dataset("ref" + std::to_string(k), DatasetRole::kReference, mean(rng), 15,
                               trial * 100 + 10 + k, 30));
      const auto report = run_benchmark(b.manifest(cand, refs, {n}, {{"max_obs", 400}}));
      std::vector<double> scores;
      for (const auto& f : report.factors)
        for (const auto& s : f.features) scores.push_back(s.score);
      for (std::size_t i = 0; i < previous.size(); ++i) EXPECT_GE(scores[i], previous[i]);
      previous = scores;
    }
  }
}

TEST(RunBenchmark, WarningsForSmallDatasetsAndRoleMismatch) {
  ToyBench b;
  const auto cand = b.dataset("cand", DatasetRole::kCandidate, 100, 10, 1, 40);
  const auto ref = b.dataset("ref", DatasetRole::kCandidate, 102, 10, 10);
  const auto noise = b.dataset("noise", DatasetRole::kDistractor, 300, 40, 20);
  const auto report = run_benchmark(b.manifest(cand, {ref}, {noise}));
  bool small = false, role = false;
  for (const auto& w : report.warnings) {
    small |= w.find("'cand' has only 40 utterances") != std::string::npos;
    role |= w.find("declares role 'candidate'") != std::string::npos;
  }
  EXPECT_TRUE(small);
  EXPECT_TRUE(role);
}

TEST(RunBenchmark, DuplicateDatasetIdIsError) {
  ToyBench b;
  const auto cand = b.dataset("cand", DatasetRole::kCandidate, 100, 10, 1);
  const auto ref = b.dataset("ref", DatasetRole::kReference, 102, 10, 10);
  EXPECT_THROW(run_benchmark(b.manifest(cand, {ref}, {ref})), ConfigError);
}

TEST(RunBenchmark, DimensionMismatchIsError) {
  ToyBench b;
  FeatureTable wide;
  wide.feature_id = "wespeaker";
  wide.dim = 3;
  wide.add("u", std::vector<float>{1, 2, 3, 4, 5, 6, 7, 8, 0});
  FeatureTable narrow = wide;
  narrow.dim = 1;
  const auto cand = testing::write_dataset(b.dir / "c", "c", DatasetRole::kCandidate, {wide});
  const auto ref = testing::write_dataset(b.dir / "r", "r", DatasetRole::kReference, {narrow});
  const auto noise = testing::write_dataset(b.dir / "n", "n", DatasetRole::kDistractor, {wide});
  Json extra = {{"exclude_factors", {"general", "environment", "intelligibility", "prosody"}}};
  EXPECT_THROW(run_benchmark(b.manifest(cand, {ref}, {noise}, extra)), DataError);
}

TEST(RunBenchmark, VectorFeaturesUseGaussianDistance) {
  ToyBench b;
  std::mt19937_64 rng(4);
  auto table = [&](double shift) {
    std::normal_distribution<float> g(0.0f, 1.0f);
    FeatureTable t;
    t.feature_id = "wespeaker";
    t.dim = 4;
    for (int u = 0; u < 20; ++u) {
      std::vector<float> v(4 * 5);
      for (auto& x : v) x = g(rng) + static_cast<float>(shift);
      t.add("u" + std::to_string(u), std::move(v));
    }
    return t;
  };
  const auto cand = testing::write_dataset(b.dir / "c", "c", DatasetRole::kCandidate, {table(0.0)});
  const auto ref = testing::write_dataset(b.dir / "r", "r", DatasetRole::kReference, {table(0.2)});
  const auto noise = testing::write_dataset(b.dir / "n", "n", DatasetRole::kDistractor, {table(5.0)});
  Json extra = {{"exclude_factors", {"general", "environment", "intelligibility", "prosody"}}};
  const auto report = run_benchmark(b.manifest(cand, {ref}, {noise}, extra));
  const auto& s = report.factor(Factor::kSpeaker).features.at(0);
  EXPECT_EQ(s.method, DistanceMethod::kGaussian);
  EXPECT_EQ(s.dim, 4u);
  EXPECT_GT(s.score, 80.0);
}

TEST(RunBenchmark, DegenerateDistractorCellIsSkipped) {
  ToyBench b;
  const auto cand = b.dataset("cand", DatasetRole::kCandidate, 100, 10, 1);
  const auto ref = b.dataset("ref", DatasetRole::kReference, 102, 10, 10);
  const auto noise = b.dataset("noise", DatasetRole::kDistractor, 300, 40, 20);
  FeatureTable empty_snr;
  empty_snr.feature_id = "wada_snr";
  empty_snr.add("z0", std::vector<float>{});
  const auto zeros = testing::write_dataset(
      b.dir / "zeros", "zeros", DatasetRole::kDistractor,
      {testing::normal_table("pitch", 0, 0, 90, 20, 1), empty_snr,
       testing::normal_table("wer_toy", 1, 0, 90, 1, 1)});
  const auto report = run_benchmark(b.manifest(cand, {ref}, {noise, zeros}));
  const auto& env = report.factor(Factor::kEnvironment).features.at(0);
  EXPECT_EQ(env.noise_distances.count("zeros"), 0u);
  EXPECT_EQ(env.nearest_noise, "noise");
  bool skipped = false;
  for (const auto& w : report.warnings) skipped |= w.find("skipped") != std::string::npos;
  EXPECT_TRUE(skipped);
}

}  // namespace
}  // namespace ttsds
