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

#include "ttsds/distance.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "gtest/gtest.h"
#include "support/test_support.hpp"

namespace ttsds {
namespace {

FeatureTable counting_table(std::size_t frames, std::size_t utts) {
  FeatureTable t;
  t.feature_id = "x";
  std::size_t k = 0;
  for (std::size_t u = 0; u < utts; ++u) {
    std::vector<float> v(frames / utts);
    for (auto& x : v) x = static_cast<float>(k++);
    t.add("u" + std::to_string(u), std::move(v));
  }
  return t;
}

TEST(Pool, KeepsEverythingUnderTheCap) {
  FeatureTable t;
  t.dim = 2;
  t.add("a", std::vector<float>{1, 2, 3, 4});
  t.add("b", std::vector<float>{});
  t.add("c", std::vector<float>{5, 6});
  const auto d = pool(t, 100, 0, "ds");
  ASSERT_EQ(d.size(), 3);
  ASSERT_EQ(d.dim(), 2);
  EXPECT_EQ(d.data(2, 1), 6.0);
  EXPECT_EQ(d.source_dataset_id, "ds");
}

TEST(Pool, SubsampleIsExactDeterministicAndOrdered) {
  const FeatureTable t = counting_table(1'000'000, 100);
  const auto a = pool(t, 100'000, 77);
  const auto b = pool(t, 100'000, 77);
  ASSERT_EQ(a.size(), 100'000);
  EXPECT_EQ(a.data, b.data);
  for (Eigen::Index i = 1; i < a.size(); ++i) ASSERT_LT(a.data(i - 1, 0), a.data(i, 0));
  const auto c = pool(t, 100'000, 78);
  EXPECT_NE(a.data, c.data);
  // A uniform subsample of 0..N-1 has mean near (N-1)/2.
  EXPECT_NEAR(a.data.mean(), 499999.5, 5000.0);
}

TEST(Pool, InsufficientData) {
  FeatureTable t;
  t.feature_id = "wada_snr";
  t.add("only", std::vector<float>{3.0f});
  try {
    pool(t, 10, 0, "noise_zeros");
    FAIL();
  } catch (const InsufficientDataError& e) {
    EXPECT_NE(std::string(e.what()).find("wada_snr"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("noise_zeros"), std::string::npos);
  }
}

TEST(Wasserstein1d, Examples) {
  EXPECT_DOUBLE_EQ(wasserstein_1d({0.0, 1.0}, {1.0, 2.0}), 1.0);
  EXPECT_DOUBLE_EQ(wasserstein_1d({0.0, 1.0}, {0.0, 0.0, 3.0}), std::sqrt(1.5));
  EXPECT_EQ(wasserstein_1d({3.0, 1.0, 2.0}, {2.0, 3.0, 1.0}), 0.0);
  EXPECT_DOUBLE_EQ(wasserstein_1d({0.0}, {5.0}), 5.0);
}

TEST(Wasserstein1d, AgreesWithExpansionOracle) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> size(1, 60);
  std::normal_distribution<double> g(0.0, 3.0);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> a(size(rng)), b(size(rng));
    for (auto& x : a) x = g(rng);
    for (auto& x : b) x = g(rng) + 1.0;
    const double oracle = testing::w2_1d_oracle(a, b);
    EXPECT_NEAR(wasserstein_1d(a, b), oracle, 1e-9 * std::max(1.0, oracle));
  }
}

TEST(Wasserstein1d, MetricProperties) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  auto sample = [&](std::size_t n, double shift) {
    std::vector<double> v(n);
    for (auto& x : v) x = g(rng) + shift;
    return v;
  };
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = sample(17, 0.0), b = sample(23, 0.5), c = sample(31, -1.0);
    EXPECT_DOUBLE_EQ(wasserstein_1d(a, b), wasserstein_1d(b, a));
    EXPECT_LE(wasserstein_1d(a, c), wasserstein_1d(a, b) + wasserstein_1d(b, c) + 1e-12);
    // Translation moves the distance by exactly the shift.
    std::vector<double> shifted = a;
    for (auto& x : shifted) x += 2.5;
    EXPECT_NEAR(wasserstein_1d(a, shifted), 2.5, 1e-12);
  }
}

TEST(Wasserstein1d, DistributionOverloadKeepsPairAndMethod) {
  const auto a = pool(testing::normal_table("f", 0, 1, 3, 10, 1), 1000, 0, "a");
  const auto b = pool(testing::normal_table("f", 1, 1, 3, 10, 2), 1000, 0, "b");
  const auto r = wasserstein_1d(a, b);
  EXPECT_EQ(r.method, DistanceMethod::kExact1d);
  EXPECT_EQ(r.pair, (std::pair<std::string, std::string>{"a", "b"}));
  EXPECT_GT(r.value, 0.0);
}

GaussianSummary gaussian(Eigen::VectorXd mean, Eigen::MatrixXd cov) { return {std::move(mean), std::move(cov)}; }

TEST(GaussianW2, Examples) {
  const Eigen::MatrixXd i2 = Eigen::MatrixXd::Identity(2, 2);
  EXPECT_NEAR(wasserstein_gaussian(gaussian(Eigen::Vector2d(0, 0), i2), gaussian(Eigen::Vector2d(0, 0), i2)), 0.0, 1e-6);
  EXPECT_NEAR(wasserstein_gaussian(gaussian(Eigen::Vector2d(0, 0), i2), gaussian(Eigen::Vector2d(3, 4), i2)), 5.0, 1e-8);
  EXPECT_NEAR(wasserstein_gaussian(gaussian(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Constant(1, 1, 4.0)),
                                   gaussian(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Constant(1, 1, 1.0))),
              1.0, 1e-8);
}

Eigen::MatrixXd random_spd(std::mt19937_64& rng, int d, int rank) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd a(d, rank);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < rank; ++j) a(i, j) = g(rng);
  return a * a.transpose() / rank;
}

TEST(GaussianW2, DiagonalClosedForm) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> var(0.01, 10.0), mu(-5.0, 5.0);
  for (int d : {2, 5, 16, 64}) {
    Eigen::VectorXd m1(d), m2(d), v1(d), v2(d);
    for (int i = 0; i < d; ++i) {
      m1(i) = mu(rng), m2(i) = mu(rng), v1(i) = var(rng), v2(i) = var(rng);
    }
    double expected = (m1 - m2).squaredNorm();
    for (int i = 0; i < d; ++i) expected += std::pow(std::sqrt(v1(i)) - std::sqrt(v2(i)), 2);
    const double got = wasserstein_gaussian(gaussian(m1, v1.asDiagonal().toDenseMatrix()),
                                            gaussian(m2, v2.asDiagonal().toDenseMatrix()));
    EXPECT_NEAR(got, std::sqrt(expected), 1e-8) << "d=" << d;
  }
}

TEST(GaussianW2, SymmetricAndEqualCovarianceReducesToMeanShift) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 7;
    Eigen::VectorXd m1(d), m2(d);
    for (int i = 0; i < d; ++i) m1(i) = g(rng), m2(i) = g(rng);
    const auto c1 = random_spd(rng, d, d + 3), c2 = random_spd(rng, d, d + 1);
    EXPECT_NEAR(wasserstein_gaussian(gaussian(m1, c1), gaussian(m2, c2)),
                wasserstein_gaussian(gaussian(m2, c2), gaussian(m1, c1)), 1e-8);
    EXPECT_NEAR(wasserstein_gaussian(gaussian(m1, c1), gaussian(m2, c1)), (m1 - m2).norm(), 1e-8);
  }
}

TEST(GaussianW2, RankDeficientInputsStayFinite) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 3 + trial % 30;
    const auto c1 = random_spd(rng, d, 1 + trial % 3);
    const auto c2 = random_spd(rng, d, 1 + trial % 2);
    const Eigen::VectorXd m = Eigen::VectorXd::Zero(d);
    const double w = wasserstein_gaussian(gaussian(m, c1), gaussian(m, c2));
    EXPECT_TRUE(std::isfinite(w));
    EXPECT_GE(w, 0.0);
    EXPECT_NEAR(wasserstein_gaussian(gaussian(m, c1), gaussian(m, c1)), 0.0, 1e-6);
  }
}

TEST(GaussianW2, NonFiniteCovarianceIsNumericalError) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Identity(2, 2);
  c(0, 1) = c(1, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(wasserstein_gaussian(gaussian(Eigen::Vector2d(0, 0), c),
                                    gaussian(Eigen::Vector2d(0, 0), Eigen::MatrixXd::Identity(2, 2))),
               NumericalError);
  EXPECT_THROW(wasserstein_gaussian(gaussian(Eigen::Vector2d(0, 0), Eigen::MatrixXd::Identity(2, 2)),
                                    gaussian(Eigen::Vector3d(0, 0, 0), Eigen::MatrixXd::Identity(3, 3))),
               ConfigError);
}

TEST(Summary, UnbiasedCovariance) {
  EmpiricalDistribution d;
  d.data.resize(3, 2);
  d.data << 1, 2, 3, 4, 5, 9;
  const auto g = summarize_gaussian(d);
  EXPECT_DOUBLE_EQ(g.mean(0), 3.0);
  EXPECT_DOUBLE_EQ(g.mean(1), 5.0);
  EXPECT_DOUBLE_EQ(g.cov(0, 0), 4.0);
  EXPECT_DOUBLE_EQ(g.cov(1, 1), 13.0);
  EXPECT_DOUBLE_EQ(g.cov(0, 1), 7.0);
  EXPECT_EQ(g.cov(0, 1), g.cov(1, 0));
}

TEST(Summary, RowPermutationInvariant) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  EmpiricalDistribution d;
  d.data.resize(50, 4);
  for (Eigen::Index i = 0; i < 50; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) d.data(i, j) = n(rng);
  EmpiricalDistribution p = d;
  for (Eigen::Index i = 0; i < 50; ++i) p.data.row(i) = d.data.row(49 - i);
  const auto a = summarize_gaussian(d), b = summarize_gaussian(p);
  EXPECT_LT((a.mean - b.mean).norm(), 1e-12);
  EXPECT_LT((a.cov - b.cov).norm(), 1e-12);
}

TEST(Method, ByDimension) {
  EXPECT_EQ(method_for_dim(1), DistanceMethod::kExact1d);
  EXPECT_EQ(method_for_dim(2), DistanceMethod::kGaussian);
  EXPECT_EQ(to_string(DistanceMethod::kGaussian), "gaussian");
}

}  // namespace
}  // namespace ttsds
