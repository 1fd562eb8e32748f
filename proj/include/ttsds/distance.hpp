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

#ifndef TTSDS_DISTANCE_HPP_
#define TTSDS_DISTANCE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ttsds/error.hpp"
#include "ttsds/feature_store.hpp"
#include "ttsds/rng.hpp"

namespace ttsds {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr std::size_t kDefaultMaxObs = 50000;

// Pooled observations of one feature from one dataset, one row per frame.
struct EmpiricalDistribution {
  RowMatrix data;
  std::string source_dataset_id;

  Eigen::Index size() const { return data.rows(); }
  Eigen::Index dim() const { return data.cols(); }
};

struct GaussianSummary {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

enum class DistanceMethod { kExact1d, kGaussian };

inline std::string_view to_string(DistanceMethod m) {
  return m == DistanceMethod::kExact1d ? "exact_1d" : "gaussian";
}

struct DistanceResult {
  double value = 0.0;
  DistanceMethod method = DistanceMethod::kExact1d;
  std::pair<std::string, std::string> pair;
};

// Concatenates every frame of every utterance in table order. When there are
// more than max_obs frames, keeps a uniform subsample of exactly max_obs rows
// (selection sampling, so kept rows stay in table order).
inline EmpiricalDistribution pool(const FeatureTable& table, std::size_t max_obs,
                                  std::uint64_t seed, std::string dataset_id = {}) {
  const std::size_t total = table.total_frames();
  const std::string where = "feature '" + table.feature_id + "'" +
                            (dataset_id.empty() ? std::string() : " in dataset '" + dataset_id + "'");
  if (total < 2) {
    throw InsufficientDataError("insufficient data: " + where + " has " + std::to_string(total) +
                                " observation(s), need at least 2");
  }
  if (max_obs < 2) throw ConfigError("max_obs must be at least 2");
  const std::size_t keep = std::min(total, max_obs);
  const std::size_t dim = table.dim;

  EmpiricalDistribution out;
  out.source_dataset_id = std::move(dataset_id);
  out.data.resize(static_cast<Eigen::Index>(keep), static_cast<Eigen::Index>(dim));

  Xoshiro256 rng(seed);
  std::size_t seen = 0, taken = 0;
  for (const auto& utt : table.utterances) {
    const std::size_t frames = utt.values.size() / dim;
    for (std::size_t f = 0; f < frames && taken < keep; ++f, ++seen) {
      if (keep < total) {
        // Knuth's Algorithm S: select with probability (needed / remaining).
        const double remaining = static_cast<double>(total - seen);
        if (remaining * rng.uniform01() >= static_cast<double>(keep - taken)) continue;
      }
      for (std::size_t d = 0; d < dim; ++d) {
        out.data(static_cast<Eigen::Index>(taken), static_cast<Eigen::Index>(d)) =
            utt.values[f * dim + d];
      }
      ++taken;
    }
  }
  return out;
}

// Exact W2 between two empirical measures given sorted samples, as the L2
// distance between their quantile functions. Each sample of `a` carries mass
// 1/n, each of `b` mass 1/m; breakpoints are tracked on the integer grid
// k / (n m) so segment lengths are exact.
inline double wasserstein_1d_sorted(std::span<const double> a, std::span<const double> b) {
  const std::uint64_t n = a.size(), m = b.size();
  if (n == 0 || m == 0) throw InsufficientDataError("insufficient data: empty sample");
  std::uint64_t i = 0, j = 0, cur = 0;
  double acc = 0.0;
  while (i < n && j < m) {
    const std::uint64_t end_a = (i + 1) * m;
    const std::uint64_t end_b = (j + 1) * n;
    const std::uint64_t next = std::min(end_a, end_b);
    const double diff = a[i] - b[j];
    acc += static_cast<double>(next - cur) * diff * diff;
    cur = next;
    if (end_a == next) ++i;
    if (end_b == next) ++j;
  }
  return std::sqrt(acc / (static_cast<double>(n) * static_cast<double>(m)));
}

inline double wasserstein_1d(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return wasserstein_1d_sorted(a, b);
}

inline std::vector<double> column_values(const EmpiricalDistribution& d) {
  if (d.dim() != 1) {
    throw ConfigError("wasserstein_1d: distribution '" + d.source_dataset_id + "' has dimension " +
                      std::to_string(d.dim()) + ", expected 1");
  }
  return std::vector<double>(d.data.data(), d.data.data() + d.data.rows());
}

inline DistanceResult wasserstein_1d(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  DistanceResult r;
  r.value = wasserstein_1d(column_values(a), column_values(b));
  r.method = DistanceMethod::kExact1d;
  r.pair = {a.source_dataset_id, b.source_dataset_id};
  return r;
}

// Mean and unbiased (N - 1) covariance, symmetrized as (C + C^T) / 2.
inline GaussianSummary summarize_gaussian(const EmpiricalDistribution& d) {
  if (d.size() < 2) {
    throw InsufficientDataError("insufficient data: need at least 2 rows to estimate a covariance");
  }
  GaussianSummary g;
  g.mean = d.data.colwise().mean().transpose();
  const Eigen::MatrixXd centered = d.data.rowwise() - g.mean.transpose();
  const Eigen::MatrixXd c = (centered.transpose() * centered) / static_cast<double>(d.size() - 1);
  g.cov = 0.5 * (c + c.transpose());
  return g;
}

namespace detail {

[[noreturn]] inline void eigen_failure(const Eigen::MatrixXd& m, const char* what) {
  std::ostringstream msg;
  msg << "eigendecomposition failed for " << what << " (" << m.rows() << "x" << m.cols()
      << ", trace " << m.trace() << ", max |entry| " << m.cwiseAbs().maxCoeff()
      << ", finite " << (m.allFinite() ? "yes" : "no") << ")";
  throw NumericalError(msg.str());
}

inline Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> symmetric_eigen(const Eigen::MatrixXd& m,
                                                                      const char* what,
                                                                      bool vectors) {
  if (!m.allFinite()) eigen_failure(m, what);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      m, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) eigen_failure(m, what);
  return solver;
}

}  // namespace detail

// Principal square root of a symmetric PSD matrix; negative eigenvalues are
// clamped to zero.
inline Eigen::MatrixXd sqrt_psd(const Eigen::MatrixXd& m) {
  const auto solver = detail::symmetric_eigen(m, "covariance square root", true);
  const Eigen::VectorXd root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * root.asDiagonal() * solver.eigenvectors().transpose();
}

// trace((B^{1/2} A B^{1/2})^{1/2}) for symmetric PSD A, B.
inline double trace_sqrt_product(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd b_half = sqrt_psd(b);
  Eigen::MatrixXd inner = b_half * a * b_half;
  inner = 0.5 * (inner + inner.transpose()).eval();
  const auto solver = detail::symmetric_eigen(inner, "Bures cross term", false);
  return solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

// Squared Bures distance trace(A + B - 2 (B^{1/2} A B^{1/2})^{1/2}), unclamped.
inline double bures_squared(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.trace() + b.trace() - 2.0 * trace_sqrt_product(a, b);
}

inline double wasserstein_gaussian(const GaussianSummary& g1, const GaussianSummary& g2) {
  if (g1.mean.size() != g2.mean.size() || g1.cov.rows() != g1.mean.size() ||
      g2.cov.rows() != g2.mean.size()) {
    throw ConfigError("wasserstein_gaussian: dimension mismatch (" + std::to_string(g1.mean.size()) +
                      " vs " + std::to_string(g2.mean.size()) + ")");
  }
  const double mean_term = (g1.mean - g2.mean).squaredNorm();
  const double radicand = mean_term + bures_squared(g1.cov, g2.cov);
  if (!std::isfinite(radicand)) throw NumericalError("wasserstein_gaussian: non-finite result");
  return std::sqrt(std::max(0.0, radicand));
}

inline DistanceResult wasserstein_gaussian(const GaussianSummary& g1, const GaussianSummary& g2,
                                           std::pair<std::string, std::string> pair) {
  DistanceResult r;
  r.value = wasserstein_gaussian(g1, g2);
  r.method = DistanceMethod::kGaussian;
  r.pair = std::move(pair);
  return r;
}

// D = 1 uses the exact 1-D distance, D > 1 the Gaussian closed form.
inline DistanceMethod method_for_dim(Eigen::Index dim) {
  return dim == 1 ? DistanceMethod::kExact1d : DistanceMethod::kGaussian;
}

}  // namespace ttsds

#endif  // TTSDS_DISTANCE_HPP_
