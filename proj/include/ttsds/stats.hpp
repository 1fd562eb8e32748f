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

#ifndef TTSDS_STATS_HPP_
#define TTSDS_STATS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ttsds/error.hpp"
#include "ttsds/parallel.hpp"

namespace ttsds {

// 1-based ranks; tied values share the average of their positions.
inline std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + 1 + j);  // mean of i+1 .. j
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
    i = j;
  }
  return ranks;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw DataError("undefined correlation: constant series");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// Spearman's rho: Pearson correlation of average ranks.
inline double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DataError("spearman: series lengths differ");
  if (x.size() < 2) throw DataError("spearman: need at least 2 observations");
  for (double v : x) if (!std::isfinite(v)) throw DataError("spearman: non-finite value");
  for (double v : y) if (!std::isfinite(v)) throw DataError("spearman: non-finite value");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

struct RankedSeries {
  std::vector<std::string> labels;
  std::vector<double> values;
};

// Pairs observations by label; both series must carry the same label set.
inline double spearman(const RankedSeries& x, const RankedSeries& y) {
  if (x.labels.size() != x.values.size() || y.labels.size() != y.values.size()) {
    throw DataError("spearman: labels and values differ in length");
  }
  std::unordered_map<std::string, double> lookup;
  for (std::size_t i = 0; i < y.labels.size(); ++i) {
    if (!lookup.emplace(y.labels[i], y.values[i]).second) {
      throw DataError("spearman: duplicate label '" + y.labels[i] + "'");
    }
  }
  if (lookup.size() != x.labels.size()) throw DataError("spearman: label sets differ");
  std::vector<double> paired;
  paired.reserve(x.labels.size());
  for (const auto& label : x.labels) {
    const auto it = lookup.find(label);
    if (it == lookup.end()) throw DataError("spearman: label '" + label + "' missing from second series");
    paired.push_back(it->second);
  }
  return spearman(x.values, paired);
}

// ---------------------------------------------------------------------------
// Wilcoxon signed-rank test

inline constexpr std::size_t kWilcoxonExactMaxN = 25;

// Signed ranks of the nonzero paired differences.
struct SignedRanks {
  std::vector<double> ranks;  // ranks of |d|, average ranks for ties
  std::vector<bool> positive;
  double w_plus = 0.0;
  double w_minus = 0.0;

  std::size_t n() const { return ranks.size(); }
  double statistic() const { return std::min(w_plus, w_minus); }
};

inline SignedRanks signed_ranks(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DataError("wilcoxon: paired series differ in length");
  std::vector<double> abs_diff;
  SignedRanks out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    if (!std::isfinite(d)) throw DataError("wilcoxon: non-finite difference at index " + std::to_string(i));
    if (d == 0.0) continue;
    abs_diff.push_back(std::abs(d));
    out.positive.push_back(d > 0.0);
  }
  out.ranks = average_ranks(abs_diff);
  for (std::size_t i = 0; i < out.ranks.size(); ++i) {
    (out.positive[i] ? out.w_plus : out.w_minus) += out.ranks[i];
  }
  return out;
}

// Exact two-sided p = min(1, 2 P(T <= W)) where T is the positive-rank sum
// under all 2^n equally likely sign assignments. Average ranks are
// half-integers, so the distribution is counted on doubled ranks.
inline double wilcoxon_exact_p(const SignedRanks& sr) {
  if (sr.n() == 0) return 1.0;
  std::vector<std::uint32_t> doubled(sr.n());
  std::uint32_t total = 0;
  for (std::size_t i = 0; i < sr.n(); ++i) {
    doubled[i] = static_cast<std::uint32_t>(std::lround(2.0 * sr.ranks[i]));
    total += doubled[i];
  }
  std::vector<std::uint64_t> counts(total + 1, 0);
  counts[0] = 1;
  std::uint32_t reach = 0;
  for (std::uint32_t r : doubled) {
    reach += r;
    for (std::uint32_t s = reach; s >= r; --s) counts[s] += counts[s - r];
  }
  const auto w = static_cast<std::uint32_t>(std::lround(2.0 * sr.statistic()));
  std::uint64_t tail = 0;
  for (std::uint32_t s = 0; s <= w; ++s) tail += counts[s];
  const double p = 2.0 * static_cast<double>(tail) / std::ldexp(1.0, static_cast<int>(sr.n()));
  return std::min(1.0, p);
}

// Normal approximation with tie-corrected variance and continuity correction.
inline double wilcoxon_normal_p(const SignedRanks& sr) {
  const double n = static_cast<double>(sr.n());
  if (sr.n() == 0) return 1.0;
  const double mean = n * (n + 1.0) / 4.0;
  double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;
  std::vector<double> sorted = sr.ranks;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i + 1;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    var -= (t * t * t - t) / 48.0;
    i = j;
  }
  if (var <= 0.0) return 1.0;
  const double z = std::min(0.0, (sr.statistic() - mean + 0.5) / std::sqrt(var));
  const double p = std::erfc(-z / std::sqrt(2.0));
  return std::clamp(p, std::numeric_limits<double>::min(), 1.0);
}

struct WilcoxonResult {
  double statistic = 0.0;
  std::size_t n_effective = 0;
  double p_two_sided = 1.0;
  bool significant = false;
  bool exact = true;
};

inline constexpr double kDefaultAlpha = 0.05;

// Zero differences are discarded before ranking (Wilcoxon's treatment).
inline WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y,
                                           double alpha = kDefaultAlpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("wilcoxon: alpha must lie in (0, 1)");
  const SignedRanks sr = signed_ranks(x, y);
  WilcoxonResult r;
  r.n_effective = sr.n();
  r.statistic = sr.statistic();
  r.exact = sr.n() <= kWilcoxonExactMaxN;
  r.p_two_sided = r.exact ? wilcoxon_exact_p(sr) : wilcoxon_normal_p(sr);
  r.significant = r.n_effective > 0 && r.p_two_sided < alpha;
  return r;
}

struct PairwiseSignificance {
  std::vector<std::vector<bool>> significant;
  std::vector<std::vector<double>> p_values;
};

// Symmetric matrix of pairwise Wilcoxon decisions; diagonal is false, p = 1.
inline PairwiseSignificance pairwise_significance(const std::vector<std::vector<double>>& systems,
                                                  double alpha = kDefaultAlpha,
                                                  std::size_t jobs = 1) {
  const std::size_t k = systems.size();
  if (k < 2) throw ConfigError("pairwise_significance: need at least 2 systems");
  for (std::size_t i = 1; i < k; ++i) {
    if (systems[i].size() != systems[0].size()) {
      throw ConfigError("pairwise_significance: system " + std::to_string(i) +
                        " has a different feature count");
    }
  }
  PairwiseSignificance out;
  out.significant.assign(k, std::vector<bool>(k, false));
  out.p_values.assign(k, std::vector<double>(k, 1.0));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) pairs.emplace_back(i, j);
  std::vector<WilcoxonResult> results(pairs.size());
  parallel_for(pairs.size(), jobs, [&](std::size_t t) {
    results[t] = wilcoxon_signed_rank(systems[pairs[t].first], systems[pairs[t].second], alpha);
  });
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    const auto [i, j] = pairs[t];
    out.significant[i][j] = out.significant[j][i] = results[t].significant;
    out.p_values[i][j] = out.p_values[j][i] = results[t].p_two_sided;
  }
  return out;
}

}  // namespace ttsds

#endif  // TTSDS_STATS_HPP_
