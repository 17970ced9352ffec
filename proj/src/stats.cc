/*
 * Copyright 2026 The vaxclust Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "vaxclust/stats.h"

#include <fmt/format.h>

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "vaxclust/error.h"
#include "vaxclust/numeric.h"

namespace vaxclust {
namespace {

struct RankData {
  std::vector<int64_t> doubled_ranks;  // 2 x midrank, pooled order a then b
  int64_t doubled_sum_a = 0;
  double tie_term = 0.0;  // sum over tie groups of t^3 - t
};

RankData Rank(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size() + b.size();
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return pooled[i] < pooled[j];
  });
  RankData data;
  data.doubled_ranks.assign(n, 0);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && pooled[order[j]] == pooled[order[i]]) ++j;
    // Positions i..j-1 share ranks i+1..j; twice their mean is i + 1 + j.
    const auto doubled = static_cast<int64_t>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) data.doubled_ranks[order[t]] = doubled;
    const double t = static_cast<double>(j - i);
    data.tie_term += t * t * t - t;
    i = j;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    data.doubled_sum_a += data.doubled_ranks[i];
  }
  return data;
}

void CheckSamples(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorCode::kEmptySample,
                fmt::format("Mann-Whitney needs two non-empty samples, got {} "
                            "and {}",
                            a.size(), b.size()));
  }
  for (std::span<const double> s : {a, b}) {
    for (double v : s) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kNonFiniteInput, "non-finite sample value");
      }
    }
  }
}

// Fills U, z and the normal-approximation p.
TestResult NormalApprox(std::size_t na, std::size_t nb, const RankData& ranks) {
  TestResult r;
  r.n_low = na;
  r.n_high = nb;
  const double n_a = static_cast<double>(na);
  const double n_b = static_cast<double>(nb);
  const double n = n_a + n_b;
  r.u_statistic =
      static_cast<double>(ranks.doubled_sum_a) / 2.0 - n_a * (n_a + 1.0) / 2.0;
  const double mu = n_a * n_b / 2.0;
  const double variance =
      n_a * n_b / 12.0 * ((n + 1.0) - ranks.tie_term / (n * (n - 1.0)));
  const double deviation = r.u_statistic - mu;
  if (variance <= 0.0 || n < 2.0) {
    r.z = 0.0;
    r.p_two_sided = 1.0;
  } else {
    const double corrected = std::max(std::abs(deviation) - 0.5, 0.0);
    r.z = std::copysign(corrected, deviation) / std::sqrt(variance);
    if (corrected == 0.0) r.z = 0.0;
    r.p_two_sided = std::min(1.0, std::erfc(std::abs(r.z) / std::sqrt(2.0)));
  }
  return r;
}

double ExactP(std::size_t na, const RankData& ranks) {
  const std::size_t n = ranks.doubled_ranks.size();
  int64_t total = 0;
  for (int64_t r : ranks.doubled_ranks) total += r;
  // count[j][s]: subsets of size j with doubled rank sum s.
  std::vector<std::vector<double>> count(
      na + 1, std::vector<double>(static_cast<std::size_t>(total) + 1, 0.0));
  count[0][0] = 1.0;
  for (std::size_t item = 0; item < n; ++item) {
    const auto r = static_cast<std::size_t>(ranks.doubled_ranks[item]);
    for (std::size_t j = std::min(na, item + 1); j >= 1; --j) {
      for (std::size_t s = static_cast<std::size_t>(total); s >= r; --s) {
        count[j][s] += count[j - 1][s - r];
        if (s == r) break;
      }
    }
  }
  const int64_t mean = static_cast<int64_t>(na) * static_cast<int64_t>(n + 1);
  const int64_t observed = std::llabs(ranks.doubled_sum_a - mean);
  double extreme = 0.0;
  double all = 0.0;
  for (std::size_t s = 0; s <= static_cast<std::size_t>(total); ++s) {
    all += count[na][s];
    if (std::llabs(static_cast<int64_t>(s) - mean) >= observed) {
      extreme += count[na][s];
    }
  }
  return extreme / all;
}

double SampleVariance(std::span<const double> x, double mean) {
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(x.size() - 1);
}

}  // namespace

TestResult MannWhitneyU(std::span<const double> sample_a,
                        std::span<const double> sample_b) {
  CheckSamples(sample_a, sample_b);
  const RankData ranks = Rank(sample_a, sample_b);
  TestResult r = NormalApprox(sample_a.size(), sample_b.size(), ranks);
  if (sample_a.size() + sample_b.size() <= kExactMannWhitneyMaxN) {
    r.exact = true;
    r.p_two_sided = ExactP(sample_a.size(), ranks);
  }
  r.significant_at_0_05 = r.p_two_sided < 0.05;
  return r;
}

TestResult MannWhitneyUApprox(std::span<const double> sample_a,
                              std::span<const double> sample_b) {
  CheckSamples(sample_a, sample_b);
  TestResult r =
      NormalApprox(sample_a.size(), sample_b.size(), Rank(sample_a, sample_b));
  r.significant_at_0_05 = r.p_two_sided < 0.05;
  return r;
}

WelchResult WelchTTest(std::span<const double> sample_a,
                       std::span<const double> sample_b) {
  WelchResult w;
  if (sample_a.size() < 2 || sample_b.size() < 2) return w;
  const double na = static_cast<double>(sample_a.size());
  const double nb = static_cast<double>(sample_b.size());
  const double ma = std::accumulate(sample_a.begin(), sample_a.end(), 0.0) / na;
  const double mb = std::accumulate(sample_b.begin(), sample_b.end(), 0.0) / nb;
  const double sa = SampleVariance(sample_a, ma) / na;
  const double sb = SampleVariance(sample_b, mb) / nb;
  const double se2 = sa + sb;
  if (se2 <= 0.0) return w;
  w.defined = true;
  w.t = (ma - mb) / std::sqrt(se2);
  w.df = se2 * se2 / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
  const boost::math::students_t dist(w.df);
  w.p_two_sided =
      std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(
                              dist, std::abs(w.t))));
  return w;
}

double Quantile(std::vector<double> values, double q) {
  if (values.empty()) {
    throw Error(ErrorCode::kEmptyGroup, "quantile of an empty sample");
  }
  std::sort(values.begin(), values.end());
  const double h = static_cast<double>(values.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

BoxSummary Summarize(std::span<const double> values) {
  if (values.empty()) {
    throw Error(ErrorCode::kEmptyGroup, "box summary of an empty group");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  BoxSummary b;
  b.n = sorted.size();
  b.min = sorted.front();
  b.max = sorted.back();
  b.q1 = Quantile(sorted, 0.25);
  b.median = Quantile(sorted, 0.5);
  b.q3 = Quantile(sorted, 0.75);
  const double iqr = b.q3 - b.q1;
  const double lo_fence = b.q1 - 1.5 * iqr;
  const double hi_fence = b.q3 + 1.5 * iqr;
  b.whisker_low = b.q1;
  b.whisker_high = b.q3;
  for (double v : sorted) {
    if (v < lo_fence || v > hi_fence) {
      b.outliers.push_back(v);
    } else {
      b.whisker_low = std::min(b.whisker_low, v);
      b.whisker_high = std::max(b.whisker_high, v);
    }
  }
  return b;
}

std::vector<BoxSummary> BoxStats(std::span<const double> values,
                                 std::span<const int> groups,
                                 std::size_t n_groups) {
  if (values.size() != groups.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                fmt::format("{} values vs {} group labels", values.size(),
                            groups.size()));
  }
  std::vector<std::vector<double>> by_group(n_groups);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (groups[i] < 0 || static_cast<std::size_t>(groups[i]) >= n_groups) {
      throw Error(ErrorCode::kLabelOutOfRange,
                  fmt::format("group {} not in 0..{}", groups[i], n_groups - 1));
    }
    by_group[groups[i]].push_back(values[i]);
  }
  std::vector<BoxSummary> out;
  for (std::size_t g = 0; g < n_groups; ++g) {
    if (by_group[g].empty()) {
      throw Error(ErrorCode::kEmptyGroup, fmt::format("group {} is empty", g));
    }
    BoxSummary b = Summarize(by_group[g]);
    b.group = g;
    out.push_back(std::move(b));
  }
  return out;
}

CrossTab RuralityCrossTab(std::span<const int> labels,
                          const YearDataset& dataset, std::size_t k) {
  if (labels.size() != dataset.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                fmt::format("{} labels for {} districts", labels.size(),
                            dataset.size()));
  }
  CrossTab table(kMaxRurality, std::vector<std::size_t>(k, 0));
  for (std::size_t r = 0; r < labels.size(); ++r) {
    const int category = dataset.rows[r].gdsc.rurality;
    if (labels[r] < 0 || static_cast<std::size_t>(labels[r]) >= k) {
      throw Error(ErrorCode::kLabelOutOfRange,
                  fmt::format("label {} not in 0..{}", labels[r], k - 1));
    }
    ++table[category - kMinRurality][labels[r]];
  }
  return table;
}

std::size_t CountNonUrban(std::span<const int> labels,
                          const YearDataset& dataset, int cluster) {
  std::size_t count = 0;
  for (std::size_t r = 0; r < labels.size() && r < dataset.size(); ++r) {
    if (labels[r] == cluster && dataset.rows[r].gdsc.rurality > 1) ++count;
  }
  return count;
}

std::vector<double> GdscColumn(const YearDataset& dataset,
                               std::size_t feature) {
  std::vector<double> column;
  column.reserve(dataset.size());
  for (const DistrictRow& row : dataset.rows) {
    column.push_back(feature < kNumGdscNumeric
                         ? row.gdsc.numeric[feature]
                         : static_cast<double>(row.gdsc.rurality));
  }
  return column;
}

std::string GdscFeatureName(std::size_t feature) {
  return std::string(feature < kNumGdscNumeric ? kGdscNumericColumns[feature]
                                               : kRuralityColumn);
}

std::vector<FeatureComparison> CompareLowCluster(std::span<const int> labels,
                                                 const YearDataset& dataset,
                                                 std::size_t k) {
  if (labels.size() != dataset.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                fmt::format("{} labels for {} districts", labels.size(),
                            dataset.size()));
  }
  std::vector<FeatureComparison> out;
  for (std::size_t f = 0; f < kNumGdscFeatures; ++f) {
    const std::vector<double> column = GdscColumn(dataset, f);
    std::vector<double> low;
    std::vector<double> rest;
    for (std::size_t r = 0; r < column.size(); ++r) {
      if (labels[r] == 0) {
        low.push_back(column[r]);
      } else if (k > 2 || labels[r] == 1) {
        rest.push_back(column[r]);
      }
    }
    FeatureComparison c;
    c.mann_whitney = MannWhitneyU(low, rest);
    c.mann_whitney.feature_name = GdscFeatureName(f);
    c.welch = WelchTTest(low, rest);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace vaxclust
