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

#ifndef VAXCLUST_STATS_H_
#define VAXCLUST_STATS_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vaxclust/dataset.h"

namespace vaxclust {

// Pooled sizes up to this use the exact null distribution.
inline constexpr std::size_t kExactMannWhitneyMaxN = 20;

struct TestResult {
  std::string feature_name;
  double u_statistic = 0.0;  // U of the first sample
  double z = 0.0;            // continuity-corrected, tie-corrected
  double p_two_sided = 1.0;
  std::size_t n_low = 0;
  std::size_t n_high = 0;
  bool exact = false;
  bool significant_at_0_05 = false;

  bool operator==(const TestResult&) const = default;
};

// Two-sided Mann-Whitney U with midranks for ties. For n_a + n_b <= 20 the
// p-value is exact: the share of all C(n_a + n_b, n_a) splits of the pooled
// midranks whose rank sum lies at least as far from its mean as observed.
// Otherwise the normal approximation with tie and continuity correction is
// used. Throws kEmptySample.
TestResult MannWhitneyU(std::span<const double> sample_a,
                        std::span<const double> sample_b);

// Normal-approximation p for the same statistic regardless of size.
TestResult MannWhitneyUApprox(std::span<const double> sample_a,
                              std::span<const double> sample_b);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p_two_sided = 1.0;
  bool defined = false;  // needs n >= 2 per sample and non-zero spread

  bool operator==(const WelchResult&) const = default;
};

WelchResult WelchTTest(std::span<const double> sample_a,
                       std::span<const double> sample_b);

// Quantile by linear interpolation between order statistics: position
// h = (n - 1) q over the sorted values (R type 7). For {1,2,3,4,5} this gives
// q1 = 2, median = 3, q3 = 4.
double Quantile(std::vector<double> values, double q);

struct BoxSummary {
  std::size_t group = 0;
  std::size_t n = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  // Most extreme data points within 1.5 IQR of the quartiles.
  double whisker_low = 0.0;
  double whisker_high = 0.0;
  std::vector<double> outliers;  // ascending

  bool operator==(const BoxSummary&) const = default;
};

BoxSummary Summarize(std::span<const double> values);

// One summary per group 0..n_groups-1. Throws kEmptyGroup, kLengthMismatch,
// kLabelOutOfRange.
std::vector<BoxSummary> BoxStats(std::span<const double> values,
                                 std::span<const int> groups,
                                 std::size_t n_groups);

// counts[category - 1][cluster] for rurality categories 1..6.
using CrossTab = std::vector<std::vector<std::size_t>>;
CrossTab RuralityCrossTab(std::span<const int> labels,
                          const YearDataset& dataset, std::size_t k);

// Districts in `cluster` whose rurality exceeds 1.
std::size_t CountNonUrban(std::span<const int> labels,
                          const YearDataset& dataset, int cluster);

struct FeatureComparison {
  TestResult mann_whitney;
  WelchResult welch;

  bool operator==(const FeatureComparison&) const = default;
};

// For each GDSC feature (eight numeric, then rurality): the lowest-coverage
// cluster 0 against cluster 1 when k = 2, or against all other clusters
// pooled when k > 2.
std::vector<FeatureComparison> CompareLowCluster(std::span<const int> labels,
                                                 const YearDataset& dataset,
                                                 std::size_t k);

// Values of one GDSC feature per row; index 8 is rurality.
std::vector<double> GdscColumn(const YearDataset& dataset, std::size_t feature);
std::string GdscFeatureName(std::size_t feature);
inline constexpr std::size_t kNumGdscFeatures = kNumGdscNumeric + 1;

}  // namespace vaxclust

#endif  // VAXCLUST_STATS_H_
