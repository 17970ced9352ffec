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

#ifndef VAXCLUST_HCLUSTER_H_
#define VAXCLUST_HCLUSTER_H_

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vaxclust/dataset.h"
#include "vaxclust/matrix.h"

namespace vaxclust {

// Condensed upper-triangular Euclidean distance matrix.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(std::size_t n, std::vector<double> condensed);

  std::size_t n() const { return n_; }
  // d(i, i) = 0.
  double at(std::size_t i, std::size_t j) const;
  const std::vector<double>& condensed() const { return condensed_; }

  static std::size_t CondensedIndex(std::size_t n, std::size_t i,
                                    std::size_t j);

 private:
  std::size_t n_ = 0;
  std::vector<double> condensed_;
};

// Rows of `points` are observations. Throws kNonFiniteInput on NaN/inf and
// kTooFewRows when n < 2.
DistanceMatrix PairwiseDistances(const Matrix& points);

enum class Linkage { kWard, kAverage, kComplete };

std::string_view LinkageName(Linkage linkage);
Linkage ParseLinkage(std::string_view name);

// One agglomeration step. Leaves are nodes 0..n-1; the i-th merge creates
// node n + i. left < right.
struct Merge {
  std::size_t left = 0;
  std::size_t right = 0;
  double height = 0.0;
  std::size_t size = 0;  // leaves under the new node

  bool operator==(const Merge&) const = default;
};

struct Dendrogram {
  std::size_t n_leaves = 0;
  std::vector<Merge> merges;  // n_leaves - 1 entries, in merge order

  bool operator==(const Dendrogram&) const = default;
};

// Agglomerative clustering over a precomputed distance matrix with
// Lance-Williams updates. `weights` gives per-leaf masses for Ward and
// average linkage (empty = all ones). Ward heights follow the
// sqrt(2 * increase in within-cluster sum of squares) convention, so two
// singletons merge at their Euclidean distance. Exact distance ties go to the
// pair with the smallest (left, right) node ids.
Dendrogram Agglomerate(const DistanceMatrix& distances,
                       std::span<const double> weights = {},
                       Linkage linkage = Linkage::kWard);

// Undoes the last k - 1 merges. Labels are numbered 0..k-1 in order of each
// cluster's first leaf.
std::vector<int> CutAtK(const Dendrogram& dendrogram, std::size_t k);

// k in [k_min, k_max] with the largest jump between the merge that would be
// undone next and the last merge kept. Ties go to the smaller k.
std::size_t SuggestK(const Dendrogram& dendrogram, std::size_t k_min,
                     std::size_t k_max);

// Display names for k = 2, 3 and 6; empty for other k.
std::vector<std::string> CoverageVocabulary(std::size_t k);

struct ClusterAssignment {
  std::size_t k = 0;
  // Per-district index into `names`; index grows with cluster mean coverage.
  std::vector<int> labels;
  std::vector<std::string> names;
  // True when k has no standard vocabulary and names are "C1".."Ck".
  bool generic_names = false;

  bool operator==(const ClusterAssignment&) const = default;
};

// Relabels clusters so that index order follows ascending mean coverage of
// the raw (unscaled) rates. Equal means are ordered by smallest member id.
ClusterAssignment LabelByCoverage(std::span<const int> raw_labels,
                                  const YearDataset& dataset, std::size_t k);

struct ClusterMeanRow {
  std::string name;
  std::size_t count = 0;
  std::array<double, kNumVaccines> rates{};
  double overall = 0.0;

  bool operator==(const ClusterMeanRow&) const = default;
};

// Per-cluster mean rates in cluster index order.
std::vector<ClusterMeanRow> ClusterMeanTable(
    const ClusterAssignment& assignment, const YearDataset& dataset);

// Four-column linkage layout: left right height size.
void WriteDendrogram(std::ostream& out, const Dendrogram& dendrogram);

// clusters_<year>_k<k>.csv body.
void WriteAssignmentCsv(std::ostream& out, const ClusterAssignment& assignment,
                        const YearDataset& dataset);

// Adjusted Rand index between two labelings of the same items.
double AdjustedRandIndex(std::span<const int> a, std::span<const int> b);

}  // namespace vaxclust

#endif  // VAXCLUST_HCLUSTER_H_
