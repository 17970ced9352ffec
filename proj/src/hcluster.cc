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

#include "vaxclust/hcluster.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>

#include "vaxclust/csv.h"
#include "vaxclust/error.h"

namespace vaxclust {

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> condensed)
    : n_(n), condensed_(std::move(condensed)) {
  if (condensed_.size() != n * (n - 1) / 2) {
    throw Error(ErrorCode::kLengthMismatch,
                fmt::format("condensed matrix of size {} does not fit n = {}",
                            condensed_.size(), n));
  }
  for (double d : condensed_) {
    if (!std::isfinite(d) || d < 0.0) {
      throw Error(ErrorCode::kNonFiniteInput,
                  "distances must be finite and non-negative");
    }
  }
}

std::size_t DistanceMatrix::CondensedIndex(std::size_t n, std::size_t i,
                                           std::size_t j) {
  if (i > j) std::swap(i, j);
  // Row i starts after rows 0..i-1, which hold (n-1) + ... + (n-i) entries.
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

double DistanceMatrix::at(std::size_t i, std::size_t j) const {
  if (i == j) return 0.0;
  return condensed_[CondensedIndex(n_, i, j)];
}

DistanceMatrix PairwiseDistances(const Matrix& points) {
  const std::size_t n = points.rows();
  if (n < 2) {
    throw Error(ErrorCode::kTooFewRows,
                fmt::format("need at least 2 rows to cluster, got {}", n));
  }
  for (double v : points.data()) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFiniteInput, "non-finite coordinate");
    }
  }
  std::vector<double> condensed;
  condensed.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = points.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto b = points.row(j);
      double ss = 0.0;
      for (std::size_t c = 0; c < a.size(); ++c) {
        const double diff = a[c] - b[c];
        ss += diff * diff;
      }
      condensed.push_back(std::sqrt(ss));
    }
  }
  return DistanceMatrix(n, std::move(condensed));
}

std::string_view LinkageName(Linkage linkage) {
  switch (linkage) {
    case Linkage::kWard: return "ward";
    case Linkage::kAverage: return "average";
    case Linkage::kComplete: return "complete";
  }
  return "ward";
}

Linkage ParseLinkage(std::string_view name) {
  if (name == "ward") return Linkage::kWard;
  if (name == "average") return Linkage::kAverage;
  if (name == "complete") return Linkage::kComplete;
  throw Error(ErrorCode::kConfigError,
              fmt::format("unknown linkage '{}' (ward, average, complete)",
                          name));
}

Dendrogram Agglomerate(const DistanceMatrix& distances,
                       std::span<const double> weights, Linkage linkage) {
  const std::size_t n = distances.n();
  if (n < 1) throw Error(ErrorCode::kTooFewRows, "empty distance matrix");
  if (!weights.empty() && weights.size() != n) {
    throw Error(ErrorCode::kLengthMismatch,
                fmt::format("{} weights for {} leaves", weights.size(), n));
  }
  std::vector<double> mass(n, 1.0);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      throw Error(ErrorCode::kNonFiniteInput, "leaf weights must be positive");
    }
    mass[i] = weights[i];
  }

  // Working dissimilarities between slots. Ward works on squared heights.
  const bool ward = linkage == Linkage::kWard;
  Matrix work(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = distances.at(i, j);
      if (ward) d = 2.0 * mass[i] * mass[j] / (mass[i] + mass[j]) * d * d;
      work(i, j) = work(j, i) = d;
    }
  }

  std::vector<std::size_t> node_of(n);  // slot -> current node id
  std::iota(node_of.begin(), node_of.end(), std::size_t{0});
  std::vector<std::size_t> count(n, 1);
  std::vector<std::size_t> active(n);
  std::iota(active.begin(), active.end(), std::size_t{0});

  Dendrogram dendrogram;
  dendrogram.n_leaves = n;
  dendrogram.merges.reserve(n > 0 ? n - 1 : 0);

  for (std::size_t step = 0; step + 1 < n; ++step) {
    // Smallest (value, low node id, high node id).
    std::size_t best_a = 0, best_b = 0;
    auto best = std::make_tuple(std::numeric_limits<double>::infinity(),
                                std::numeric_limits<std::size_t>::max(),
                                std::numeric_limits<std::size_t>::max());
    for (std::size_t x = 0; x < active.size(); ++x) {
      for (std::size_t y = x + 1; y < active.size(); ++y) {
        const std::size_t a = active[x], b = active[y];
        const std::size_t lo = std::min(node_of[a], node_of[b]);
        const std::size_t hi = std::max(node_of[a], node_of[b]);
        const auto candidate = std::make_tuple(work(a, b), lo, hi);
        if (candidate < best) {
          best = candidate;
          best_a = a;
          best_b = b;
        }
      }
    }

    const double value = std::get<0>(best);
    Merge merge;
    merge.left = std::get<1>(best);
    merge.right = std::get<2>(best);
    merge.height = ward ? std::sqrt(std::max(0.0, value)) : value;
    merge.size = count[best_a] + count[best_b];
    dendrogram.merges.push_back(merge);

    // Lance-Williams update; the merged cluster lives in slot best_a.
    const double mi = mass[best_a], mj = mass[best_b];
    for (std::size_t k : active) {
      if (k == best_a || k == best_b) continue;
      const double dki = work(k, best_a), dkj = work(k, best_b);
      double updated = 0.0;
      switch (linkage) {
        case Linkage::kWard: {
          const double mk = mass[k];
          updated = ((mi + mk) * dki + (mj + mk) * dkj - mk * value) /
                    (mi + mj + mk);
          updated = std::max(0.0, updated);
          break;
        }
        case Linkage::kAverage:
          updated = (mi * dki + mj * dkj) / (mi + mj);
          break;
        case Linkage::kComplete:
          updated = std::max(dki, dkj);
          break;
      }
      work(k, best_a) = work(best_a, k) = updated;
    }
    mass[best_a] = mi + mj;
    count[best_a] = merge.size;
    node_of[best_a] = n + step;
    active.erase(std::find(active.begin(), active.end(), best_b));
  }
  return dendrogram;
}

std::vector<int> CutAtK(const Dendrogram& dendrogram, std::size_t k) {
  const std::size_t n = dendrogram.n_leaves;
  if (k < 1 || k > n) {
    throw Error(ErrorCode::kKOutOfRange,
                fmt::format("k = {} outside [1, {}]", k, n));
  }
  // Union-find over all 2n - 1 nodes; apply the first n - k merges.
  std::vector<std::size_t> parent(2 * n - 1);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n - k; ++i) {
    const Merge& m = dendrogram.merges[i];
    parent[find(m.left)] = n + i;
    parent[find(m.right)] = n + i;
  }
  std::vector<int> labels(n, -1);
  std::map<std::size_t, int> root_label;
  for (std::size_t leaf = 0; leaf < n; ++leaf) {
    const std::size_t root = find(leaf);
    auto [it, inserted] =
        root_label.emplace(root, static_cast<int>(root_label.size()));
    labels[leaf] = it->second;
  }
  return labels;
}

std::size_t SuggestK(const Dendrogram& dendrogram, std::size_t k_min,
                     std::size_t k_max) {
  const std::size_t n = dendrogram.n_leaves;
  if (k_min < 1 || k_min >= k_max || n < 2 || k_max > n - 1) {
    throw Error(ErrorCode::kKOutOfRange,
                fmt::format("need 1 <= k_min < k_max <= n - 1, got [{}, {}] "
                            "with n = {}",
                            k_min, k_max, n));
  }
  const auto& m = dendrogram.merges;
  std::size_t best_k = k_min;
  double best_gap = -1.0;
  for (std::size_t k = k_min; k <= k_max; ++k) {
    // Keeping k clusters keeps merges [0, n - k); merge n - k is next.
    const double gap = m[n - k].height - m[n - k - 1].height;
    if (gap > best_gap) {
      best_gap = gap;
      best_k = k;
    }
  }
  return best_k;
}

std::vector<std::string> CoverageVocabulary(std::size_t k) {
  switch (k) {
    case 2: return {"L", "H"};
    case 3: return {"L", "M", "H"};
    case 6: return {"Ls", "VL", "L", "M", "H", "Hst"};
    default: return {};
  }
}

ClusterAssignment LabelByCoverage(std::span<const int> raw_labels,
                                  const YearDataset& dataset, std::size_t k) {
  if (raw_labels.size() != dataset.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                fmt::format("{} labels for {} districts", raw_labels.size(),
                            dataset.size()));
  }
  if (k < 1) throw Error(ErrorCode::kKOutOfRange, "k must be positive");

  std::vector<std::vector<double>> values(k);
  std::vector<const std::string*> smallest_id(k, nullptr);
  for (std::size_t r = 0; r < raw_labels.size(); ++r) {
    const int label = raw_labels[r];
    if (label < 0 || static_cast<std::size_t>(label) >= k) {
      throw Error(ErrorCode::kLabelOutOfRange,
                  fmt::format("raw label {} outside [0, {})", label, k));
    }
    const auto& rates = dataset.rows[r].vaccination.rates;
    values[label].insert(values[label].end(), rates.begin(), rates.end());
    const std::string& id = dataset.rows[r].id;
    if (!smallest_id[label] || id < *smallest_id[label]) {
      smallest_id[label] = &id;
    }
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> mean(k);
  for (std::size_t c = 0; c < k; ++c) {
    if (values[c].empty()) {
      throw Error(ErrorCode::kKOutOfRange,
                  fmt::format("cluster {} of {} is empty", c, k));
    }
    mean[c] = StableMean(values[c]);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (mean[a] != mean[b]) return mean[a] < mean[b];
    return *smallest_id[a] < *smallest_id[b];
  });
  std::vector<int> rank_of(k);
  for (std::size_t rank = 0; rank < k; ++rank) {
    rank_of[order[rank]] = static_cast<int>(rank);
  }

  ClusterAssignment assignment;
  assignment.k = k;
  assignment.labels.reserve(raw_labels.size());
  for (int label : raw_labels) assignment.labels.push_back(rank_of[label]);
  assignment.names = CoverageVocabulary(k);
  if (assignment.names.empty()) {
    assignment.generic_names = true;
    for (std::size_t c = 0; c < k; ++c) {
      assignment.names.push_back(fmt::format("C{}", c + 1));
    }
  }
  return assignment;
}

std::vector<ClusterMeanRow> ClusterMeanTable(
    const ClusterAssignment& assignment, const YearDataset& dataset) {
  std::vector<ClusterMeanRow> rows(assignment.k);
  for (std::size_t c = 0; c < assignment.k; ++c) {
    rows[c].name = assignment.names[c];
    std::vector<double> all;
    for (std::size_t v = 0; v < kNumVaccines; ++v) {
      std::vector<double> column;
      for (std::size_t r = 0; r < dataset.size(); ++r) {
        if (assignment.labels[r] != static_cast<int>(c)) continue;
        column.push_back(dataset.rows[r].vaccination.rates[v]);
      }
      rows[c].count = column.size();
      rows[c].rates[v] = StableMean(column);
      all.insert(all.end(), column.begin(), column.end());
    }
    rows[c].overall = StableMean(all);
  }
  return rows;
}

void WriteDendrogram(std::ostream& out, const Dendrogram& dendrogram) {
  out << "left,right,height,size\n";
  for (const Merge& m : dendrogram.merges) {
    out << m.left << ',' << m.right << ',' << csv::FormatDouble(m.height)
        << ',' << m.size << '\n';
  }
}

void WriteAssignmentCsv(std::ostream& out, const ClusterAssignment& assignment,
                        const YearDataset& dataset) {
  csv::WriteRow(out,
                {"district_id", "district_name", "cluster_index",
                 "cluster_name"});
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    const int label = assignment.labels[r];
    csv::WriteRow(out, {dataset.rows[r].id, dataset.rows[r].name,
                        std::to_string(label), assignment.names[label]});
  }
}

double AdjustedRandIndex(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kLengthMismatch, "labelings differ in length");
  }
  const std::size_t n = a.size();
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> rows, cols;
  for (std::size_t i = 0; i < n; ++i) {
    joint[{a[i], b[i]}] += 1;
    rows[a[i]] += 1;
    cols[b[i]] += 1;
  }
  auto pairs = [](double x) { return x * (x - 1) / 2; };
  double sum_joint = 0, sum_rows = 0, sum_cols = 0;
  for (const auto& [key, c] : joint) sum_joint += pairs(c);
  for (const auto& [key, c] : rows) sum_rows += pairs(c);
  for (const auto& [key, c] : cols) sum_cols += pairs(c);
  const double total = pairs(static_cast<double>(n));
  if (total == 0) return 1.0;
  const double expected = sum_rows * sum_cols / total;
  const double max_index = 0.5 * (sum_rows + sum_cols);
  if (max_index == expected) return 1.0;
  return (sum_joint - expected) / (max_index - expected);
}

}  // namespace vaxclust
