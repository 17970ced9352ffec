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

#include "vaxclust/eval.h"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "vaxclust/error.h"
#include "vaxclust/numeric.h"
#include "vaxclust/rng.h"

namespace vaxclust {
namespace {

void CheckFoldCount(std::size_t n, std::size_t k_folds) {
  if (k_folds < 2) {
    throw Error(ErrorCode::kKFoldsOutOfRange,
                fmt::format("k_folds must be at least 2, got {}", k_folds));
  }
  if (n < k_folds) {
    throw Error(ErrorCode::kTooFewRows,
                fmt::format("{} rows cannot fill {} folds", n, k_folds));
  }
}

double SafeRatio(double num, double den, std::size_t& zero_count) {
  if (den == 0.0) {
    ++zero_count;
    return 0.0;
  }
  return num / den;
}

}  // namespace

std::vector<std::size_t> FoldPlan::TestRows(std::size_t fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < assignments.size(); ++r) {
    if (static_cast<std::size_t>(assignments[r]) == fold) rows.push_back(r);
  }
  return rows;
}

std::vector<std::size_t> FoldPlan::TrainRows(std::size_t fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < assignments.size(); ++r) {
    if (static_cast<std::size_t>(assignments[r]) != fold) rows.push_back(r);
  }
  return rows;
}

FoldPlan StratifiedFolds(std::span<const int> labels, std::size_t k_folds,
                         uint64_t seed) {
  CheckFoldCount(labels.size(), k_folds);
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t r = 0; r < labels.size(); ++r) {
    if (labels[r] < 0) {
      throw Error(ErrorCode::kLabelOutOfRange,
                  fmt::format("row {} has negative label {}", r, labels[r]));
    }
    by_class[labels[r]].push_back(r);
  }
  FoldPlan plan;
  plan.k_folds = k_folds;
  plan.seed = seed;
  plan.assignments.assign(labels.size(), 0);
  Rng rng(seed);
  std::size_t offset = 0;
  for (auto& [label, rows] : by_class) {
    rng.Shuffle(rows);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      plan.assignments[rows[i]] = static_cast<int>((offset + i) % k_folds);
    }
    offset += rows.size();
  }
  return plan;
}

FoldPlan RandomFolds(std::size_t n, std::size_t k_folds, uint64_t seed) {
  CheckFoldCount(n, k_folds);
  FoldPlan plan;
  plan.k_folds = k_folds;
  plan.seed = seed;
  plan.assignments.assign(n, 0);
  const std::vector<std::size_t> order = RandomPermutation(n, seed);
  for (std::size_t i = 0; i < n; ++i) {
    plan.assignments[order[i]] = static_cast<int>(i % k_folds);
  }
  return plan;
}

Confusion ConfusionMatrix(std::span<const int> truth,
                          std::span<const int> predicted, std::size_t k) {
  if (truth.size() != predicted.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                fmt::format("{} truth labels vs {} predictions", truth.size(),
                            predicted.size()));
  }
  Confusion counts(k, std::vector<std::size_t>(k, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    for (int label : {truth[i], predicted[i]}) {
      if (label < 0 || static_cast<std::size_t>(label) >= k) {
        throw Error(ErrorCode::kLabelOutOfRange,
                    fmt::format("label {} not in 0..{}", label, k - 1));
      }
    }
    ++counts[truth[i]][predicted[i]];
  }
  return counts;
}

FoldMetrics MacroMetrics(const Confusion& confusion, bool present_only) {
  const std::size_t k = confusion.size();
  std::size_t total = 0;
  for (const auto& row : confusion) {
    if (row.size() != k) {
      throw Error(ErrorCode::kLengthMismatch, "confusion matrix is not square");
    }
    for (std::size_t v : row) total += v;
  }
  if (k == 0 || total == 0) {
    throw Error(ErrorCode::kEmptyMatrix, "confusion matrix is empty");
  }

  FoldMetrics m;
  m.confusion = confusion;
  m.per_class.resize(k);
  std::size_t trace = 0;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t row_sum = 0;
    std::size_t col_sum = 0;
    for (std::size_t j = 0; j < k; ++j) {
      row_sum += confusion[c][j];
      col_sum += confusion[j][c];
    }
    const double tp = static_cast<double>(confusion[c][c]);
    trace += confusion[c][c];
    ClassMetrics& cm = m.per_class[c];
    cm.support = row_sum;
    cm.precision = SafeRatio(tp, static_cast<double>(col_sum),
                             m.zero_denominators);
    cm.recall = SafeRatio(tp, static_cast<double>(row_sum),
                          m.zero_denominators);
    cm.f1 = SafeRatio(2.0 * cm.precision * cm.recall,
                      cm.precision + cm.recall, m.zero_denominators);
    if (!present_only || row_sum > 0 || col_sum > 0) m.classes.push_back(c);
  }
  m.accuracy = static_cast<double>(trace) / static_cast<double>(total);

  std::vector<double> p;
  std::vector<double> r;
  std::vector<double> f;
  double wp = 0.0;
  double wr = 0.0;
  double wf = 0.0;
  double support = 0.0;
  for (std::size_t c : m.classes) {
    const ClassMetrics& cm = m.per_class[c];
    p.push_back(cm.precision);
    r.push_back(cm.recall);
    f.push_back(cm.f1);
    const double w = static_cast<double>(cm.support);
    wp += w * cm.precision;
    wr += w * cm.recall;
    wf += w * cm.f1;
    support += w;
  }
  m.macro_precision = std::accumulate(p.begin(), p.end(), 0.0) /
                      static_cast<double>(p.size());
  m.macro_recall = std::accumulate(r.begin(), r.end(), 0.0) /
                   static_cast<double>(r.size());
  m.macro_f1 = std::accumulate(f.begin(), f.end(), 0.0) /
               static_cast<double>(f.size());
  if (support > 0.0) {
    m.weighted_precision = wp / support;
    m.weighted_recall = wr / support;
    m.weighted_f1 = wf / support;
  }
  return m;
}

FoldMetrics AggregateFolds(std::span<const FoldMetrics> folds) {
  if (folds.empty()) {
    throw Error(ErrorCode::kEmptyMatrix, "no folds to aggregate");
  }
  auto mean_of = [&](double FoldMetrics::*field) {
    std::vector<double> values;
    values.reserve(folds.size());
    for (const FoldMetrics& f : folds) values.push_back(f.*field);
    return OrderInvariantMean(std::move(values));
  };
  FoldMetrics out;
  out.accuracy = mean_of(&FoldMetrics::accuracy);
  out.macro_precision = mean_of(&FoldMetrics::macro_precision);
  out.macro_recall = mean_of(&FoldMetrics::macro_recall);
  out.macro_f1 = mean_of(&FoldMetrics::macro_f1);
  out.weighted_precision = mean_of(&FoldMetrics::weighted_precision);
  out.weighted_recall = mean_of(&FoldMetrics::weighted_recall);
  out.weighted_f1 = mean_of(&FoldMetrics::weighted_f1);

  const std::size_t k = folds.front().confusion.size();
  out.confusion.assign(k, std::vector<std::size_t>(k, 0));
  for (const FoldMetrics& f : folds) {
    out.zero_denominators += f.zero_denominators;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        out.confusion[i][j] += f.confusion[i][j];
      }
    }
  }
  // Per-class entries are fold means too.
  out.per_class.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<double> p, r, f1;
    for (const FoldMetrics& f : folds) {
      p.push_back(f.per_class[c].precision);
      r.push_back(f.per_class[c].recall);
      f1.push_back(f.per_class[c].f1);
      out.per_class[c].support += f.per_class[c].support;
    }
    out.per_class[c].precision = OrderInvariantMean(std::move(p));
    out.per_class[c].recall = OrderInvariantMean(std::move(r));
    out.per_class[c].f1 = OrderInvariantMean(std::move(f1));
  }
  out.classes.resize(k);
  std::iota(out.classes.begin(), out.classes.end(), std::size_t{0});
  return out;
}

CvResult CrossValidate(const FeatureTable& features,
                       std::span<const int> labels, std::size_t n_classes,
                       const CvConfig& config) {
  if (labels.size() != features.rows()) {
    throw Error(ErrorCode::kLengthMismatch,
                fmt::format("{} labels for {} rows", labels.size(),
                            features.rows()));
  }
  CvResult result;
  result.plan = config.stratified
                    ? StratifiedFolds(labels, config.k_folds, config.seed)
                    : RandomFolds(labels.size(), config.k_folds, config.seed);

  for (std::size_t fold = 0; fold < config.k_folds; ++fold) {
    const std::vector<std::size_t> train_rows = result.plan.TrainRows(fold);
    const std::vector<std::size_t> test_rows = result.plan.TestRows(fold);
    std::vector<int> train_labels;
    std::vector<int> test_labels;
    for (std::size_t r : train_rows) train_labels.push_back(labels[r]);
    for (std::size_t r : test_rows) test_labels.push_back(labels[r]);

    TrainConfig train = config.train;
    train.seed = config.seed ^ static_cast<uint64_t>(fold);
    FoldResult fr;
    fr.test_rows = test_rows;
    fr.model = Fit(features.SelectRows(train_rows), train_labels, n_classes,
                   train);
    fr.test_encoded = fr.model.Encode(features.SelectRows(test_rows));
    for (std::size_t i = 0; i < test_rows.size(); ++i) {
      fr.predicted.push_back(PredictClass(fr.model, fr.test_encoded.row(i)));
    }

    std::vector<bool> present(n_classes, false);
    for (int label : test_labels) present[label] = true;
    std::vector<std::size_t> missing;
    for (std::size_t c = 0; c < n_classes; ++c) {
      if (!present[c]) missing.push_back(c);
    }
    if (!missing.empty()) {
      result.metrics.warnings.push_back(fmt::format(
          "FoldWithMissingClass: fold {} has no held-out rows of class {}",
          fold, fmt::join(missing, ",")));
    }
    result.metrics.per_fold.push_back(MacroMetrics(
        ConfusionMatrix(test_labels, fr.predicted, n_classes),
        /*present_only=*/!missing.empty()));
    result.folds.push_back(std::move(fr));
  }
  result.metrics.mean = AggregateFolds(result.metrics.per_fold);
  std::size_t zero = result.metrics.mean.zero_denominators;
  if (zero > 0) {
    result.metrics.warnings.push_back(fmt::format(
        "ZeroDenominator: {} precision/recall/F1 values set to 0", zero));
  }
  return result;
}

FeatureTable GdscFeatures(const YearDataset& dataset) {
  FeatureTable table;
  for (std::string_view name : kGdscNumericColumns) {
    table.numeric_names.emplace_back(name);
  }
  table.categorical_names.emplace_back(kRuralityColumn);
  table.numeric = Matrix(dataset.size(), kNumGdscNumeric);
  table.categorical.assign(1, std::vector<int>(dataset.size()));
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    const GdscProfile& g = dataset.rows[r].gdsc;
    for (std::size_t f = 0; f < kNumGdscNumeric; ++f) {
      table.numeric(r, f) = g.numeric[f];
    }
    table.categorical[0][r] = g.rurality;
  }
  return table;
}

}  // namespace vaxclust
