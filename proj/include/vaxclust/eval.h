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

#ifndef VAXCLUST_EVAL_H_
#define VAXCLUST_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vaxclust/dataset.h"
#include "vaxclust/gbdt.h"
#include "vaxclust/matrix.h"

namespace vaxclust {

struct FoldPlan {
  std::size_t k_folds = 5;
  std::vector<int> assignments;  // per row, 0..k_folds-1
  uint64_t seed = 0;

  std::vector<std::size_t> TestRows(std::size_t fold) const;
  std::vector<std::size_t> TrainRows(std::size_t fold) const;
};

// Rows of each class (classes in ascending order, rows in index order) are
// shuffled with one Rng(seed) stream and dealt round-robin; the dealing
// offset carries over from one class to the next so fold sizes stay
// balanced. Throws kKFoldsOutOfRange, kTooFewRows, kLabelOutOfRange.
FoldPlan StratifiedFolds(std::span<const int> labels, std::size_t k_folds,
                         uint64_t seed);

// Unstratified: one shuffle of all rows, dealt round-robin.
FoldPlan RandomFolds(std::size_t n, std::size_t k_folds, uint64_t seed);

// counts[i][j] = rows with truth i predicted as j.
using Confusion = std::vector<std::vector<std::size_t>>;

// Throws kLengthMismatch, kLabelOutOfRange.
Confusion ConfusionMatrix(std::span<const int> truth,
                          std::span<const int> predicted, std::size_t k);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;  // truth count

  bool operator==(const ClassMetrics&) const = default;
};

struct FoldMetrics {
  double accuracy = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  // Support-weighted variants.
  double weighted_precision = 0.0;
  double weighted_recall = 0.0;
  double weighted_f1 = 0.0;
  Confusion confusion;
  std::vector<ClassMetrics> per_class;
  // Classes the macro means ran over.
  std::vector<std::size_t> classes;
  // Precision/recall/F1 values set to 0 because of a zero denominator.
  std::size_t zero_denominators = 0;

  bool operator==(const FoldMetrics&) const = default;
};

// Per-class P = TP/(TP+FP), R = TP/(TP+FN), F1 = 2PR/(P+R), each 0 when its
// denominator is 0. With present_only, macro and weighted means run over the
// classes that occur in truth or predictions; otherwise over all classes.
// Throws kEmptyMatrix.
FoldMetrics MacroMetrics(const Confusion& confusion,
                         bool present_only = false);

struct MetricsBundle {
  // Scalar metrics are means over folds; the confusion is pooled.
  FoldMetrics mean;
  std::vector<FoldMetrics> per_fold;
  std::vector<std::string> warnings;

  bool operator==(const MetricsBundle&) const = default;
};

// Fold-order independent mean of fold metrics.
FoldMetrics AggregateFolds(std::span<const FoldMetrics> folds);

struct CvConfig {
  std::size_t k_folds = 5;
  bool stratified = true;
  uint64_t seed = 0;
  TrainConfig train;
};

struct FoldResult {
  std::vector<std::size_t> test_rows;
  TreeEnsemble model;
  Matrix test_encoded;  // held-out rows in the model's feature space
  std::vector<int> predicted;
};

struct CvResult {
  FoldPlan plan;
  MetricsBundle metrics;
  std::vector<FoldResult> folds;
};

// Fits one model per fold on the remaining rows (train seed = seed ^ fold)
// and scores the held-out rows. A fold lacking some class is scored over the
// classes present and reported in metrics.warnings.
CvResult CrossValidate(const FeatureTable& features,
                       std::span<const int> labels, std::size_t n_classes,
                       const CvConfig& config);

// The eight numeric GDSC features plus rurality as a categorical feature.
FeatureTable GdscFeatures(const YearDataset& dataset);

}  // namespace vaxclust

#endif  // VAXCLUST_EVAL_H_
