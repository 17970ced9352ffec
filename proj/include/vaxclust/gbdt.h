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

#ifndef VAXCLUST_GBDT_H_
#define VAXCLUST_GBDT_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vaxclust/matrix.h"

namespace vaxclust {

enum class LossKind { kBinaryLogistic, kMulticlassSoftmax };

std::string_view LossName(LossKind loss);
LossKind ParseLoss(std::string_view name);

struct TrainConfig {
  int n_trees = 500;  // boosting rounds
  int depth = 6;
  double learning_rate = 0.1;
  double l2_leaf_reg = 3.0;
  double ts_prior_weight = 1.0;
  int n_permutations = 1;
  // Per-feature split candidates come from this many quantile buckets.
  int border_count = 32;
  uint64_t seed = 0;
  // Unset: binary logistic for 2 classes, softmax otherwise.
  std::optional<LossKind> loss;

  // Throws kInvalidConfig.
  void Validate() const;
};

// Raw classifier input: numeric columns plus integer-coded categorical
// columns.
struct FeatureTable {
  std::vector<std::string> numeric_names;
  Matrix numeric;
  std::vector<std::string> categorical_names;
  std::vector<std::vector<int>> categorical;  // [feature][row]

  std::size_t rows() const { return numeric.rows(); }
  std::size_t num_sources() const {
    return numeric_names.size() + categorical_names.size();
  }
  std::vector<std::string> SourceNames() const;
  FeatureTable SelectRows(std::span<const std::size_t> indices) const;
};

struct Split {
  std::size_t feature = 0;
  double threshold = 0.0;

  bool operator==(const Split&) const = default;
};

// Symmetric tree: level l applies splits[l] everywhere. Leaf index bit l is
// set when x[splits[l].feature] > splits[l].threshold.
struct ObliviousTree {
  std::vector<Split> splits;
  std::vector<double> leaf_values;  // 2^depth
  std::vector<double> leaf_cover;   // training rows per leaf
  std::size_t output = 0;           // margin this tree contributes to

  std::size_t depth() const { return splits.size(); }
  std::size_t LeafIndex(std::span<const double> x) const;
  double Evaluate(std::span<const double> x) const {
    return leaf_values[LeafIndex(x)];
  }

  bool operator==(const ObliviousTree&) const = default;
};

// Ordered target statistic for one categorical column and one target
// column: the row at permutation position j gets
//   (sum of targets of same-category rows at positions < j + a * p) /
//   (count of those rows + a).
std::vector<double> EncodeOrderedTs(std::span<const int> categories,
                                    std::span<const double> targets,
                                    std::span<const std::size_t> permutation,
                                    double prior_weight, double prior);

// Target-statistic encoder for categorical features. Each categorical column
// expands to one encoded column per target component (one for binary, one per
// class for multiclass).
class OrderedTsEncoder {
 public:
  struct ColumnStats {
    double prior = 0.0;
    std::map<int, double> sum;    // category -> sum of targets
    std::map<int, double> count;  // category -> rows

    bool operator==(const ColumnStats&) const = default;
  };

  OrderedTsEncoder() = default;

  // Fits full-data statistics on the training rows and returns their
  // leak-free ordered encodings (n x num_outputs). With several permutations
  // the ordered encodings are averaged.
  static OrderedTsEncoder FitTransform(
      const std::vector<std::vector<int>>& categorical,
      std::span<const int> labels, std::size_t n_classes, double prior_weight,
      int n_permutations, uint64_t seed, Matrix* encoded);

  // Inference encoding from the frozen full-training statistics. Unseen
  // categories map to the prior.
  Matrix Transform(const std::vector<std::vector<int>>& categorical) const;
  double EncodeValue(std::size_t column, int category) const;

  std::size_t num_inputs() const { return num_inputs_; }
  std::size_t targets_per_input() const { return targets_per_input_; }
  std::size_t num_outputs() const { return columns_.size(); }
  double prior_weight() const { return prior_weight_; }
  const std::vector<ColumnStats>& columns() const { return columns_; }

  // Reassembles an encoder from persisted statistics.
  static OrderedTsEncoder FromStats(std::size_t num_inputs,
                                    std::size_t targets_per_input,
                                    double prior_weight,
                                    std::vector<ColumnStats> columns);

  bool operator==(const OrderedTsEncoder&) const = default;

 private:
  std::size_t num_inputs_ = 0;
  std::size_t targets_per_input_ = 0;
  double prior_weight_ = 1.0;
  // Output column c encodes input c / targets_per_input_ against target
  // component c % targets_per_input_.
  std::vector<ColumnStats> columns_;
};

// margin_o(x) = base_score[o] + learning_rate * sum of trees with output o.
struct TreeEnsemble {
  LossKind loss = LossKind::kBinaryLogistic;
  std::size_t n_classes = 2;
  double learning_rate = 1.0;
  std::vector<double> base_score;  // per output
  std::vector<ObliviousTree> trees;

  // Encoded feature space the trees split on: numeric sources first, then the
  // encoder's output columns.
  std::vector<std::string> feature_names;
  std::vector<std::size_t> feature_source;  // encoded column -> source index
  std::vector<std::string> source_names;
  std::size_t num_numeric = 0;
  OrderedTsEncoder encoder;
  TrainConfig config;

  // 1 for binary (class-1 logit), n_classes for softmax.
  std::size_t num_outputs() const { return base_score.size(); }
  std::size_t num_features() const { return feature_names.size(); }

  // Raw features -> encoded rows using the frozen encoder.
  Matrix Encode(const FeatureTable& table) const;

  // A model over `num_features` plain numeric features with no encoder;
  // used for hand-built and randomized ensembles.
  static TreeEnsemble Plain(std::size_t num_features, std::size_t n_classes,
                            double learning_rate,
                            std::vector<double> base_score);
};

struct TrainTrace {
  // Training logloss before the first round and after every round.
  std::vector<double> train_logloss;
};

// Gradient boosting with Newton leaves v = -G / (H + l2_leaf_reg) and
// level-wise oblivious split search over quantile borders. Throws
// kDegenerateLabels (fewer than two classes present), kNonFiniteFeature,
// kInvalidConfig, kLabelOutOfRange, kTooFewRows.
TreeEnsemble Fit(const FeatureTable& features, std::span<const int> labels,
                 std::size_t n_classes, const TrainConfig& config,
                 TrainTrace* trace = nullptr);

// Up to border_count - 1 thresholds at midpoints between distinct values,
// spaced by row quantiles.
std::vector<double> QuantileBorders(std::vector<double> values,
                                    int border_count);

// x is a row in the encoded feature space. Throws kFeatureArityMismatch.
std::vector<double> PredictMargin(const TreeEnsemble& model,
                                  std::span<const double> x);
std::vector<double> PredictProba(const TreeEnsemble& model,
                                 std::span<const double> x);
// Argmax of PredictProba; ties go to the lower class.
int PredictClass(const TreeEnsemble& model, std::span<const double> x);

// Logistic (one margin) or softmax (one margin per class).
std::vector<double> MarginsToProba(std::span<const double> margins);

// Mean negative log-likelihood of `labels` under the model on encoded rows.
double LogLoss(const TreeEnsemble& model, const Matrix& encoded,
               std::span<const int> labels);

// Self-describing JSON document, lossless for every double.
std::string ModelToJson(const TreeEnsemble& model);
TreeEnsemble ModelFromJson(std::string_view json);

}  // namespace vaxclust

#endif  // VAXCLUST_GBDT_H_
