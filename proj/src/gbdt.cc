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

#include "vaxclust/gbdt.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <utility>

#include "json.hpp"
#include "vaxclust/error.h"
#include "vaxclust/rng.h"

namespace vaxclust {
namespace {

constexpr int kModelFormatVersion = 1;

void ThrowConfig(const std::string& message) {
  throw Error(ErrorCode::kInvalidConfig, message);
}

// Per-feature bucket of every training row: the number of borders the value
// exceeds. A row goes right on border j iff bucket > j.
struct BinnedFeatures {
  std::vector<std::vector<double>> borders;           // [feature]
  std::vector<std::vector<std::uint16_t>> buckets;    // [feature][row]
};

BinnedFeatures BinFeatures(const Matrix& x, int border_count) {
  BinnedFeatures binned;
  binned.borders.resize(x.cols());
  binned.buckets.resize(x.cols());
  for (std::size_t f = 0; f < x.cols(); ++f) {
    const std::vector<double> column = x.column(f);
    binned.borders[f] = QuantileBorders(column, border_count);
    const auto& borders = binned.borders[f];
    auto& buckets = binned.buckets[f];
    buckets.resize(column.size());
    for (std::size_t r = 0; r < column.size(); ++r) {
      buckets[r] = static_cast<std::uint16_t>(
          std::lower_bound(borders.begin(), borders.end(), column[r]) -
          borders.begin());
    }
  }
  return binned;
}

double LeafScore(double g, double h, double l2) {
  const double denom = h + l2;
  return denom > 0.0 ? g * g / denom : 0.0;
}

double LeafValue(double g, double h, double l2) {
  const double denom = h + l2;
  return denom > 0.0 ? -g / denom : 0.0;
}

// Greedy level-wise construction of one oblivious tree on (g, h).
ObliviousTree BuildTree(const BinnedFeatures& binned,
                        std::span<const double> grad,
                        std::span<const double> hess, int max_depth,
                        double l2) {
  const std::size_t n = grad.size();
  const std::size_t num_features = binned.borders.size();
  std::vector<std::size_t> leaf_of_row(n, 0);
  std::set<std::pair<std::size_t, std::size_t>> used;

  ObliviousTree tree;
  for (int level = 0; level < max_depth; ++level) {
    const std::size_t num_leaves = std::size_t{1} << level;
    bool found = false;
    double best_score = -std::numeric_limits<double>::infinity();
    std::size_t best_feature = 0, best_border = 0;

    for (std::size_t f = 0; f < num_features; ++f) {
      const std::size_t nb = binned.borders[f].size();
      if (nb == 0) continue;
      const std::size_t width = nb + 1;
      std::vector<double> hist_g(num_leaves * width, 0.0);
      std::vector<double> hist_h(num_leaves * width, 0.0);
      const auto& buckets = binned.buckets[f];
      for (std::size_t r = 0; r < n; ++r) {
        const std::size_t slot = leaf_of_row[r] * width + buckets[r];
        hist_g[slot] += grad[r];
        hist_h[slot] += hess[r];
      }
      std::vector<double> score(nb, 0.0);
      for (std::size_t leaf = 0; leaf < num_leaves; ++leaf) {
        const double* g = &hist_g[leaf * width];
        const double* h = &hist_h[leaf * width];
        double total_g = 0.0, total_h = 0.0;
        for (std::size_t b = 0; b < width; ++b) {
          total_g += g[b];
          total_h += h[b];
        }
        double left_g = 0.0, left_h = 0.0;
        for (std::size_t j = 0; j < nb; ++j) {
          left_g += g[j];
          left_h += h[j];
          score[j] += LeafScore(left_g, left_h, l2) +
                      LeafScore(total_g - left_g, total_h - left_h, l2);
        }
      }
      for (std::size_t j = 0; j < nb; ++j) {
        if (used.contains({f, j})) continue;
        // Strict comparison keeps the lowest feature, then lowest border.
        if (!found || score[j] > best_score) {
          found = true;
          best_score = score[j];
          best_feature = f;
          best_border = j;
        }
      }
    }
    if (!found) break;

    used.insert({best_feature, best_border});
    tree.splits.push_back(
        Split{best_feature, binned.borders[best_feature][best_border]});
    const auto& buckets = binned.buckets[best_feature];
    for (std::size_t r = 0; r < n; ++r) {
      if (buckets[r] > best_border) {
        leaf_of_row[r] |= std::size_t{1} << level;
      }
    }
  }

  const std::size_t num_leaves = std::size_t{1} << tree.splits.size();
  std::vector<double> sum_g(num_leaves, 0.0), sum_h(num_leaves, 0.0);
  tree.leaf_cover.assign(num_leaves, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    sum_g[leaf_of_row[r]] += grad[r];
    sum_h[leaf_of_row[r]] += hess[r];
    tree.leaf_cover[leaf_of_row[r]] += 1.0;
  }
  tree.leaf_values.resize(num_leaves);
  for (std::size_t leaf = 0; leaf < num_leaves; ++leaf) {
    tree.leaf_values[leaf] = LeafValue(sum_g[leaf], sum_h[leaf], l2);
  }
  return tree;
}

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Per-row negative log-likelihood of `label` given output margins.
double RowLoss(std::span<const double> margins, int label) {
  if (margins.size() == 1) {
    const double z = margins[0];
    // log(1 + exp(-z)) for label 1, log(1 + exp(z)) for label 0.
    const double s = label == 1 ? -z : z;
    return s > 0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s));
  }
  const double top = *std::max_element(margins.begin(), margins.end());
  double sum = 0.0;
  for (double m : margins) sum += std::exp(m - top);
  return top + std::log(sum) - margins[label];
}

}  // namespace

std::string_view LossName(LossKind loss) {
  return loss == LossKind::kBinaryLogistic ? "binary_logistic"
                                           : "multiclass_softmax";
}

LossKind ParseLoss(std::string_view name) {
  if (name == "binary_logistic") return LossKind::kBinaryLogistic;
  if (name == "multiclass_softmax") return LossKind::kMulticlassSoftmax;
  throw Error(ErrorCode::kInvalidConfig, fmt::format("unknown loss '{}'", name));
}

void TrainConfig::Validate() const {
  if (n_trees < 1) ThrowConfig("n_trees must be >= 1");
  if (depth < 1 || depth > 16) ThrowConfig("depth must be in [1, 16]");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
    ThrowConfig("learning_rate must be in (0, 1]");
  }
  if (!(l2_leaf_reg >= 0.0)) ThrowConfig("l2_leaf_reg must be >= 0");
  if (!(ts_prior_weight > 0.0)) ThrowConfig("ts_prior_weight must be > 0");
  if (n_permutations < 1) ThrowConfig("n_permutations must be >= 1");
  if (border_count < 2 || border_count > 1024) {
    ThrowConfig("border_count must be in [2, 1024]");
  }
}

std::vector<std::string> FeatureTable::SourceNames() const {
  std::vector<std::string> names = numeric_names;
  names.insert(names.end(), categorical_names.begin(), categorical_names.end());
  return names;
}

FeatureTable FeatureTable::SelectRows(
    std::span<const std::size_t> indices) const {
  FeatureTable out;
  out.numeric_names = numeric_names;
  out.categorical_names = categorical_names;
  out.numeric = numeric.SelectRows(indices);
  out.categorical.resize(categorical.size());
  for (std::size_t c = 0; c < categorical.size(); ++c) {
    out.categorical[c].reserve(indices.size());
    for (std::size_t i : indices) out.categorical[c].push_back(categorical[c][i]);
  }
  return out;
}

std::size_t ObliviousTree::LeafIndex(std::span<const double> x) const {
  std::size_t index = 0;
  for (std::size_t level = 0; level < splits.size(); ++level) {
    if (x[splits[level].feature] > splits[level].threshold) {
      index |= std::size_t{1} << level;
    }
  }
  return index;
}

std::vector<double> EncodeOrderedTs(std::span<const int> categories,
                                    std::span<const double> targets,
                                    std::span<const std::size_t> permutation,
                                    double prior_weight, double prior) {
  if (categories.size() != targets.size() ||
      permutation.size() != categories.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "categories, targets and permutation differ in length");
  }
  std::vector<double> encoded(categories.size());
  std::map<int, std::pair<double, double>> running;  // category -> (sum, n)
  for (std::size_t row : permutation) {
    auto& [sum, count] = running[categories[row]];
    encoded[row] = (sum + prior_weight * prior) / (count + prior_weight);
    sum += targets[row];
    count += 1.0;
  }
  return encoded;
}

OrderedTsEncoder OrderedTsEncoder::FitTransform(
    const std::vector<std::vector<int>>& categorical,
    std::span<const int> labels, std::size_t n_classes, double prior_weight,
    int n_permutations, uint64_t seed, Matrix* encoded) {
  const std::size_t n = labels.size();
  OrderedTsEncoder encoder;
  encoder.num_inputs_ = categorical.size();
  encoder.targets_per_input_ = n_classes == 2 ? 1 : n_classes;
  encoder.prior_weight_ = prior_weight;

  // Target component t: indicator of class 1 (binary) or class t.
  const std::size_t per = encoder.targets_per_input_;
  std::vector<std::vector<double>> targets(per, std::vector<double>(n));
  for (std::size_t t = 0; t < per; ++t) {
    const int cls = per == 1 ? 1 : static_cast<int>(t);
    for (std::size_t r = 0; r < n; ++r) targets[t][r] = labels[r] == cls;
  }

  std::vector<std::vector<std::size_t>> perms;
  uint64_t state = seed;
  for (int p = 0; p < n_permutations; ++p) {
    perms.push_back(RandomPermutation(n, SplitMix64(state)));
  }

  if (encoded) *encoded = Matrix(n, encoder.num_inputs_ * per);
  for (std::size_t input = 0; input < encoder.num_inputs_; ++input) {
    const auto& cats = categorical[input];
    if (cats.size() != n) {
      throw Error(ErrorCode::kLengthMismatch,
                  "categorical column length differs from labels");
    }
    for (std::size_t t = 0; t < per; ++t) {
      ColumnStats stats;
      stats.prior =
          n == 0 ? 0.0
                 : std::accumulate(targets[t].begin(), targets[t].end(), 0.0) /
                       static_cast<double>(n);
      for (std::size_t r = 0; r < n; ++r) {
        stats.sum[cats[r]] += targets[t][r];
        stats.count[cats[r]] += 1.0;
      }
      const std::size_t column = input * per + t;
      if (encoded) {
        for (const auto& perm : perms) {
          const auto values = EncodeOrderedTs(cats, targets[t], perm,
                                              prior_weight, stats.prior);
          for (std::size_t r = 0; r < n; ++r) (*encoded)(r, column) += values[r];
        }
        for (std::size_t r = 0; r < n; ++r) {
          (*encoded)(r, column) /= static_cast<double>(perms.size());
        }
      }
      encoder.columns_.push_back(std::move(stats));
    }
  }
  return encoder;
}

double OrderedTsEncoder::EncodeValue(std::size_t column, int category) const {
  const ColumnStats& stats = columns_[column];
  const auto sum_it = stats.sum.find(category);
  const auto count_it = stats.count.find(category);
  const double sum = sum_it == stats.sum.end() ? 0.0 : sum_it->second;
  const double count = count_it == stats.count.end() ? 0.0 : count_it->second;
  return (sum + prior_weight_ * stats.prior) / (count + prior_weight_);
}

Matrix OrderedTsEncoder::Transform(
    const std::vector<std::vector<int>>& categorical) const {
  if (categorical.size() != num_inputs_) {
    throw Error(ErrorCode::kFeatureArityMismatch,
                fmt::format("encoder expects {} categorical columns, got {}",
                            num_inputs_, categorical.size()));
  }
  const std::size_t n = categorical.empty() ? 0 : categorical[0].size();
  Matrix out(n, columns_.size());
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    const auto& cats = categorical[c / targets_per_input_];
    for (std::size_t r = 0; r < n; ++r) out(r, c) = EncodeValue(c, cats[r]);
  }
  return out;
}

OrderedTsEncoder OrderedTsEncoder::FromStats(std::size_t num_inputs,
                                             std::size_t targets_per_input,
                                             double prior_weight,
                                             std::vector<ColumnStats> columns) {
  if (columns.size() != num_inputs * targets_per_input) {
    throw Error(ErrorCode::kInvalidModel, "encoder column count mismatch");
  }
  OrderedTsEncoder encoder;
  encoder.num_inputs_ = num_inputs;
  encoder.targets_per_input_ = targets_per_input;
  encoder.prior_weight_ = prior_weight;
  encoder.columns_ = std::move(columns);
  return encoder;
}

Matrix TreeEnsemble::Encode(const FeatureTable& table) const {
  if (table.numeric.cols() != num_numeric ||
      table.categorical.size() != encoder.num_inputs()) {
    throw Error(ErrorCode::kFeatureArityMismatch,
                fmt::format("model expects {} numeric and {} categorical "
                            "features, got {} and {}",
                            num_numeric, encoder.num_inputs(),
                            table.numeric.cols(), table.categorical.size()));
  }
  const Matrix ts = encoder.Transform(table.categorical);
  Matrix out(table.rows(), num_features());
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < num_numeric; ++c) out(r, c) = table.numeric(r, c);
    for (std::size_t c = 0; c < ts.cols(); ++c) {
      out(r, num_numeric + c) = ts(r, c);
    }
  }
  return out;
}

TreeEnsemble TreeEnsemble::Plain(std::size_t num_features,
                                 std::size_t n_classes, double learning_rate,
                                 std::vector<double> base_score) {
  TreeEnsemble model;
  model.n_classes = n_classes;
  model.loss = base_score.size() == 1 ? LossKind::kBinaryLogistic
                                      : LossKind::kMulticlassSoftmax;
  model.learning_rate = learning_rate;
  model.base_score = std::move(base_score);
  model.num_numeric = num_features;
  for (std::size_t f = 0; f < num_features; ++f) {
    model.feature_names.push_back(fmt::format("f{}", f));
    model.feature_source.push_back(f);
  }
  model.source_names = model.feature_names;
  return model;
}

std::vector<double> QuantileBorders(std::vector<double> values,
                                    int border_count) {
  std::sort(values.begin(), values.end());
  std::vector<double> unique = values;
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  std::vector<double> borders;
  if (unique.size() < 2) return borders;
  const std::size_t max_borders = static_cast<std::size_t>(border_count) - 1;
  if (unique.size() - 1 <= max_borders) {
    for (std::size_t i = 0; i + 1 < unique.size(); ++i) {
      borders.push_back(0.5 * (unique[i] + unique[i + 1]));
    }
    return borders;
  }
  const std::size_t n = values.size();
  for (std::size_t b = 1; b <= max_borders; ++b) {
    const double q = values[b * n / static_cast<std::size_t>(border_count)];
    const auto pos = static_cast<std::size_t>(
        std::lower_bound(unique.begin(), unique.end(), q) - unique.begin());
    if (pos == 0) continue;
    const double border = 0.5 * (unique[pos - 1] + unique[pos]);
    if (borders.empty() || border > borders.back()) borders.push_back(border);
  }
  return borders;
}

TreeEnsemble Fit(const FeatureTable& features, std::span<const int> labels,
                 std::size_t n_classes, const TrainConfig& config,
                 TrainTrace* trace) {
  config.Validate();
  const std::size_t n = features.rows();
  if (labels.size() != n) {
    throw Error(ErrorCode::kLengthMismatch,
                fmt::format("{} labels for {} rows", labels.size(), n));
  }
  if (n < 2) throw Error(ErrorCode::kTooFewRows, "need at least 2 rows");
  if (n_classes < 2) {
    throw Error(ErrorCode::kDegenerateLabels, "need at least 2 classes");
  }
  std::vector<double> class_count(n_classes, 0.0);
  for (int label : labels) {
    if (label < 0 || static_cast<std::size_t>(label) >= n_classes) {
      throw Error(ErrorCode::kLabelOutOfRange,
                  fmt::format("label {} outside [0, {})", label, n_classes));
    }
    class_count[label] += 1.0;
  }
  const auto present =
      std::count_if(class_count.begin(), class_count.end(),
                    [](double c) { return c > 0; });
  if (present < 2) {
    throw Error(ErrorCode::kDegenerateLabels,
                "training labels contain a single class");
  }
  for (double v : features.numeric.data()) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFiniteFeature, "non-finite numeric feature");
    }
  }

  const LossKind loss = config.loss.value_or(
      n_classes == 2 ? LossKind::kBinaryLogistic
                     : LossKind::kMulticlassSoftmax);
  if (loss == LossKind::kBinaryLogistic && n_classes != 2) {
    throw Error(ErrorCode::kInvalidConfig,
                "binary_logistic loss needs exactly 2 classes");
  }

  TreeEnsemble model;
  model.loss = loss;
  model.n_classes = n_classes;
  model.learning_rate = config.learning_rate;
  model.config = config;
  model.config.loss = loss;
  model.num_numeric = features.numeric.cols();
  model.source_names = features.SourceNames();
  for (std::size_t c = 0; c < model.num_numeric; ++c) {
    model.feature_names.push_back(features.numeric_names[c]);
    model.feature_source.push_back(c);
  }

  Matrix ts;
  model.encoder = OrderedTsEncoder::FitTransform(
      features.categorical, labels, n_classes, config.ts_prior_weight,
      config.n_permutations, config.seed, &ts);
  const std::size_t per = model.encoder.targets_per_input();
  for (std::size_t c = 0; c < model.encoder.num_outputs(); ++c) {
    const std::size_t input = c / per;
    const std::string& name = features.categorical_names[input];
    model.feature_names.push_back(
        per == 1 ? name : fmt::format("{}[{}]", name, c % per));
    model.feature_source.push_back(model.num_numeric + input);
  }

  Matrix x(n, model.num_features());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < model.num_numeric; ++c) {
      x(r, c) = features.numeric(r, c);
    }
    for (std::size_t c = 0; c < ts.cols(); ++c) x(r, model.num_numeric + c) = ts(r, c);
  }
  const BinnedFeatures binned = BinFeatures(x, config.border_count);

  // Base score: class-1 log-odds or log class priors. An absent class gets a
  // half-row pseudo-count so the prior stays finite.
  const std::size_t outputs =
      loss == LossKind::kBinaryLogistic ? 1 : n_classes;
  const double total = static_cast<double>(n);
  if (outputs == 1) {
    const double p1 = class_count[1] / total;
    model.base_score = {std::log(p1 / (1.0 - p1))};
  } else {
    for (std::size_t c = 0; c < n_classes; ++c) {
      model.base_score.push_back(
          std::log(std::max(class_count[c], 0.5) / total));
    }
  }

  Matrix margins(n, outputs);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t o = 0; o < outputs; ++o) margins(r, o) = model.base_score[o];
  }
  auto mean_loss = [&] {
    double sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) sum += RowLoss(margins.row(r), labels[r]);
    return sum / total;
  };
  if (trace) trace->train_logloss = {mean_loss()};

  std::vector<double> grad(n), hess(n);
  Matrix proba(n, outputs);
  for (int round = 0; round < config.n_trees; ++round) {
    for (std::size_t r = 0; r < n; ++r) {
      const auto p = MarginsToProba(margins.row(r));
      if (outputs == 1) {
        proba(r, 0) = p[1];
      } else {
        for (std::size_t o = 0; o < outputs; ++o) proba(r, o) = p[o];
      }
    }
    std::vector<ObliviousTree> round_trees;
    for (std::size_t o = 0; o < outputs; ++o) {
      const int positive = outputs == 1 ? 1 : static_cast<int>(o);
      for (std::size_t r = 0; r < n; ++r) {
        const double p = proba(r, o);
        grad[r] = p - (labels[r] == positive ? 1.0 : 0.0);
        hess[r] = p * (1.0 - p);
      }
      ObliviousTree tree =
          BuildTree(binned, grad, hess, config.depth, config.l2_leaf_reg);
      tree.output = o;
      round_trees.push_back(std::move(tree));
    }
    for (const ObliviousTree& tree : round_trees) {
      for (std::size_t r = 0; r < n; ++r) {
        margins(r, tree.output) += config.learning_rate * tree.Evaluate(x.row(r));
      }
    }
    for (auto& tree : round_trees) model.trees.push_back(std::move(tree));
    if (trace) trace->train_logloss.push_back(mean_loss());
  }
  return model;
}

std::vector<double> PredictMargin(const TreeEnsemble& model,
                                  std::span<const double> x) {
  if (x.size() != model.num_features()) {
    throw Error(ErrorCode::kFeatureArityMismatch,
                fmt::format("model has {} features, row has {}",
                            model.num_features(), x.size()));
  }
  std::vector<double> margins = model.base_score;
  for (const ObliviousTree& tree : model.trees) {
    margins[tree.output] += model.learning_rate * tree.Evaluate(x);
  }
  return margins;
}

std::vector<double> MarginsToProba(std::span<const double> margins) {
  if (margins.size() == 1) {
    const double p = Sigmoid(margins[0]);
    return {1.0 - p, p};
  }
  const double top = *std::max_element(margins.begin(), margins.end());
  std::vector<double> p(margins.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < margins.size(); ++i) {
    p[i] = std::exp(margins[i] - top);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

std::vector<double> PredictProba(const TreeEnsemble& model,
                                 std::span<const double> x) {
  return MarginsToProba(PredictMargin(model, x));
}

int PredictClass(const TreeEnsemble& model, std::span<const double> x) {
  const auto p = PredictProba(model, x);
  return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

double LogLoss(const TreeEnsemble& model, const Matrix& encoded,
               std::span<const int> labels) {
  double sum = 0.0;
  for (std::size_t r = 0; r < encoded.rows(); ++r) {
    sum += RowLoss(PredictMargin(model, encoded.row(r)), labels[r]);
  }
  return encoded.rows() ? sum / static_cast<double>(encoded.rows()) : 0.0;
}

std::string ModelToJson(const TreeEnsemble& model) {
  using nlohmann::json;
  json doc;
  doc["format"] = "vaxclust.oblivious_ensemble";
  doc["version"] = kModelFormatVersion;
  const TrainConfig& c = model.config;
  doc["config"] = {{"n_trees", c.n_trees},
                   {"depth", c.depth},
                   {"learning_rate", c.learning_rate},
                   {"l2_leaf_reg", c.l2_leaf_reg},
                   {"ts_prior_weight", c.ts_prior_weight},
                   {"n_permutations", c.n_permutations},
                   {"border_count", c.border_count},
                   {"seed", c.seed},
                   {"loss", LossName(model.loss)}};
  doc["loss"] = LossName(model.loss);
  doc["n_classes"] = model.n_classes;
  doc["learning_rate"] = model.learning_rate;
  doc["base_score"] = model.base_score;
  doc["feature_names"] = model.feature_names;
  doc["feature_source"] = model.feature_source;
  doc["source_names"] = model.source_names;
  doc["num_numeric"] = model.num_numeric;

  json encoder;
  encoder["num_inputs"] = model.encoder.num_inputs();
  encoder["targets_per_input"] = model.encoder.targets_per_input();
  encoder["prior_weight"] = model.encoder.prior_weight();
  json columns = json::array();
  for (const auto& stats : model.encoder.columns()) {
    json categories = json::array();
    for (const auto& [category, count] : stats.count) {
      categories.push_back({{"category", category},
                            {"sum", stats.sum.at(category)},
                            {"count", count}});
    }
    columns.push_back({{"prior", stats.prior}, {"categories", categories}});
  }
  encoder["columns"] = columns;
  doc["encoder"] = encoder;

  json trees = json::array();
  for (const ObliviousTree& tree : model.trees) {
    json splits = json::array();
    for (const Split& s : tree.splits) {
      splits.push_back({{"feature", s.feature}, {"threshold", s.threshold}});
    }
    trees.push_back({{"output", tree.output},
                     {"splits", splits},
                     {"leaf_values", tree.leaf_values},
                     {"leaf_cover", tree.leaf_cover}});
  }
  doc["trees"] = trees;
  return doc.dump(1);
}

TreeEnsemble ModelFromJson(std::string_view text) {
  using nlohmann::json;
  try {
    const json doc = json::parse(text);
    if (doc.at("version").get<int>() != kModelFormatVersion) {
      throw Error(ErrorCode::kInvalidModel,
                  fmt::format("unsupported model version {}",
                              doc.at("version").dump()));
    }
    TreeEnsemble model;
    const json& c = doc.at("config");
    model.config.n_trees = c.at("n_trees");
    model.config.depth = c.at("depth");
    model.config.learning_rate = c.at("learning_rate");
    model.config.l2_leaf_reg = c.at("l2_leaf_reg");
    model.config.ts_prior_weight = c.at("ts_prior_weight");
    model.config.n_permutations = c.at("n_permutations");
    model.config.border_count = c.at("border_count");
    model.config.seed = c.at("seed");
    model.config.loss = ParseLoss(c.at("loss").get<std::string>());
    model.loss = ParseLoss(doc.at("loss").get<std::string>());
    model.n_classes = doc.at("n_classes");
    model.learning_rate = doc.at("learning_rate");
    model.base_score = doc.at("base_score").get<std::vector<double>>();
    model.feature_names =
        doc.at("feature_names").get<std::vector<std::string>>();
    model.feature_source =
        doc.at("feature_source").get<std::vector<std::size_t>>();
    model.source_names = doc.at("source_names").get<std::vector<std::string>>();
    model.num_numeric = doc.at("num_numeric");

    const json& enc = doc.at("encoder");
    std::vector<OrderedTsEncoder::ColumnStats> columns;
    for (const json& col : enc.at("columns")) {
      OrderedTsEncoder::ColumnStats stats;
      stats.prior = col.at("prior");
      for (const json& cat : col.at("categories")) {
        const int category = cat.at("category");
        stats.sum[category] = cat.at("sum");
        stats.count[category] = cat.at("count");
      }
      columns.push_back(std::move(stats));
    }
    model.encoder = OrderedTsEncoder::FromStats(
        enc.at("num_inputs"), enc.at("targets_per_input"),
        enc.at("prior_weight"), std::move(columns));

    for (const json& t : doc.at("trees")) {
      ObliviousTree tree;
      tree.output = t.at("output");
      for (const json& s : t.at("splits")) {
        tree.splits.push_back(Split{s.at("feature"), s.at("threshold")});
      }
      tree.leaf_values = t.at("leaf_values").get<std::vector<double>>();
      tree.leaf_cover = t.at("leaf_cover").get<std::vector<double>>();
      const std::size_t leaves = std::size_t{1} << tree.splits.size();
      if (tree.leaf_values.size() != leaves ||
          (!tree.leaf_cover.empty() && tree.leaf_cover.size() != leaves) ||
          tree.output >= model.base_score.size()) {
        throw Error(ErrorCode::kInvalidModel, "malformed tree");
      }
      for (const Split& s : tree.splits) {
        if (s.feature >= model.feature_names.size()) {
          throw Error(ErrorCode::kInvalidModel, "split feature out of range");
        }
      }
      model.trees.push_back(std::move(tree));
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidModel, e.what());
  }
}

}  // namespace vaxclust
