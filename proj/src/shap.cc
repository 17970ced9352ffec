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

#include "vaxclust/shap.h"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "vaxclust/error.h"
#include "vaxclust/numeric.h"

namespace vaxclust {
namespace {

constexpr std::size_t kNoFeature = std::numeric_limits<std::size_t>::max();

// Training cover of every internal node of an oblivious tree. Level l holds
// 2^l nodes indexed by the decision bits of levels 0..l-1.
class NodeCovers {
 public:
  explicit NodeCovers(const ObliviousTree& tree) {
    const std::size_t depth = tree.depth();
    if (tree.leaf_cover.size() != (std::size_t{1} << depth)) {
      throw Error(ErrorCode::kMissingCover,
                  "tree has no per-leaf training cover");
    }
    covers_.resize(depth + 1);
    covers_[depth] = tree.leaf_cover;
    for (std::size_t level = depth; level-- > 0;) {
      const std::size_t width = std::size_t{1} << level;
      covers_[level].assign(width, 0.0);
      for (std::size_t prefix = 0; prefix < width; ++prefix) {
        covers_[level][prefix] = covers_[level + 1][prefix] +
                                 covers_[level + 1][prefix | width];
      }
    }
  }

  // Share of node (level, prefix) that goes to the `bit` side.
  double Fraction(std::size_t level, std::size_t prefix, bool bit) const {
    const double parent = covers_[level][prefix];
    if (parent <= 0.0) return 0.5;
    const std::size_t child = prefix | (std::size_t{bit} << level);
    return covers_[level + 1][child] / parent;
  }

 private:
  std::vector<std::vector<double>> covers_;
};

// Expected leaf value under the cover measure, following x on features in
// `known` (nullptr: no feature is known).
double ConditionalExpectation(const ObliviousTree& tree,
                              const NodeCovers& covers,
                              std::span<const double> x,
                              const std::vector<bool>* known,
                              std::size_t level, std::size_t prefix) {
  if (level == tree.depth()) return tree.leaf_values[prefix];
  const Split& split = tree.splits[level];
  const std::size_t right = prefix | (std::size_t{1} << level);
  if (known && (*known)[split.feature]) {
    const bool bit = x[split.feature] > split.threshold;
    return ConditionalExpectation(tree, covers, x, known, level + 1,
                                  bit ? right : prefix);
  }
  double value = 0.0;
  const double left_share = covers.Fraction(level, prefix, false);
  const double right_share = covers.Fraction(level, prefix, true);
  if (left_share != 0.0) {
    value += left_share * ConditionalExpectation(tree, covers, x, known,
                                                 level + 1, prefix);
  }
  if (right_share != 0.0) {
    value += right_share * ConditionalExpectation(tree, covers, x, known,
                                                  level + 1, right);
  }
  return value;
}

struct PathElement {
  std::size_t feature;
  double zero_fraction;  // share of the path kept when the feature is unknown
  double one_fraction;   // 1 if x follows this branch, else 0
  double weight;
};

using Path = std::vector<PathElement>;

void ExtendPath(Path& path, double zero_fraction, double one_fraction,
                std::size_t feature) {
  const std::size_t n = path.size();
  path.push_back({feature, zero_fraction, one_fraction, n == 0 ? 1.0 : 0.0});
  for (std::size_t i = n; i-- > 0;) {
    path[i + 1].weight += one_fraction * path[i].weight *
                          static_cast<double>(i + 1) /
                          static_cast<double>(n + 1);
    path[i].weight = zero_fraction * path[i].weight *
                     static_cast<double>(n - i) / static_cast<double>(n + 1);
  }
}

void UnwindPath(Path& path, std::size_t index) {
  const std::size_t n = path.size() - 1;
  const double one = path[index].one_fraction;
  const double zero = path[index].zero_fraction;
  double carry = path[n].weight;
  for (std::size_t j = n; j-- > 0;) {
    if (one != 0.0) {
      const double saved = path[j].weight;
      path[j].weight = carry * static_cast<double>(n + 1) /
                       (static_cast<double>(j + 1) * one);
      carry = saved - path[j].weight * zero * static_cast<double>(n - j) /
                          static_cast<double>(n + 1);
    } else {
      path[j].weight = path[j].weight * static_cast<double>(n + 1) /
                       (zero * static_cast<double>(n - j));
    }
  }
  for (std::size_t j = index; j < n; ++j) {
    path[j].feature = path[j + 1].feature;
    path[j].zero_fraction = path[j + 1].zero_fraction;
    path[j].one_fraction = path[j + 1].one_fraction;
  }
  path.pop_back();
}

// Total weight of the path with element `index` removed.
double UnwoundPathSum(const Path& path, std::size_t index) {
  const std::size_t n = path.size() - 1;
  const double one = path[index].one_fraction;
  const double zero = path[index].zero_fraction;
  double total = 0.0;
  if (one != 0.0) {
    double carry = path[n].weight;
    for (std::size_t j = n; j-- > 0;) {
      const double tmp = carry / (static_cast<double>(j + 1) * one);
      total += tmp;
      carry = path[j].weight - tmp * zero * static_cast<double>(n - j);
    }
  } else {
    for (std::size_t j = n; j-- > 0;) {
      total += path[j].weight / (zero * static_cast<double>(n - j));
    }
  }
  return total * static_cast<double>(n + 1);
}

void RecurseTree(const ObliviousTree& tree, const NodeCovers& covers,
                 std::span<const double> x, double scale,
                 std::vector<double>& phi, std::size_t level,
                 std::size_t prefix, Path path, double zero_fraction,
                 double one_fraction, std::size_t feature) {
  ExtendPath(path, zero_fraction, one_fraction, feature);

  if (level == tree.depth()) {
    const double value = scale * tree.leaf_values[prefix];
    for (std::size_t i = 1; i < path.size(); ++i) {
      const double w = UnwoundPathSum(path, i);
      phi[path[i].feature] +=
          w * (path[i].one_fraction - path[i].zero_fraction) * value;
    }
    return;
  }

  const Split& split = tree.splits[level];
  const bool hot_bit = x[split.feature] > split.threshold;
  double incoming_zero = 1.0;
  double incoming_one = 1.0;
  // A feature split on earlier in the path is merged into one element.
  for (std::size_t k = 1; k < path.size(); ++k) {
    if (path[k].feature == split.feature) {
      incoming_zero = path[k].zero_fraction;
      incoming_one = path[k].one_fraction;
      UnwindPath(path, k);
      break;
    }
  }

  const std::size_t hot = prefix | (std::size_t{hot_bit} << level);
  const std::size_t cold = prefix | (std::size_t{!hot_bit} << level);
  const double hot_zero =
      incoming_zero * covers.Fraction(level, prefix, hot_bit);
  const double cold_zero =
      incoming_zero * covers.Fraction(level, prefix, !hot_bit);
  // Branches with both fractions zero carry no weight.
  if (hot_zero != 0.0 || incoming_one != 0.0) {
    RecurseTree(tree, covers, x, scale, phi, level + 1, hot, path, hot_zero,
                incoming_one, split.feature);
  }
  if (cold_zero != 0.0) {
    RecurseTree(tree, covers, x, scale, phi, level + 1, cold, std::move(path),
                cold_zero, 0.0, split.feature);
  }
}

void CheckRow(const TreeEnsemble& model, std::span<const double> x) {
  if (x.size() != model.num_features()) {
    throw Error(ErrorCode::kFeatureArityMismatch,
                fmt::format("model has {} features, row has {}",
                            model.num_features(), x.size()));
  }
}

Attribution EmptyAttribution(const TreeEnsemble& model) {
  Attribution out;
  out.base = model.base_score;
  out.phi.assign(model.num_outputs(),
                 std::vector<double>(model.num_features(), 0.0));
  return out;
}

}  // namespace

Attribution TreeShap(const TreeEnsemble& model, std::span<const double> x) {
  CheckRow(model, x);
  Attribution out = EmptyAttribution(model);
  for (const ObliviousTree& tree : model.trees) {
    const NodeCovers covers(tree);
    out.base[tree.output] +=
        model.learning_rate *
        ConditionalExpectation(tree, covers, x, nullptr, 0, 0);
    Path path;
    path.reserve(tree.depth() + 2);
    RecurseTree(tree, covers, x, model.learning_rate, out.phi[tree.output], 0,
                0, std::move(path), 1.0, 1.0, kNoFeature);
  }
  return out;
}

Attribution BruteForceShapley(const TreeEnsemble& model,
                              std::span<const double> x,
                              std::size_t max_features) {
  CheckRow(model, x);
  const std::size_t d = model.num_features();
  if (d > max_features || d > 20) {
    throw Error(ErrorCode::kTooManyFeatures,
                fmt::format("{} features exceeds the enumeration limit {}", d,
                            std::min<std::size_t>(max_features, 20)));
  }
  Attribution out = EmptyAttribution(model);
  const std::size_t num_subsets = std::size_t{1} << d;

  // value[o][mask]: expected margin of output o with features in mask known.
  std::vector<std::vector<double>> value(
      model.num_outputs(), std::vector<double>(num_subsets, 0.0));
  std::vector<NodeCovers> covers;
  covers.reserve(model.trees.size());
  for (const ObliviousTree& tree : model.trees) covers.emplace_back(tree);
  std::vector<bool> known(d);
  for (std::size_t mask = 0; mask < num_subsets; ++mask) {
    for (std::size_t f = 0; f < d; ++f) known[f] = (mask >> f) & 1;
    for (std::size_t t = 0; t < model.trees.size(); ++t) {
      const ObliviousTree& tree = model.trees[t];
      value[tree.output][mask] +=
          model.learning_rate *
          ConditionalExpectation(tree, covers[t], x, &known, 0, 0);
    }
  }

  // weight[s] = s! (d - s - 1)! / d! = 1 / (d * C(d - 1, s)).
  std::vector<double> weight(d);
  for (std::size_t s = 0; s < d; ++s) {
    double binom = 1.0;
    for (std::size_t i = 1; i <= s; ++i) {
      binom = binom * static_cast<double>(d - 1 - s + i) /
              static_cast<double>(i);
    }
    weight[s] = 1.0 / (static_cast<double>(d) * binom);
  }

  for (std::size_t o = 0; o < model.num_outputs(); ++o) {
    out.base[o] += value[o][0];
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t bit = std::size_t{1} << j;
      double phi = 0.0;
      for (std::size_t mask = 0; mask < num_subsets; ++mask) {
        if (mask & bit) continue;
        const auto size = static_cast<std::size_t>(std::popcount(mask));
        phi += weight[size] * (value[o][mask | bit] - value[o][mask]);
      }
      out.phi[o][j] = phi;
    }
  }
  return out;
}

std::vector<double> AggregateToSources(const TreeEnsemble& model,
                                       std::span<const double> phi) {
  std::vector<double> out(model.source_names.size(), 0.0);
  for (std::size_t f = 0; f < phi.size(); ++f) {
    out[model.feature_source[f]] += phi[f];
  }
  return out;
}

std::vector<std::size_t> GlobalImportance::Ranking() const {
  std::vector<std::size_t> order(mean_abs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return mean_abs[a] > mean_abs[b];
                   });
  return order;
}

GlobalImportance ComputeGlobalImportance(const TreeEnsemble& model,
                                         const Matrix& rows) {
  if (rows.rows() == 0) {
    throw Error(ErrorCode::kEmptySample, "no rows to attribute");
  }
  const std::size_t sources = model.source_names.size();
  const std::size_t outputs = model.num_outputs();
  // abs_phi[o][f] collects |phi| over rows.
  std::vector<std::vector<std::vector<double>>> abs_phi(
      outputs, std::vector<std::vector<double>>(sources));
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    const Attribution attribution = TreeShap(model, rows.row(r));
    for (std::size_t o = 0; o < outputs; ++o) {
      const auto grouped = AggregateToSources(model, attribution.phi[o]);
      for (std::size_t f = 0; f < sources; ++f) {
        abs_phi[o][f].push_back(std::abs(grouped[f]));
      }
    }
  }
  GlobalImportance importance;
  importance.feature_names = model.source_names;
  importance.per_output.assign(outputs, std::vector<double>(sources));
  importance.mean_abs.assign(sources, 0.0);
  for (std::size_t f = 0; f < sources; ++f) {
    std::vector<double> over_outputs;
    for (std::size_t o = 0; o < outputs; ++o) {
      importance.per_output[o][f] = OrderInvariantMean(abs_phi[o][f]);
      over_outputs.push_back(importance.per_output[o][f]);
    }
    importance.mean_abs[f] = StableMean(over_outputs);
  }
  return importance;
}

GlobalImportance AverageImportance(std::span<const GlobalImportance> folds) {
  if (folds.empty()) {
    throw Error(ErrorCode::kEmptySample, "no fold importances to average");
  }
  GlobalImportance out;
  out.feature_names = folds.front().feature_names;
  const std::size_t sources = out.feature_names.size();
  const std::size_t outputs = folds.front().per_output.size();
  out.mean_abs.assign(sources, 0.0);
  out.per_output.assign(outputs, std::vector<double>(sources, 0.0));
  for (std::size_t f = 0; f < sources; ++f) {
    std::vector<double> values;
    for (const auto& fold : folds) values.push_back(fold.mean_abs[f]);
    out.mean_abs[f] = OrderInvariantMean(values);
    for (std::size_t o = 0; o < outputs; ++o) {
      std::vector<double> per;
      for (const auto& fold : folds) per.push_back(fold.per_output[o][f]);
      out.per_output[o][f] = OrderInvariantMean(per);
    }
  }
  return out;
}

}  // namespace vaxclust
