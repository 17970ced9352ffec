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

#ifndef VAXCLUST_SHAP_H_
#define VAXCLUST_SHAP_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vaxclust/gbdt.h"
#include "vaxclust/matrix.h"

namespace vaxclust {

// Shapley values in margin space over the model's encoded features.
struct Attribution {
  std::vector<std::vector<double>> phi;  // [output][feature]
  std::vector<double> base;              // expected margin per output
};

// Path-dependent TreeSHAP. Conditional expectations split by training cover;
// a node whose cover is zero splits 50/50. Throws kMissingCover when a tree
// has no leaf_cover and kFeatureArityMismatch on a wrong-length row.
Attribution TreeShap(const TreeEnsemble& model, std::span<const double> x);

// Exhaustive Shapley values over all feature subsets of the same
// path-dependent value function. Throws kTooManyFeatures when the model has
// more than `max_features` features.
Attribution BruteForceShapley(const TreeEnsemble& model,
                              std::span<const double> x,
                              std::size_t max_features = 20);

// Sums encoded-feature attributions onto source features (a categorical
// feature expanded into several target-statistic columns gets their sum).
std::vector<double> AggregateToSources(const TreeEnsemble& model,
                                       std::span<const double> phi);

struct GlobalImportance {
  std::vector<std::string> feature_names;
  // Mean over outputs of the per-output mean |phi|.
  std::vector<double> mean_abs;
  std::vector<std::vector<double>> per_output;  // [output][feature]

  // Feature indices by descending importance; ties keep the lower index.
  std::vector<std::size_t> Ranking() const;

  bool operator==(const GlobalImportance&) const = default;
};

// Mean |phi| over `rows` (encoded feature space), reported per source
// feature. Throws kEmptySample.
GlobalImportance ComputeGlobalImportance(const TreeEnsemble& model,
                                         const Matrix& rows);

// Elementwise mean of per-fold importances.
GlobalImportance AverageImportance(std::span<const GlobalImportance> folds);

}  // namespace vaxclust

#endif  // VAXCLUST_SHAP_H_
