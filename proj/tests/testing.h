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

// Independent reference implementations and random-input generators shared
// by the unit and acceptance tests.

#ifndef VAXCLUST_TESTS_TESTING_H_
#define VAXCLUST_TESTS_TESTING_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "vaxclust/eval.h"
#include "vaxclust/gbdt.h"
#include "vaxclust/matrix.h"
#include "vaxclust/rng.h"

namespace vaxclust::testing {

// Ward merge heights found by brute force: at every step each pair of
// current clusters is scored by the increase in total within-cluster sum of
// squares, recomputed from the member points. Heights are
// sqrt(2 * increase), in merge order.
std::vector<double> ExhaustiveWardHeights(const Matrix& points);

// Uniform random points in [-scale, scale]^dims.
Matrix RandomPoints(Rng& rng, std::size_t n, std::size_t dims,
                    double scale = 10.0);

struct RandomModelSpec {
  std::size_t num_features = 4;
  std::size_t n_classes = 2;  // 2 gives one output
  std::size_t min_trees = 1;
  std::size_t max_trees = 50;
  std::size_t max_depth = 4;
  // Share of leaves whose cover is zero.
  double zero_cover_rate = 0.1;
};

// Oblivious ensemble with random splits (features may repeat within a
// tree), thresholds, leaf values and integer leaf covers.
TreeEnsemble RandomEnsemble(Rng& rng, const RandomModelSpec& spec);

// Standard normal row of length d.
std::vector<double> RandomRow(Rng& rng, std::size_t d);

// Macro metrics from one-vs-rest counts with F1 = 2TP / (2TP + FP + FN).
struct ReferenceMetrics {
  double accuracy = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
};
ReferenceMetrics ReferenceMacroMetrics(const Confusion& confusion);

// U of sample a by pair counting (ties count one half).
double PairCountU(std::span<const double> a, std::span<const double> b);

// Two-sided p by enumerating every way to split the pooled sample into
// groups of |a| and |b|: the share of splits whose pair-count U lies at
// least as far from n_a * n_b / 2 as the observed one.
double EnumeratedMannWhitneyP(std::span<const double> a,
                              std::span<const double> b);

// Fresh empty directory under the system temp dir.
std::filesystem::path MakeTempDir(const std::string& prefix);

// Relative path -> file bytes for every regular file under `root`.
std::map<std::string, std::string> ReadTree(const std::filesystem::path& root);

}  // namespace vaxclust::testing

#endif  // VAXCLUST_TESTS_TESTING_H_
