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

#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "testing.h"
#include "vaxclust/error.h"
#include "vaxclust/rng.h"

namespace vaxclust {
namespace {

using ::testing::DoubleNear;
using ::testing::ElementsAre;
using ::testing::Pointwise;

constexpr double kTol = 1e-12;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIoError;
}

TreeEnsemble SingleTree(std::size_t d, ObliviousTree tree) {
  TreeEnsemble model = TreeEnsemble::Plain(d, 2, 1.0, {0.0});
  model.trees.push_back(std::move(tree));
  return model;
}

TEST(TreeShap, DepthOneHandCase) {
  // E = (1 * 1 + 3 * 3) / 4 = 2.5.
  const TreeEnsemble model =
      SingleTree(2, {.splits = {{0, 0.0}},
                     .leaf_values = {1.0, 3.0},
                     .leaf_cover = {1.0, 3.0}});
  const Attribution a = TreeShap(model, std::vector<double>{1.0, 7.0});
  EXPECT_THAT(a.base, ElementsAre(DoubleNear(2.5, kTol)));
  EXPECT_THAT(a.phi[0], Pointwise(DoubleNear(kTol), {0.5, 0.0}));
  const Attribution b = TreeShap(model, std::vector<double>{-1.0, 7.0});
  EXPECT_THAT(b.phi[0], Pointwise(DoubleNear(kTol), {-1.5, 0.0}));
}

TEST(TreeShap, LearningRateAndBaseScore) {
  TreeEnsemble model = SingleTree(1, {.splits = {{0, 0.0}},
                                      .leaf_values = {1.0, 3.0},
                                      .leaf_cover = {1.0, 3.0}});
  model.learning_rate = 0.5;
  model.base_score = {10.0};
  const Attribution a = TreeShap(model, std::vector<double>{1.0});
  EXPECT_NEAR(a.base[0], 10.0 + 0.5 * 2.5, kTol);
  EXPECT_NEAR(a.phi[0][0], 0.5 * 0.5, kTol);
}

TEST(TreeShap, ConstantModelHasZeroAttribution) {
  TreeEnsemble model = TreeEnsemble::Plain(3, 3, 0.1, {1.0, 2.0, 3.0});
  model.trees.push_back({.leaf_values = {4.0}, .leaf_cover = {9.0}, .output = 1});
  const Attribution a = TreeShap(model, std::vector<double>{1, 2, 3});
  EXPECT_THAT(a.base, Pointwise(DoubleNear(kTol), {1.0, 2.4, 3.0}));
  for (const auto& phi : a.phi) {
    EXPECT_THAT(phi, Pointwise(DoubleNear(kTol), {0.0, 0.0, 0.0}));
  }
}

TEST(TreeShap, SymmetricFeaturesShareCredit) {
  // f(x) = 1 only when both features exceed 0; equal covers.
  const TreeEnsemble model =
      SingleTree(2, {.splits = {{0, 0.0}, {1, 0.0}},
                     .leaf_values = {0.0, 0.0, 0.0, 1.0},
                     .leaf_cover = {5.0, 5.0, 5.0, 5.0}});
  const Attribution a = TreeShap(model, std::vector<double>{1.0, 1.0});
  EXPECT_THAT(a.phi[0], Pointwise(DoubleNear(kTol), {0.375, 0.375}));
}

TEST(TreeShap, RepeatedFeatureOnPath) {
  const TreeEnsemble model =
      SingleTree(2, {.splits = {{0, 0.0}, {0, 1.0}},
                     .leaf_values = {1.0, 2.0, 3.0, 4.0},
                     .leaf_cover = {4.0, 2.0, 0.0, 2.0}});
  const std::vector<double> x = {2.0, 0.0};
  const Attribution a = TreeShap(model, x);
  const Attribution b = BruteForceShapley(model, x);
  EXPECT_THAT(a.phi[0], Pointwise(DoubleNear(kTol), b.phi[0]));
  EXPECT_NEAR(a.phi[0][1], 0.0, kTol);
  EXPECT_NEAR(a.base[0] + a.phi[0][0], 4.0, kTol);
}

TEST(TreeShap, ZeroCoverParentSplitsEvenly) {
  // The right subtree has no cover; its children share 50/50.
  const TreeEnsemble model =
      SingleTree(2, {.splits = {{0, 0.0}, {1, 0.0}},
                     .leaf_values = {1.0, 5.0, 2.0, 7.0},
                     .leaf_cover = {3.0, 0.0, 1.0, 0.0}});
  const std::vector<double> x = {1.0, 1.0};
  const Attribution a = TreeShap(model, x);
  const Attribution b = BruteForceShapley(model, x);
  EXPECT_THAT(a.phi[0], Pointwise(DoubleNear(kTol), b.phi[0]));
  EXPECT_NEAR(a.base[0] + a.phi[0][0] + a.phi[0][1], 7.0, kTol);
}

TEST(TreeShap, RandomModelsMatchBruteForceAndAreLocallyAccurate) {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    testing::RandomModelSpec spec;
    spec.num_features = 1 + rng.Bounded(6);
    spec.n_classes = trial % 3 == 0 ? 3 : 2;
    spec.max_trees = 8;
    const TreeEnsemble model = testing::RandomEnsemble(rng, spec);
    for (int r = 0; r < 5; ++r) {
      const auto x = testing::RandomRow(rng, spec.num_features);
      const Attribution a = TreeShap(model, x);
      const Attribution b = BruteForceShapley(model, x);
      const auto margin = PredictMargin(model, x);
      ASSERT_EQ(a.phi.size(), model.num_outputs());
      for (std::size_t o = 0; o < a.phi.size(); ++o) {
        EXPECT_THAT(a.phi[o], Pointwise(DoubleNear(1e-9), b.phi[o]));
        EXPECT_NEAR(a.base[o], b.base[o], 1e-9);
        const double sum =
            std::accumulate(a.phi[o].begin(), a.phi[o].end(), a.base[o]);
        EXPECT_NEAR(sum, margin[o], 1e-9);
      }
    }
  }
}

TEST(TreeShap, UnusedFeatureIsNullPlayer) {
  Rng rng(22);
  testing::RandomModelSpec spec;
  spec.num_features = 3;
  TreeEnsemble model = testing::RandomEnsemble(rng, spec);
  // Widen the model with a feature no tree splits on.
  TreeEnsemble wide = TreeEnsemble::Plain(4, 2, model.learning_rate,
                                          model.base_score);
  wide.trees = model.trees;
  for (int r = 0; r < 10; ++r) {
    auto x = testing::RandomRow(rng, 4);
    EXPECT_NEAR(TreeShap(wide, x).phi[0][3], 0.0, kTol);
  }
}

TEST(TreeShap, AdditiveAcrossTrees) {
  Rng rng(23);
  testing::RandomModelSpec spec;
  spec.num_features = 4;
  spec.min_trees = 3;
  spec.max_trees = 6;
  const TreeEnsemble model = testing::RandomEnsemble(rng, spec);
  const auto x = testing::RandomRow(rng, 4);
  std::vector<double> summed(4, 0.0);
  for (const ObliviousTree& tree : model.trees) {
    TreeEnsemble one =
        TreeEnsemble::Plain(4, 2, model.learning_rate, {0.0});
    one.trees = {tree};
    const Attribution a = TreeShap(one, x);
    for (std::size_t f = 0; f < 4; ++f) summed[f] += a.phi[0][f];
  }
  EXPECT_THAT(TreeShap(model, x).phi[0], Pointwise(DoubleNear(1e-12), summed));
}

TEST(TreeShap, Errors) {
  TreeEnsemble model = SingleTree(2, {.splits = {{0, 0.0}},
                                      .leaf_values = {1.0, 3.0}});
  EXPECT_EQ(CodeOf([&] { TreeShap(model, std::vector<double>{1, 2}); }),
            ErrorCode::kMissingCover);
  model.trees[0].leaf_cover = {1.0, 1.0};
  EXPECT_EQ(CodeOf([&] { TreeShap(model, std::vector<double>{1}); }),
            ErrorCode::kFeatureArityMismatch);
  const TreeEnsemble wide = TreeEnsemble::Plain(21, 2, 1.0, {0.0});
  EXPECT_EQ(CodeOf([&] {
              BruteForceShapley(wide, std::vector<double>(21, 0.0));
            }),
            ErrorCode::kTooManyFeatures);
}

TEST(AggregateToSources, SumsExpandedColumns) {
  TreeEnsemble model = TreeEnsemble::Plain(2, 3, 1.0, {0.0, 0.0, 0.0});
  model.feature_names = {"x", "cat_0", "cat_1", "cat_2"};
  model.feature_source = {0, 1, 1, 1};
  model.source_names = {"x", "cat"};
  EXPECT_THAT(AggregateToSources(model, std::vector<double>{1, 2, 3, 4}),
              ElementsAre(1.0, 9.0));
}

TEST(GlobalImportance, MeanAbsAndRanking) {
  // Two outputs; feature 0 drives output 0 only.
  TreeEnsemble model = TreeEnsemble::Plain(2, 3, 1.0, {0.0, 0.0, 0.0});
  model.trees.push_back({.splits = {{0, 0.0}},
                         .leaf_values = {-1.0, 1.0},
                         .leaf_cover = {1.0, 1.0},
                         .output = 0});
  Matrix rows(2, 2);
  rows(0, 0) = -1.0;
  rows(1, 0) = 1.0;
  const GlobalImportance g = ComputeGlobalImportance(model, rows);
  EXPECT_THAT(g.feature_names, ElementsAre("f0", "f1"));
  ASSERT_EQ(g.per_output.size(), 3);
  EXPECT_THAT(g.per_output[0], Pointwise(DoubleNear(kTol), {1.0, 0.0}));
  EXPECT_THAT(g.mean_abs, Pointwise(DoubleNear(kTol), {1.0 / 3.0, 0.0}));
  EXPECT_THAT(g.Ranking(), ElementsAre(0, 1));
  EXPECT_EQ(CodeOf([&] { ComputeGlobalImportance(model, Matrix(0, 2)); }),
            ErrorCode::kEmptySample);
}

TEST(GlobalImportance, RankingTiesKeepLowerIndex) {
  GlobalImportance g;
  g.mean_abs = {1.0, 2.0, 1.0, 2.0};
  EXPECT_THAT(g.Ranking(), ElementsAre(1, 3, 0, 2));
}

TEST(GlobalImportance, AverageOfFolds) {
  GlobalImportance a, b;
  a.feature_names = b.feature_names = {"x", "y"};
  a.mean_abs = {1.0, 2.0};
  b.mean_abs = {3.0, 0.0};
  a.per_output = {{1.0, 2.0}};
  b.per_output = {{3.0, 0.0}};
  const std::vector<GlobalImportance> folds = {a, b};
  const GlobalImportance mean = AverageImportance(folds);
  EXPECT_THAT(mean.mean_abs, ElementsAre(2.0, 1.0));
  EXPECT_THAT(mean.per_output[0], ElementsAre(2.0, 1.0));
  EXPECT_THAT(mean.feature_names, ElementsAre("x", "y"));
}

}  // namespace
}  // namespace vaxclust
