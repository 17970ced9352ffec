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

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "vaxclust/error.h"
#include "vaxclust/rng.h"

namespace vaxclust {
namespace {

using ::testing::DoubleNear;
using ::testing::ElementsAre;
using ::testing::Pointwise;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIoError;
}

// Two numeric features; the class is decided by which of a few bands the
// first feature falls in. One noise categorical column.
struct Problem {
  FeatureTable features;
  std::vector<int> labels;
};

Problem BandProblem(std::size_t n, std::size_t n_classes, uint64_t seed) {
  Rng rng(seed);
  Problem p;
  p.features.numeric_names = {"x", "noise"};
  p.features.numeric = Matrix(n, 2);
  p.features.categorical_names = {"cat"};
  p.features.categorical.assign(1, std::vector<int>(n));
  for (std::size_t r = 0; r < n; ++r) {
    // Few distinct x values, so every midpoint is a candidate border and
    // the classes are separable by thresholds on x.
    const int label = static_cast<int>(rng.Bounded(n_classes));
    const double x = label + 0.2 * static_cast<double>(rng.Bounded(4));
    p.features.numeric(r, 0) = x;
    p.features.numeric(r, 1) = rng.Normal();
    p.features.categorical[0][r] = static_cast<int>(rng.Bounded(4));
    p.labels.push_back(label);
  }
  return p;
}

TrainConfig SmallConfig() {
  TrainConfig config;
  config.n_trees = 60;
  config.depth = 3;
  config.learning_rate = 0.3;
  return config;
}

double TrainAccuracy(const TreeEnsemble& model, const Problem& p) {
  const Matrix encoded = model.Encode(p.features);
  std::size_t correct = 0;
  for (std::size_t r = 0; r < encoded.rows(); ++r) {
    correct += PredictClass(model, encoded.row(r)) == p.labels[r];
  }
  return static_cast<double>(correct) / static_cast<double>(encoded.rows());
}

TEST(OrderedTs, HandCase) {
  const std::vector<int> cats = {0, 0, 0};
  const std::vector<double> targets = {1, 0, 1};
  const std::vector<std::size_t> identity = {0, 1, 2};
  EXPECT_THAT(EncodeOrderedTs(cats, targets, identity, 1.0, 0.5),
              Pointwise(DoubleNear(1e-15), {0.5, 0.75, 0.5}));
  // Row 2 first, then rows 0 and 1.
  const std::vector<std::size_t> perm = {2, 0, 1};
  EXPECT_THAT(EncodeOrderedTs(cats, targets, perm, 1.0, 0.5),
              Pointwise(DoubleNear(1e-15), {0.75, 2.5 / 3.0, 0.5}));
}

TEST(OrderedTs, CategoriesAreIndependent) {
  const std::vector<int> cats = {0, 1, 0, 1};
  const std::vector<double> targets = {1, 1, 0, 0};
  const std::vector<std::size_t> identity = {0, 1, 2, 3};
  EXPECT_THAT(EncodeOrderedTs(cats, targets, identity, 2.0, 0.5),
              Pointwise(DoubleNear(1e-15), {0.5, 0.5, 2.0 / 3.0, 2.0 / 3.0}));
}

TEST(OrderedTs, OwnTargetNeverLeaks) {
  Rng rng(5);
  const std::size_t n = 40;
  std::vector<int> cats(n);
  std::vector<double> targets(n);
  for (std::size_t r = 0; r < n; ++r) {
    cats[r] = static_cast<int>(rng.Bounded(3));
    targets[r] = static_cast<double>(rng.Bounded(2));
  }
  const auto perm = RandomPermutation(n, 8);
  const auto base = EncodeOrderedTs(cats, targets, perm, 1.0, 0.4);
  for (std::size_t r = 0; r < n; ++r) {
    auto flipped = targets;
    flipped[r] = 1.0 - flipped[r];
    EXPECT_EQ(EncodeOrderedTs(cats, flipped, perm, 1.0, 0.4)[r], base[r]);
  }
}

TEST(OrderedTsEncoder, InferenceUsesFullStatisticsAndPrior) {
  const std::vector<std::vector<int>> cats = {{0, 0, 1, 1}};
  const std::vector<int> labels = {1, 1, 0, 1};
  Matrix encoded;
  const OrderedTsEncoder encoder =
      OrderedTsEncoder::FitTransform(cats, labels, 2, 1.0, 1, 0, &encoded);
  EXPECT_EQ(encoded.rows(), 4);
  EXPECT_EQ(encoder.num_outputs(), 1);
  // prior = 3/4; category 0: (2 + 0.75) / 3.
  EXPECT_DOUBLE_EQ(encoder.EncodeValue(0, 0), 2.75 / 3.0);
  EXPECT_DOUBLE_EQ(encoder.EncodeValue(0, 1), 1.75 / 3.0);
  EXPECT_DOUBLE_EQ(encoder.EncodeValue(0, 9), 0.75);
  const Matrix inference = encoder.Transform({{9, 0}});
  EXPECT_DOUBLE_EQ(inference(0, 0), 0.75);

  const OrderedTsEncoder multi = OrderedTsEncoder::FitTransform(
      cats, std::vector<int>{0, 1, 2, 2}, 3, 1.0, 2, 0, &encoded);
  EXPECT_EQ(multi.num_outputs(), 3);
  EXPECT_EQ(encoded.cols(), 3);
}

TEST(QuantileBorders, Midpoints) {
  EXPECT_THAT(QuantileBorders({3, 1, 2, 2}, 32), ElementsAre(1.5, 2.5));
  EXPECT_TRUE(QuantileBorders({4, 4, 4}, 32).empty());
  std::vector<double> many(1000);
  std::iota(many.begin(), many.end(), 0.0);
  const auto borders = QuantileBorders(many, 8);
  EXPECT_LE(borders.size(), 7);
  EXPECT_TRUE(std::is_sorted(borders.begin(), borders.end()));
}

TEST(MarginsToProba, LogisticAndSoftmax) {
  EXPECT_THAT(MarginsToProba(std::vector<double>{0.0}), ElementsAre(0.5, 0.5));
  const auto p = MarginsToProba(std::vector<double>{1.0, 1.0, 1.0 + std::log(2.0)});
  EXPECT_THAT(p, Pointwise(DoubleNear(1e-12), {0.25, 0.25, 0.5}));
}

TEST(PredictClass, TiesGoToLowerClass) {
  TreeEnsemble model = TreeEnsemble::Plain(1, 3, 1.0, {0.0, 0.0, 0.0});
  const std::vector<double> x = {0.0};
  EXPECT_EQ(PredictClass(model, x), 0);
  EXPECT_EQ(CodeOf([&] { PredictMargin(model, std::vector<double>{}); }),
            ErrorCode::kFeatureArityMismatch);
}

TEST(ObliviousTree, LeafIndexBits) {
  ObliviousTree tree;
  tree.splits = {{0, 0.0}, {1, 5.0}};
  tree.leaf_values = {10, 11, 12, 13};
  EXPECT_EQ(tree.LeafIndex(std::vector<double>{-1, 0}), 0);
  EXPECT_EQ(tree.LeafIndex(std::vector<double>{1, 0}), 1);
  EXPECT_EQ(tree.LeafIndex(std::vector<double>{-1, 6}), 2);
  EXPECT_EQ(tree.Evaluate(std::vector<double>{1, 6}), 13);
  // Ties go left.
  EXPECT_EQ(tree.LeafIndex(std::vector<double>{0, 5}), 0);
}

TEST(Fit, SeparableBinaryReachesPerfectAccuracy) {
  const Problem p = BandProblem(200, 2, 1);
  TrainTrace trace;
  const TreeEnsemble model = Fit(p.features, p.labels, 2, SmallConfig(), &trace);
  EXPECT_EQ(model.loss, LossKind::kBinaryLogistic);
  EXPECT_EQ(model.num_outputs(), 1);
  EXPECT_EQ(model.trees.size(), 60);
  EXPECT_EQ(TrainAccuracy(model, p), 1.0);
  EXPECT_THAT(model.source_names, ElementsAre("x", "noise", "cat"));
  EXPECT_EQ(model.num_features(), 3);
}

TEST(Fit, SeparableMulticlassReachesPerfectAccuracy) {
  const Problem p = BandProblem(300, 3, 2);
  const TreeEnsemble model = Fit(p.features, p.labels, 3, SmallConfig());
  EXPECT_EQ(model.loss, LossKind::kMulticlassSoftmax);
  EXPECT_EQ(model.num_outputs(), 3);
  // One categorical column expands to three encoded columns.
  EXPECT_EQ(model.num_features(), 5);
  EXPECT_EQ(TrainAccuracy(model, p), 1.0);
}

TEST(Fit, TrainingLossNonIncreasing) {
  for (std::size_t k : {2, 3}) {
    const Problem p = BandProblem(150, k, 3);
    TrainConfig config = SmallConfig();
    config.n_trees = 40;
    TrainTrace trace;
    const TreeEnsemble model = Fit(p.features, p.labels, k, config, &trace);
    ASSERT_EQ(trace.train_logloss.size(), 41);
    for (std::size_t i = 1; i < trace.train_logloss.size(); ++i) {
      EXPECT_LE(trace.train_logloss[i], trace.train_logloss[i - 1] + 1e-12);
    }
  }
}

TEST(Fit, LeafCoverCountsTrainingRows) {
  const Problem p = BandProblem(120, 2, 4);
  const TreeEnsemble model = Fit(p.features, p.labels, 2, SmallConfig());
  for (const ObliviousTree& tree : model.trees) {
    EXPECT_EQ(tree.leaf_values.size(), std::size_t{1} << tree.depth());
    EXPECT_DOUBLE_EQ(
        std::accumulate(tree.leaf_cover.begin(), tree.leaf_cover.end(), 0.0),
        120.0);
  }
}

TEST(Fit, DeterministicForSeed) {
  const Problem p = BandProblem(100, 3, 5);
  const TreeEnsemble a = Fit(p.features, p.labels, 3, SmallConfig());
  const TreeEnsemble b = Fit(p.features, p.labels, 3, SmallConfig());
  EXPECT_EQ(ModelToJson(a), ModelToJson(b));
}

TEST(Fit, Errors) {
  Problem p = BandProblem(50, 2, 6);
  const TrainConfig config = SmallConfig();
  EXPECT_EQ(CodeOf([&] {
              Fit(p.features, std::vector<int>(50, 1), 2, config);
            }),
            ErrorCode::kDegenerateLabels);
  EXPECT_EQ(CodeOf([&] {
              auto labels = p.labels;
              labels[0] = 2;
              Fit(p.features, labels, 2, config);
            }),
            ErrorCode::kLabelOutOfRange);
  EXPECT_EQ(CodeOf([&] {
              TrainConfig bad = config;
              bad.n_trees = 0;
              Fit(p.features, p.labels, 2, bad);
            }),
            ErrorCode::kInvalidConfig);
  EXPECT_EQ(CodeOf([&] {
              TrainConfig bad = config;
              bad.learning_rate = -1;
              bad.Validate();
            }),
            ErrorCode::kInvalidConfig);
  p.features.numeric(3, 1) = std::numeric_limits<double>::infinity();
  EXPECT_EQ(CodeOf([&] { Fit(p.features, p.labels, 2, config); }),
            ErrorCode::kNonFiniteFeature);
}

TEST(ModelJson, LosslessRoundTrip) {
  const Problem p = BandProblem(100, 3, 7);
  TrainConfig config = SmallConfig();
  config.n_trees = 10;
  const TreeEnsemble model = Fit(p.features, p.labels, 3, config);
  const std::string json = ModelToJson(model);
  const TreeEnsemble back = ModelFromJson(json);
  EXPECT_EQ(ModelToJson(back), json);
  EXPECT_EQ(back.trees, model.trees);
  EXPECT_EQ(back.base_score, model.base_score);
  EXPECT_EQ(back.encoder, model.encoder);
  const Matrix encoded = model.Encode(p.features);
  EXPECT_EQ(back.Encode(p.features), encoded);
  for (std::size_t r = 0; r < encoded.rows(); ++r) {
    EXPECT_EQ(PredictMargin(back, encoded.row(r)),
              PredictMargin(model, encoded.row(r)));
  }
  EXPECT_EQ(CodeOf([] { ModelFromJson("{\"not\": \"a model\"}"); }),
            ErrorCode::kInvalidModel);
  EXPECT_EQ(CodeOf([] { ModelFromJson("{"); }), ErrorCode::kInvalidModel);
}

TEST(LogLoss, ConstantModel) {
  TreeEnsemble model = TreeEnsemble::Plain(1, 2, 1.0, {0.0});
  Matrix rows(2, 1);
  EXPECT_DOUBLE_EQ(LogLoss(model, rows, std::vector<int>{0, 1}), std::log(2.0));
}

}  // namespace
}  // namespace vaxclust
