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

#include <algorithm>
#include <functional>
#include <map>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "testing.h"
#include "vaxclust/error.h"
#include "vaxclust/rng.h"
#include "vaxclust/synth.h"

namespace vaxclust {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIoError;
}

TEST(MacroMetrics, HandCase) {
  const FoldMetrics m = MacroMetrics({{1, 1}, {0, 2}});
  EXPECT_DOUBLE_EQ(m.accuracy, 0.75);
  EXPECT_NEAR(m.macro_precision, 0.8333333333333334, 1e-12);
  EXPECT_NEAR(m.macro_recall, 0.75, 1e-12);
  EXPECT_NEAR(m.macro_f1, 0.7333333333333334, 1e-12);
  EXPECT_EQ(m.per_class[0].support, 2);
  EXPECT_DOUBLE_EQ(m.per_class[0].recall, 0.5);
  EXPECT_EQ(m.zero_denominators, 0);
  // Weighted by support 2 and 2.
  EXPECT_NEAR(m.weighted_precision, 0.8333333333333334, 1e-12);
}

TEST(MacroMetrics, ZeroDenominatorsCountedAndPresentOnly) {
  const Confusion c = {{2, 0}, {0, 0}};
  const FoldMetrics all = MacroMetrics(c);
  EXPECT_EQ(all.zero_denominators, 3);
  EXPECT_DOUBLE_EQ(all.macro_precision, 0.5);
  EXPECT_THAT(all.classes, ElementsAre(0, 1));
  const FoldMetrics present = MacroMetrics(c, true);
  EXPECT_DOUBLE_EQ(present.macro_precision, 1.0);
  EXPECT_DOUBLE_EQ(present.macro_f1, 1.0);
  EXPECT_THAT(present.classes, ElementsAre(0));
  EXPECT_EQ(CodeOf([] { MacroMetrics({{0, 0}, {0, 0}}); }),
            ErrorCode::kEmptyMatrix);
  EXPECT_EQ(CodeOf([] { MacroMetrics({}); }), ErrorCode::kEmptyMatrix);
}

TEST(MacroMetrics, MatchesReferenceImplementation) {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 2 + rng.Bounded(5);
    Confusion c(k, std::vector<std::size_t>(k));
    for (auto& row : c) {
      for (auto& v : row) v = rng.Bounded(3) == 0 ? 0 : rng.Bounded(20);
    }
    c[0][0] += 1;
    const FoldMetrics m = MacroMetrics(c);
    const testing::ReferenceMetrics ref = testing::ReferenceMacroMetrics(c);
    EXPECT_NEAR(m.accuracy, ref.accuracy, 1e-12);
    EXPECT_NEAR(m.macro_precision, ref.macro_precision, 1e-12);
    EXPECT_NEAR(m.macro_recall, ref.macro_recall, 1e-12);
    EXPECT_NEAR(m.macro_f1, ref.macro_f1, 1e-12);
  }
}

TEST(ConfusionMatrix, CountsAndErrors) {
  const std::vector<int> truth = {0, 0, 1, 2};
  const std::vector<int> pred = {0, 1, 1, 0};
  EXPECT_EQ(ConfusionMatrix(truth, pred, 3),
            (Confusion{{1, 1, 0}, {0, 1, 0}, {1, 0, 0}}));
  EXPECT_EQ(CodeOf([&] { ConfusionMatrix(truth, pred, 2); }),
            ErrorCode::kLabelOutOfRange);
  EXPECT_EQ(CodeOf([&] {
              ConfusionMatrix(truth, std::vector<int>{0}, 3);
            }),
            ErrorCode::kLengthMismatch);
}

TEST(StratifiedFolds, TenRowsTwoClassesFiveFolds) {
  const std::vector<int> labels = {0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const FoldPlan plan = StratifiedFolds(labels, 5, seed);
    for (std::size_t f = 0; f < 5; ++f) {
      const auto rows = plan.TestRows(f);
      ASSERT_EQ(rows.size(), 2);
      EXPECT_NE(labels[rows[0]], labels[rows[1]]);
    }
  }
}

TEST(StratifiedFolds, BalanceLawsOverSeeds) {
  Rng rng(32);
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 20 + rng.Bounded(130);
    const std::size_t classes = 2 + rng.Bounded(5);
    const std::size_t k = 2 + rng.Bounded(5);
    std::vector<int> labels(n);
    for (auto& l : labels) l = static_cast<int>(rng.Bounded(classes));
    const FoldPlan plan = StratifiedFolds(labels, k, seed);
    ASSERT_EQ(plan.assignments.size(), n);

    std::vector<std::size_t> sizes(k);
    std::map<int, std::vector<std::size_t>> per_class;
    for (std::size_t r = 0; r < n; ++r) {
      ASSERT_GE(plan.assignments[r], 0);
      ASSERT_LT(plan.assignments[r], static_cast<int>(k));
      ++sizes[plan.assignments[r]];
      auto& counts = per_class[labels[r]];
      counts.resize(k);
      ++counts[plan.assignments[r]];
    }
    EXPECT_LE(*std::max_element(sizes.begin(), sizes.end()) -
                  *std::min_element(sizes.begin(), sizes.end()),
              1);
    for (const auto& [label, counts] : per_class) {
      EXPECT_LE(*std::max_element(counts.begin(), counts.end()) -
                    *std::min_element(counts.begin(), counts.end()),
                1);
    }
    for (std::size_t f = 0; f < k; ++f) {
      auto rows = plan.TestRows(f);
      const auto train = plan.TrainRows(f);
      rows.insert(rows.end(), train.begin(), train.end());
      std::sort(rows.begin(), rows.end());
      ASSERT_EQ(rows.size(), n);
      for (std::size_t r = 0; r < n; ++r) EXPECT_EQ(rows[r], r);
    }
    EXPECT_EQ(StratifiedFolds(labels, k, seed).assignments, plan.assignments);
  }
}

TEST(StratifiedFolds, Errors) {
  const std::vector<int> labels = {0, 1, 0};
  EXPECT_EQ(CodeOf([&] { StratifiedFolds(labels, 1, 0); }),
            ErrorCode::kKFoldsOutOfRange);
  EXPECT_EQ(CodeOf([&] { StratifiedFolds(labels, 4, 0); }),
            ErrorCode::kTooFewRows);
  EXPECT_EQ(CodeOf([&] { StratifiedFolds(std::vector<int>{0, -1}, 2, 0); }),
            ErrorCode::kLabelOutOfRange);
}

TEST(RandomFolds, SizesBalanced) {
  const FoldPlan plan = RandomFolds(23, 5, 4);
  std::vector<std::size_t> sizes(5);
  for (int a : plan.assignments) ++sizes[a];
  EXPECT_THAT(sizes, ElementsAre(5, 5, 5, 4, 4));
}

TEST(AggregateFolds, OrderInvariantAndPooled) {
  Rng rng(33);
  std::vector<FoldMetrics> folds;
  for (int f = 0; f < 5; ++f) {
    Confusion c(3, std::vector<std::size_t>(3));
    for (auto& row : c) {
      for (auto& v : row) v = 1 + rng.Bounded(9);
    }
    folds.push_back(MacroMetrics(c));
  }
  const FoldMetrics mean = AggregateFolds(folds);
  std::size_t pooled = 0;
  for (const auto& f : folds) pooled += f.confusion[1][2];
  EXPECT_EQ(mean.confusion[1][2], pooled);
  for (int i = 0; i < 10; ++i) {
    rng.Shuffle(folds);
    EXPECT_EQ(AggregateFolds(folds), mean);
  }
  double sum = 0.0;
  for (const auto& f : folds) sum += f.macro_f1;
  EXPECT_NEAR(mean.macro_f1, sum / 5.0, 1e-12);
}

TrainConfig QuickTrain() {
  TrainConfig config;
  config.n_trees = 50;
  config.depth = 4;
  return config;
}

TEST(CrossValidate, SignalIsLearnedOnHeldOutRows) {
  const SynthData data = Generate(DefaultSynthSpec(2021, 2, 40, 3));
  const FeatureTable features = GdscFeatures(data.dataset);
  CvConfig config;
  config.seed = 3;
  config.train = QuickTrain();
  const CvResult cv = CrossValidate(features, data.truth, 2, config);
  ASSERT_EQ(cv.folds.size(), 5);
  ASSERT_EQ(cv.metrics.per_fold.size(), 5);
  EXPECT_GT(cv.metrics.mean.accuracy, 0.85);
  EXPECT_TRUE(cv.metrics.warnings.empty());
  std::size_t held_out = 0;
  for (const FoldResult& f : cv.folds) {
    held_out += f.test_rows.size();
    EXPECT_EQ(f.predicted.size(), f.test_rows.size());
    EXPECT_EQ(f.test_encoded.rows(), f.test_rows.size());
  }
  EXPECT_EQ(held_out, 80);
}

TEST(CrossValidate, EncoderSeesTrainingRowsOnly) {
  const SynthData data = Generate(DefaultSynthSpec(2021, 3, 20, 4));
  const FeatureTable features = GdscFeatures(data.dataset);
  CvConfig config;
  config.seed = 9;
  config.train = QuickTrain();
  const CvResult cv = CrossValidate(features, data.truth, 3, config);
  for (std::size_t fold = 0; fold < 5; ++fold) {
    const auto train_rows = cv.plan.TrainRows(fold);
    const FeatureTable train = features.SelectRows(train_rows);
    std::vector<int> train_labels;
    for (std::size_t r : train_rows) train_labels.push_back(data.truth[r]);
    const OrderedTsEncoder expected = OrderedTsEncoder::FitTransform(
        train.categorical, train_labels, 3, config.train.ts_prior_weight, 1,
        0, nullptr);
    const FoldResult& result = cv.folds[fold];
    EXPECT_EQ(result.model.encoder.columns(), expected.columns());
    // Held-out encodings come from the frozen training statistics.
    const Matrix encoded =
        expected.Transform(features.SelectRows(result.test_rows).categorical);
    const std::size_t offset = result.model.num_numeric;
    for (std::size_t r = 0; r < encoded.rows(); ++r) {
      for (std::size_t c = 0; c < encoded.cols(); ++c) {
        EXPECT_EQ(result.test_encoded(r, offset + c), encoded(r, c));
      }
    }
  }
}

TEST(CrossValidate, FoldMissingClassIsReported) {
  // Class 2 has two rows, so three of five folds hold none of it out.
  const SynthData data = Generate(DefaultSynthSpec(2021, 2, 20, 5));
  const FeatureTable features = GdscFeatures(data.dataset);
  std::vector<int> labels = data.truth;
  labels[0] = 2;
  labels[1] = 2;
  CvConfig config;
  config.train = QuickTrain();
  const CvResult cv = CrossValidate(features, labels, 3, config);
  std::size_t missing = 0;
  for (const auto& w : cv.metrics.warnings) {
    if (w.starts_with("FoldWithMissingClass")) ++missing;
  }
  EXPECT_EQ(missing, 3);
  for (std::size_t f = 0; f < 5; ++f) {
    const bool has_class_2 = cv.metrics.per_fold[f].classes.size() == 3;
    const auto rows = cv.plan.TestRows(f);
    const bool holds_class_2 = std::any_of(
        rows.begin(), rows.end(), [&](std::size_t r) { return labels[r] == 2; });
    if (holds_class_2) EXPECT_TRUE(has_class_2);
  }
}

TEST(GdscFeatures, Layout) {
  const SynthData data = Generate(DefaultSynthSpec(2021, 2, 3, 0));
  const FeatureTable features = GdscFeatures(data.dataset);
  EXPECT_EQ(features.rows(), 6);
  EXPECT_EQ(features.num_sources(), 9);
  EXPECT_EQ(features.SourceNames().back(), "rurality");
  EXPECT_EQ(features.SourceNames()[5], "english_proficiency");
  EXPECT_EQ(features.categorical[0][2], data.dataset.rows[2].gdsc.rurality);
  EXPECT_EQ(features.numeric(4, 7), data.dataset.rows[4].gdsc.numeric[7]);
}

}  // namespace
}  // namespace vaxclust
