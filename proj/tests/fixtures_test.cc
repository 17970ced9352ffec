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

#include "vaxclust/fixtures.h"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "vaxclust/csv.h"
#include "vaxclust/error.h"
#include "vaxclust/stats.h"

namespace vaxclust {
namespace {

using ::testing::ElementsAre;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIoError;
}

// Cluster name of a district in the year's two-cluster fixture.
std::string ClusterOf(int year, std::string_view district) {
  const FixtureYear fixture = LoadTwoClusterFixture(year);
  const std::string id = FixtureDistrictId(district);
  for (std::size_t r = 0; r < fixture.dataset.size(); ++r) {
    if (fixture.dataset.rows[r].id == id) {
      return fixture.assignment.names[fixture.assignment.labels[r]];
    }
  }
  return "";
}

TEST(PublishedMeans, BlocksAndShape) {
  EXPECT_EQ(PublishedMeans().size(), 33);
  for (int year : {2021, 2022, 2023}) {
    EXPECT_EQ(PublishedMeansBlock(year, 2).size(), 2);
    EXPECT_EQ(PublishedMeansBlock(year, 3).size(), 3);
    EXPECT_EQ(PublishedMeansBlock(year, 6).size(), 6);
  }
  EXPECT_EQ(CodeOf([] { PublishedMeansBlock(2021, 4); }), ErrorCode::kSpecInvalid);
  EXPECT_EQ(CodeOf([] { PublishedMeansBlock(2024, 2); }), ErrorCode::kSpecInvalid);
}

TEST(PublishedMeans, FirstBlockEndpoints) {
  const auto block = PublishedMeansBlock(2021, 2);
  EXPECT_EQ(block[0].cluster, "L");
  EXPECT_EQ(block[0].rates.front(), "69.9");
  EXPECT_EQ(block[0].rates.back(), "82.9");
  EXPECT_EQ(block[1].cluster, "H");
  EXPECT_EQ(block[1].rates.front(), "87.3");
  EXPECT_EQ(block[1].rates.back(), "91.5");
  EXPECT_EQ(block[0].Profile().rates[0], 69.9);
}

TEST(PublishedMeans, RatesParseAndBlocksAscendInCoverage) {
  for (const PublishedMeansRow& row : PublishedMeans()) {
    for (std::string_view text : row.rates) {
      const auto value = csv::ParseDecimal(text);
      ASSERT_TRUE(value.has_value()) << text;
      EXPECT_GE(*value, 0.0);
      EXPECT_LE(*value, 100.0);
    }
  }
  for (int year : {2021, 2022, 2023}) {
    for (int k : {2, 3, 6}) {
      const auto block = PublishedMeansBlock(year, k);
      for (std::size_t c = 1; c < block.size(); ++c) {
        EXPECT_LT(block[c - 1].Profile().OverallCoverage(),
                  block[c].Profile().OverallCoverage())
            << year << " k=" << k << " row " << c;
      }
    }
  }
}

TEST(FixtureDistricts, NamesAndIds) {
  const auto districts = FixtureDistricts();
  EXPECT_EQ(districts.size(), 150);
  EXPECT_TRUE(std::is_sorted(
      districts.begin(), districts.end(),
      [](const auto& a, const auto& b) { return a.name < b.name; }));
  std::set<std::string> ids;
  for (const auto& d : districts) {
    EXPECT_GE(d.rurality, kMinRurality);
    EXPECT_LE(d.rurality, kMaxRurality);
    ids.insert(FixtureDistrictId(d.name));
  }
  EXPECT_EQ(ids.size(), 150);
  EXPECT_EQ(*ids.begin(), "U001");
  EXPECT_EQ(*ids.rbegin(), "U150");
  EXPECT_EQ(CanonicalDistrictName("Bristol, City of"),
            CanonicalDistrictName("Bristol"));
  EXPECT_EQ(FixtureRurality("Birmingham"), 1);
  EXPECT_EQ(CodeOf([] { FixtureRurality("Atlantis"); }),
            ErrorCode::kSpecInvalid);
}

TEST(TwoClusterLists, EveryDistrictListedAtMostOncePerYear) {
  // The 2022 list omits Southwark.
  const std::map<int, std::size_t> expected = {
      {2021, 150}, {2022, 149}, {2023, 150}};
  for (int year : {2021, 2022, 2023}) {
    const TwoClusterList lists = TwoClusterLists(year);
    std::set<std::string> seen;
    for (auto name : lists.low) {
      EXPECT_TRUE(seen.insert(FixtureDistrictId(name)).second) << name;
    }
    for (auto name : lists.high) {
      EXPECT_TRUE(seen.insert(FixtureDistrictId(name)).second) << name;
    }
    EXPECT_EQ(seen.size(), expected.at(year)) << year;
    EXPECT_EQ(seen.count(FixtureDistrictId("Southwark")), year == 2022 ? 0 : 1);
  }
  EXPECT_EQ(CodeOf([] { TwoClusterLists(2020); }), ErrorCode::kSpecInvalid);
}

TEST(TwoClusterFixture, DistrictsThatChangedCluster) {
  for (const char* district : {"Birmingham", "Manchester", "Liverpool",
                               "Barnet", "Croydon"}) {
    EXPECT_EQ(ClusterOf(2021, district), "L") << district;
    EXPECT_EQ(ClusterOf(2022, district), "L") << district;
    EXPECT_EQ(ClusterOf(2023, district), "H") << district;
  }
  for (const char* district : {"Cambridgeshire", "Cumbria"}) {
    EXPECT_EQ(ClusterOf(2021, district), "H") << district;
    EXPECT_EQ(ClusterOf(2022, district), "H") << district;
    EXPECT_EQ(ClusterOf(2023, district), "L") << district;
  }
}

TEST(TwoClusterFixture, DatasetLayout) {
  const FixtureYear fixture = LoadTwoClusterFixture(2022);
  EXPECT_EQ(fixture.dataset.size(), 149);
  EXPECT_EQ(fixture.dataset.year, (YearKey{2022}));
  EXPECT_TRUE(std::is_sorted(
      fixture.dataset.rows.begin(), fixture.dataset.rows.end(),
      [](const auto& a, const auto& b) { return a.id < b.id; }));
  EXPECT_THAT(fixture.assignment.names, ElementsAre("L", "H"));
  const auto block = PublishedMeansBlock(2022, 2);
  for (std::size_t r = 0; r < fixture.dataset.size(); ++r) {
    const int label = fixture.assignment.labels[r];
    EXPECT_EQ(fixture.dataset.rows[r].vaccination, block[label].Profile());
  }
}

TEST(TwoClusterFixture, LowClusterMostlyMajorConurbation) {
  const std::vector<std::size_t> expected = {2, 2, 3};
  for (int i = 0; i < 3; ++i) {
    const FixtureYear fixture = LoadTwoClusterFixture(2021 + i);
    EXPECT_EQ(CountNonUrban(fixture.assignment.labels, fixture.dataset, 0),
              expected[i]);
  }
}

}  // namespace
}  // namespace vaxclust
