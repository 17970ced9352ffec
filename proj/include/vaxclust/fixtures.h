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

#ifndef VAXCLUST_FIXTURES_H_
#define VAXCLUST_FIXTURES_H_

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vaxclust/dataset.h"
#include "vaxclust/hcluster.h"

namespace vaxclust {

// Published cluster-mean vaccination rates. Rates are kept as the printed
// decimal text.
struct PublishedMeansRow {
  int year;
  int k;
  std::string_view cluster;
  std::array<std::string_view, kNumVaccines> rates;

  VaccinationProfile Profile() const;
};

std::span<const PublishedMeansRow> PublishedMeans();

// Rows of one (year, k) block in ascending-coverage order. Throws
// kSpecInvalid when the block does not exist.
std::vector<PublishedMeansRow> PublishedMeansBlock(int year, int k);

struct DistrictAlias {
  std::string_view alias;
  std::string_view canonical;
};

struct FixtureDistrict {
  std::string_view name;
  int rurality;  // illustrative category, not an official code
};

// The 150 canonical district names with their fixture rurality, sorted.
std::span<const FixtureDistrict> FixtureDistricts();

// Maps printed name variants ("Bristol, City of") to the canonical name.
std::string_view CanonicalDistrictName(std::string_view name);

// Rurality of a (possibly aliased) fixture district. Throws kSpecInvalid for
// unknown names.
int FixtureRurality(std::string_view name);

// Stable opaque id "U001".."U150" from the canonical sort order.
std::string FixtureDistrictId(std::string_view name);

// Published two-cluster district lists for one study year, names as printed.
struct TwoClusterList {
  int year;
  std::span<const std::string_view> low;
  std::span<const std::string_view> high;
};

// Throws kSpecInvalid for years without a list.
TwoClusterList TwoClusterLists(int year);

struct FixtureYear {
  YearDataset dataset;
  ClusterAssignment assignment;  // k = 2, L = 0, H = 1
};

// A year dataset built from the two-cluster list: every listed district, its
// fixture rurality, vaccination rates set to its cluster's published means and
// all numeric GDSC features zero.
FixtureYear LoadTwoClusterFixture(int year);

}  // namespace vaxclust

#endif  // VAXCLUST_FIXTURES_H_
