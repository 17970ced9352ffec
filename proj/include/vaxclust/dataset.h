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

#ifndef VAXCLUST_DATASET_H_
#define VAXCLUST_DATASET_H_

#include <array>
#include <compare>
#include <cstddef>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "vaxclust/matrix.h"
#include "vaxclust/numeric.h"

namespace vaxclust {

inline constexpr std::size_t kNumVaccines = 14;
inline constexpr std::size_t kNumGdscNumeric = 8;
inline constexpr int kMinRurality = 1;
inline constexpr int kMaxRurality = 6;

// Vaccination rate columns, in the canonical (report) order.
inline constexpr std::array<std::string_view, kNumVaccines> kVaccineColumns = {
    "DTaP_IPV_5y",    "DTaP_IPV_Hib_5y",       "DTaP_IPV_Hib_HepB_12m",
    "DTaP_IPV_Hib_HepB_24m", "Hib_MenC_24m",   "Hib_MenC_5y",
    "MenB_12m",       "MenB_booster_24m",      "MMR_24m",
    "MMR1_5y",        "MMR2_5y",               "PCV_12m",
    "PCV_24m",        "Rota_12m",
};

inline constexpr std::array<std::string_view, kNumGdscNumeric>
    kGdscNumericColumns = {
        "imd_avg_score",       "imd_prop_deprived", "long_term_unemployed",
        "routine_occupations", "no_qualifications", "english_proficiency",
        "ethnic_minority",     "born_outside_uk",
};

inline constexpr std::string_view kRuralityColumn = "rurality";
inline constexpr std::string_view kDistrictIdColumn = "district_id";
inline constexpr std::string_view kDistrictNameColumn = "district_name";

// Indices into GdscProfile::numeric.
enum GdscFeature : std::size_t {
  kImdAvgScore = 0,
  kImdPropDeprived,
  kLongTermUnemployed,
  kRoutineOccupations,
  kNoQualifications,
  kEnglishProficiency,
  kEthnicMinority,
  kBornOutsideUk,
};

// Human-readable rurality category, 1 = "Urban with Major Conurbation" ...
// 6 = "Mainly Rural".
std::string_view RuralityLabel(int category);

// A study year: 2021 denotes the 2021-2022 cycle (1 April to 31 March).
struct YearKey {
  int start_year = 0;

  auto operator<=>(const YearKey&) const = default;
  std::string Label() const;  // "2021-2022"
};

// Percent of eligible children, per kVaccineColumns entry.
struct VaccinationProfile {
  std::array<double, kNumVaccines> rates{};

  // Mean of the 14 rates.
  double OverallCoverage() const;

  bool operator==(const VaccinationProfile&) const = default;
};

struct GdscProfile {
  // Per kGdscNumericColumns entry. imd_avg_score is a non-negative score, the
  // others are percentages.
  std::array<double, kNumGdscNumeric> numeric{};
  int rurality = kMinRurality;

  double imd_avg_score() const { return numeric[kImdAvgScore]; }
  double english_proficiency() const { return numeric[kEnglishProficiency]; }
  double ethnic_minority() const { return numeric[kEthnicMinority]; }
  double born_outside_uk() const { return numeric[kBornOutsideUk]; }

  bool operator==(const GdscProfile&) const = default;
};

struct VaccinationRecord {
  std::string name;
  VaccinationProfile profile;

  bool operator==(const VaccinationRecord&) const = default;
};

// Keyed by district id; std::map keeps the keys sorted.
using VaccinationTable = std::map<std::string, VaccinationRecord>;
using GdscTable = std::map<std::string, GdscProfile>;

struct DistrictRow {
  std::string id;
  std::string name;
  VaccinationProfile vaccination;
  GdscProfile gdsc;

  bool operator==(const DistrictRow&) const = default;
};

// One row per district, sorted by id.
struct YearDataset {
  YearKey year;
  std::vector<DistrictRow> rows;

  std::size_t size() const { return rows.size(); }
  bool operator==(const YearDataset&) const = default;
};

VaccinationTable ParseVaccinationTable(std::istream& in, YearKey year);
GdscTable ParseGdscTable(std::istream& in, YearKey year);

struct JoinOptions {
  // Drop unmatched districts instead of failing.
  bool allow_partial = false;
};

struct JoinResult {
  YearDataset dataset;
  std::vector<std::string> dropped_vaccination_only;
  std::vector<std::string> dropped_gdsc_only;
};

// Inner join on district id. Throws JoinMismatchError when the key sets differ
// unless options.allow_partial is set.
JoinResult JoinYear(const VaccinationTable& vaccination, const GdscTable& gdsc,
                    YearKey year, const JoinOptions& options = {});

// n x 14 matrix of raw rates.
Matrix VaccinationMatrix(const YearDataset& dataset);

struct StandardizedMatrix {
  Matrix values;
  std::vector<double> feature_means;
  // Sample standard deviation (n - 1); 0 for constant columns.
  std::vector<double> feature_sds;
  std::vector<std::string> feature_names;

  // Inverse transform. Constant columns come back as their mean.
  Matrix Destandardize() const;
};

// Column-wise z-scores. Constant columns become all zeros.
StandardizedMatrix Standardize(const Matrix& matrix,
                               std::vector<std::string> feature_names);

}  // namespace vaxclust

#endif  // VAXCLUST_DATASET_H_
