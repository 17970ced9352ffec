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

#include "vaxclust/dataset.h"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "vaxclust/error.h"
#include "vaxclust/synth.h"

namespace vaxclust {
namespace {

using ::testing::ElementsAre;

constexpr YearKey kYear{2021};

std::string VaccinationHeader() {
  std::string header = "district_id,district_name";
  for (auto column : kVaccineColumns) {
    header += ",";
    header += column;
  }
  return header + "\n";
}

std::string VaccinationRow(const std::string& id, const std::string& rate) {
  std::string row = id + ",Name " + id;
  for (std::size_t v = 0; v < kNumVaccines; ++v) row += "," + rate;
  return row + "\n";
}

std::string GdscHeader() {
  std::string header = "district_id";
  for (auto column : kGdscNumericColumns) {
    header += ",";
    header += column;
  }
  return header + ",rurality\n";
}

std::string GdscRow(const std::string& id, const std::string& value,
                    const std::string& rurality) {
  std::string row = id;
  for (std::size_t f = 0; f < kNumGdscNumeric; ++f) row += "," + value;
  return row + "," + rurality + "\n";
}

ErrorCode VaccinationError(const std::string& text) {
  std::istringstream in(text);
  try {
    ParseVaccinationTable(in, kYear);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return ErrorCode::kIoError;
}

ErrorCode GdscError(const std::string& text) {
  std::istringstream in(text);
  try {
    ParseGdscTable(in, kYear);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return ErrorCode::kIoError;
}

TEST(YearKey, Label) { EXPECT_EQ(YearKey{2021}.Label(), "2021-2022"); }

TEST(ParseVaccinationTable, ReadsRows) {
  std::istringstream in(VaccinationHeader() + VaccinationRow("B", "90.5") +
                        VaccinationRow("A", "80"));
  const VaccinationTable table = ParseVaccinationTable(in, kYear);
  ASSERT_EQ(table.size(), 2);
  EXPECT_EQ(table.begin()->first, "A");
  EXPECT_EQ(table.at("B").name, "Name B");
  EXPECT_EQ(table.at("B").profile.rates[13], 90.5);
  EXPECT_DOUBLE_EQ(table.at("A").profile.OverallCoverage(), 80.0);
}

TEST(ParseVaccinationTable, ColumnOrderDoesNotMatter) {
  std::string header = "MMR_24m,district_name,district_id";
  std::string row = "1,x,Z";
  for (auto column : kVaccineColumns) {
    if (column == "MMR_24m") continue;
    header += ",";
    header += column;
    row += ",2";
  }
  std::istringstream in(header + "\n" + row + "\n");
  const VaccinationTable table = ParseVaccinationTable(in, kYear);
  EXPECT_EQ(table.at("Z").profile.rates[8], 1.0);
  EXPECT_EQ(table.at("Z").profile.rates[0], 2.0);
}

TEST(ParseVaccinationTable, Errors) {
  EXPECT_EQ(VaccinationError(""), ErrorCode::kEmptyTable);
  EXPECT_EQ(VaccinationError(VaccinationHeader()), ErrorCode::kEmptyTable);
  EXPECT_EQ(VaccinationError("district_id,district_name\nA,x\n"),
            ErrorCode::kMissingColumn);
  EXPECT_EQ(VaccinationError(VaccinationHeader() + VaccinationRow("A", "abc")),
            ErrorCode::kMalformedCell);
  EXPECT_EQ(VaccinationError(VaccinationHeader() + VaccinationRow("A", "1e2")),
            ErrorCode::kMalformedCell);
  EXPECT_EQ(
      VaccinationError(VaccinationHeader() + VaccinationRow("A", "100.1")),
      ErrorCode::kOutOfRange);
  EXPECT_EQ(VaccinationError(VaccinationHeader() + VaccinationRow("A", "-1")),
            ErrorCode::kOutOfRange);
  EXPECT_EQ(VaccinationError(VaccinationHeader() + VaccinationRow("A", "1") +
                             VaccinationRow("A", "2")),
            ErrorCode::kDuplicateDistrict);
  EXPECT_EQ(VaccinationError(VaccinationHeader() + "A,short,1,2\n"),
            ErrorCode::kMalformedCell);
}

TEST(ParseGdscTable, ReadsRowsAndAllowsLargeImdScore) {
  std::string text = GdscHeader() + GdscRow("A", "12.5", "3");
  text.replace(text.find("A,12.5"), 6, "A,250");
  std::istringstream in(text);
  const GdscTable table = ParseGdscTable(in, kYear);
  EXPECT_EQ(table.at("A").imd_avg_score(), 250.0);
  EXPECT_EQ(table.at("A").english_proficiency(), 12.5);
  EXPECT_EQ(table.at("A").rurality, 3);
}

TEST(ParseGdscTable, Errors) {
  EXPECT_EQ(GdscError(GdscHeader() + GdscRow("A", "1", "0")),
            ErrorCode::kRuralityOutOfDomain);
  EXPECT_EQ(GdscError(GdscHeader() + GdscRow("A", "1", "7")),
            ErrorCode::kRuralityOutOfDomain);
  EXPECT_EQ(GdscError(GdscHeader() + GdscRow("A", "1", "2.5")),
            ErrorCode::kMalformedCell);
  EXPECT_EQ(GdscError(GdscHeader() + GdscRow("A", "101", "1")),
            ErrorCode::kOutOfRange);
  EXPECT_EQ(GdscError("district_id,rurality\nA,1\n"),
            ErrorCode::kMissingColumn);
}

TEST(JoinYear, MismatchNamesBothSides) {
  std::istringstream vin(VaccinationHeader() + VaccinationRow("A", "1") +
                         VaccinationRow("B", "1"));
  std::istringstream gin(GdscHeader() + GdscRow("B", "1", "1") +
                         GdscRow("C", "1", "1"));
  const VaccinationTable vaccination = ParseVaccinationTable(vin, kYear);
  const GdscTable gdsc = ParseGdscTable(gin, kYear);
  try {
    JoinYear(vaccination, gdsc, kYear);
    FAIL() << "expected JoinMismatchError";
  } catch (const JoinMismatchError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kJoinMismatch);
    EXPECT_THAT(e.left_only(), ElementsAre("A"));
    EXPECT_THAT(e.right_only(), ElementsAre("C"));
  }

  const JoinResult partial =
      JoinYear(vaccination, gdsc, kYear, {.allow_partial = true});
  ASSERT_EQ(partial.dataset.size(), 1);
  EXPECT_EQ(partial.dataset.rows[0].id, "B");
  EXPECT_THAT(partial.dropped_vaccination_only, ElementsAre("A"));
  EXPECT_THAT(partial.dropped_gdsc_only, ElementsAre("C"));
}

TEST(JoinYear, CsvRoundTripOfGeneratedData) {
  const SynthData data = Generate(DefaultSynthSpec(2022, 3, 10, 5));
  std::ostringstream vout, gout;
  WriteVaccinationCsv(vout, data.dataset);
  WriteGdscCsv(gout, data.dataset);
  std::istringstream vin(vout.str()), gin(gout.str());
  const YearKey year{2022};
  const JoinResult joined = JoinYear(ParseVaccinationTable(vin, year),
                                     ParseGdscTable(gin, year), year);
  EXPECT_EQ(joined.dataset, data.dataset);
}

TEST(Standardize, TwoValueColumn) {
  Matrix m(2, 1);
  m(0, 0) = 2.0;
  m(1, 0) = 4.0;
  const StandardizedMatrix s = Standardize(m, {"x"});
  EXPECT_NEAR(s.values(0, 0), -1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(s.values(1, 0), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_DOUBLE_EQ(s.feature_means[0], 3.0);
  EXPECT_DOUBLE_EQ(s.feature_sds[0], std::sqrt(2.0));
}

TEST(Standardize, ConstantColumnBecomesZero) {
  Matrix m(3, 2, 5.0);
  m(1, 1) = 6.0;
  const StandardizedMatrix s = Standardize(m, {"c", "v"});
  for (std::size_t r = 0; r < 3; ++r) EXPECT_EQ(s.values(r, 0), 0.0);
  EXPECT_EQ(s.feature_sds[0], 0.0);
  const Matrix back = s.Destandardize();
  for (std::size_t r = 0; r < 3; ++r) {
    EXPECT_EQ(back(r, 0), 5.0);
    EXPECT_NEAR(back(r, 1), m(r, 1), 1e-12);
  }
}

TEST(Standardize, RoundTripAndMoments) {
  const SynthData data = Generate(DefaultSynthSpec(2021, 2, 20, 1));
  const Matrix raw = VaccinationMatrix(data.dataset);
  std::vector<std::string> names(kVaccineColumns.begin(),
                                 kVaccineColumns.end());
  const StandardizedMatrix s = Standardize(raw, names);
  EXPECT_EQ(s.feature_names, names);
  for (std::size_t c = 0; c < raw.cols(); ++c) {
    double sum = 0.0, sq = 0.0;
    for (std::size_t r = 0; r < raw.rows(); ++r) {
      sum += s.values(r, c);
      sq += s.values(r, c) * s.values(r, c);
    }
    EXPECT_NEAR(sum, 0.0, 1e-9);
    EXPECT_NEAR(sq / static_cast<double>(raw.rows() - 1), 1.0, 1e-9);
  }
  const Matrix back = s.Destandardize();
  for (std::size_t r = 0; r < raw.rows(); ++r) {
    for (std::size_t c = 0; c < raw.cols(); ++c) {
      EXPECT_NEAR(back(r, c), raw(r, c), 1e-9);
    }
  }
}

TEST(Rurality, Labels) {
  EXPECT_EQ(RuralityLabel(1), "Urban with Major Conurbation");
  EXPECT_EQ(RuralityLabel(6), "Mainly Rural");
  EXPECT_EQ(RuralityLabel(7), "");
}

}  // namespace
}  // namespace vaxclust
