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

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <unordered_map>
#include <utility>

#include "vaxclust/csv.h"
#include "vaxclust/error.h"

namespace vaxclust {
namespace {

// Column name -> position in the header row.
using HeaderIndex = std::unordered_map<std::string, std::size_t>;

HeaderIndex ReadHeader(csv::Reader& reader, YearKey year,
                       std::string_view table) {
  auto header = reader.Next();
  if (!header) {
    throw Error(ErrorCode::kEmptyTable,
                fmt::format("{} table for {} has no header", table,
                            year.start_year));
  }
  HeaderIndex index;
  for (std::size_t i = 0; i < header->size(); ++i) {
    std::string name = (*header)[i];
    name.erase(0, name.find_first_not_of(" \t"));
    name.erase(name.find_last_not_of(" \t") + 1);
    index.emplace(std::move(name), i);
  }
  return index;
}

std::size_t RequireColumn(const HeaderIndex& index, std::string_view column,
                          std::string_view table) {
  const auto it = index.find(std::string(column));
  if (it == index.end()) {
    throw Error(ErrorCode::kMissingColumn,
                fmt::format("{} table lacks column '{}'", table, column));
  }
  return it->second;
}

const std::string& Cell(const std::vector<std::string>& row, std::size_t col,
                        int line) {
  if (col >= row.size()) {
    throw Error(ErrorCode::kMalformedCell,
                fmt::format("line {}: row has {} fields, expected at least {}",
                            line, row.size(), col + 1));
  }
  return row[col];
}

std::string RequireId(const std::vector<std::string>& row, std::size_t col,
                      int line) {
  std::string id = Cell(row, col, line);
  id.erase(0, id.find_first_not_of(" \t"));
  id.erase(id.find_last_not_of(" \t") + 1);
  if (id.empty()) {
    throw Error(ErrorCode::kMalformedCell,
                fmt::format("line {}: empty district_id", line));
  }
  return id;
}

double RequirePercent(const std::vector<std::string>& row, std::size_t col,
                      std::string_view column, int line, double upper) {
  const std::string& text = Cell(row, col, line);
  const std::optional<double> value = csv::ParseDecimal(text);
  if (!value) {
    throw Error(ErrorCode::kMalformedCell,
                fmt::format("line {}: column '{}' has non-decimal value '{}'",
                            line, column, text));
  }
  if (*value < 0.0 || *value > upper) {
    throw Error(ErrorCode::kOutOfRange,
                fmt::format("line {}: column '{}' value {} outside [0, {}]",
                            line, column, text, upper));
  }
  return *value;
}

}  // namespace

std::string_view RuralityLabel(int category) {
  switch (category) {
    case 1: return "Urban with Major Conurbation";
    case 2: return "Urban with Minor Conurbation";
    case 3: return "Urban with City and Town";
    case 4: return "Urban with Significant Rural";
    case 5: return "Largely Rural";
    case 6: return "Mainly Rural";
    default: return "";
  }
}

std::string YearKey::Label() const {
  return fmt::format("{}-{}", start_year, start_year + 1);
}

double VaccinationProfile::OverallCoverage() const {
  return StableMean(std::vector<double>(rates.begin(), rates.end()));
}

VaccinationTable ParseVaccinationTable(std::istream& in, YearKey year) {
  constexpr std::string_view kTable = "vaccination";
  csv::Reader reader(in);
  const HeaderIndex header = ReadHeader(reader, year, kTable);
  const std::size_t id_col = RequireColumn(header, kDistrictIdColumn, kTable);
  const std::size_t name_col =
      RequireColumn(header, kDistrictNameColumn, kTable);
  std::array<std::size_t, kNumVaccines> rate_cols{};
  for (std::size_t v = 0; v < kNumVaccines; ++v) {
    rate_cols[v] = RequireColumn(header, kVaccineColumns[v], kTable);
  }

  VaccinationTable table;
  while (auto row = reader.Next()) {
    const int line = reader.line();
    std::string id = RequireId(*row, id_col, line);
    VaccinationRecord record;
    record.name = Cell(*row, name_col, line);
    for (std::size_t v = 0; v < kNumVaccines; ++v) {
      record.profile.rates[v] =
          RequirePercent(*row, rate_cols[v], kVaccineColumns[v], line, 100.0);
    }
    if (!table.emplace(id, std::move(record)).second) {
      throw Error(ErrorCode::kDuplicateDistrict,
                  fmt::format("line {}: district '{}' repeated", line, id));
    }
  }
  if (table.empty()) {
    throw Error(ErrorCode::kEmptyTable,
                fmt::format("vaccination table for {} has no rows",
                            year.start_year));
  }
  return table;
}

GdscTable ParseGdscTable(std::istream& in, YearKey year) {
  constexpr std::string_view kTable = "gdsc";
  csv::Reader reader(in);
  const HeaderIndex header = ReadHeader(reader, year, kTable);
  const std::size_t id_col = RequireColumn(header, kDistrictIdColumn, kTable);
  std::array<std::size_t, kNumGdscNumeric> cols{};
  for (std::size_t f = 0; f < kNumGdscNumeric; ++f) {
    cols[f] = RequireColumn(header, kGdscNumericColumns[f], kTable);
  }
  const std::size_t rurality_col =
      RequireColumn(header, kRuralityColumn, kTable);

  GdscTable table;
  while (auto row = reader.Next()) {
    const int line = reader.line();
    std::string id = RequireId(*row, id_col, line);
    GdscProfile profile;
    for (std::size_t f = 0; f < kNumGdscNumeric; ++f) {
      // The IMD average score is a non-negative score, not a percentage.
      const double upper = f == kImdAvgScore
                               ? std::numeric_limits<double>::max()
                               : 100.0;
      profile.numeric[f] =
          RequirePercent(*row, cols[f], kGdscNumericColumns[f], line, upper);
    }
    const std::string& text = Cell(*row, rurality_col, line);
    const auto value = csv::ParseDecimal(text);
    if (!value || text.find('.') != std::string::npos) {
      throw Error(ErrorCode::kMalformedCell,
                  fmt::format("line {}: rurality '{}' is not an integer", line,
                              text));
    }
    if (*value < kMinRurality || *value > kMaxRurality) {
      throw Error(ErrorCode::kRuralityOutOfDomain,
                  fmt::format("line {}: rurality {} not in 1..6", line, text));
    }
    profile.rurality = static_cast<int>(*value);
    if (!table.emplace(id, profile).second) {
      throw Error(ErrorCode::kDuplicateDistrict,
                  fmt::format("line {}: district '{}' repeated", line, id));
    }
  }
  if (table.empty()) {
    throw Error(ErrorCode::kEmptyTable,
                fmt::format("gdsc table for {} has no rows", year.start_year));
  }
  return table;
}

JoinResult JoinYear(const VaccinationTable& vaccination, const GdscTable& gdsc,
                    YearKey year, const JoinOptions& options) {
  JoinResult result;
  result.dataset.year = year;
  for (const auto& [id, record] : vaccination) {
    const auto it = gdsc.find(id);
    if (it == gdsc.end()) {
      result.dropped_vaccination_only.push_back(id);
      continue;
    }
    result.dataset.rows.push_back(
        DistrictRow{id, record.name, record.profile, it->second});
  }
  for (const auto& [id, profile] : gdsc) {
    if (!vaccination.contains(id)) result.dropped_gdsc_only.push_back(id);
  }
  const bool mismatch = !result.dropped_vaccination_only.empty() ||
                        !result.dropped_gdsc_only.empty();
  if (mismatch && !options.allow_partial) {
    throw JoinMismatchError(result.dropped_vaccination_only,
                            result.dropped_gdsc_only);
  }
  return result;
}

Matrix VaccinationMatrix(const YearDataset& dataset) {
  Matrix m(dataset.size(), kNumVaccines);
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    for (std::size_t v = 0; v < kNumVaccines; ++v) {
      m(r, v) = dataset.rows[r].vaccination.rates[v];
    }
  }
  return m;
}

StandardizedMatrix Standardize(const Matrix& matrix,
                               std::vector<std::string> feature_names) {
  const std::size_t n = matrix.rows();
  const std::size_t d = matrix.cols();
  if (n < 2) {
    throw Error(ErrorCode::kTooFewRows,
                fmt::format("standardization needs at least 2 rows, got {}", n));
  }
  if (feature_names.size() != d) {
    throw Error(ErrorCode::kLengthMismatch,
                fmt::format("{} feature names for {} columns",
                            feature_names.size(), d));
  }
  StandardizedMatrix out;
  out.values = Matrix(n, d);
  out.feature_means.resize(d);
  out.feature_sds.resize(d);
  out.feature_names = std::move(feature_names);
  for (std::size_t c = 0; c < d; ++c) {
    const std::vector<double> column = matrix.column(c);
    const double mean = StableMean(column);
    double ss = 0.0;
    bool constant = true;
    for (double v : column) {
      ss += (v - mean) * (v - mean);
      constant = constant && v == column.front();
    }
    const double sd = constant ? 0.0 : std::sqrt(ss / static_cast<double>(n - 1));
    out.feature_means[c] = mean;
    out.feature_sds[c] = sd;
    for (std::size_t r = 0; r < n; ++r) {
      out.values(r, c) = sd == 0.0 ? 0.0 : (column[r] - mean) / sd;
    }
  }
  return out;
}

Matrix StandardizedMatrix::Destandardize() const {
  Matrix out(values.rows(), values.cols());
  for (std::size_t r = 0; r < values.rows(); ++r) {
    for (std::size_t c = 0; c < values.cols(); ++c) {
      out(r, c) = values(r, c) * feature_sds[c] + feature_means[c];
    }
  }
  return out;
}

}  // namespace vaxclust
