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

#ifndef VAXCLUST_PIPELINE_H_
#define VAXCLUST_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "vaxclust/dataset.h"
#include "vaxclust/eval.h"
#include "vaxclust/gbdt.h"
#include "vaxclust/hcluster.h"
#include "vaxclust/shap.h"
#include "vaxclust/stats.h"

namespace vaxclust {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr int kReportFormatVersion = 1;

struct RunConfig {
  std::vector<int> years;
  std::vector<std::size_t> k_values = {2, 3, 6};
  Linkage linkage = Linkage::kWard;
  bool scaled = true;  // z-score rates before clustering
  TrainConfig train;
  std::size_t k_folds = 5;
  bool stratified = true;
  uint64_t seed = 0;
  std::size_t suggest_k_min = 2;
  std::size_t suggest_k_max = 10;
  std::filesystem::path out_dir = "out";
  std::filesystem::path data_dir = ".";
  std::map<int, std::filesystem::path> vaccination_paths;
  std::map<int, std::filesystem::path> gdsc_paths;
  std::filesystem::path geometry;  // empty: no geometry
  bool allow_partial = false;
  bool save_models = false;
  bool export_attributions = false;
  // Not part of the echo: results do not depend on it.
  std::size_t threads = 1;
  // Keys left at their defaults, echoed in reports.
  std::vector<std::string> defaulted;

  // <data_dir>/vaccination_<year>.csv unless overridden.
  std::filesystem::path VaccinationPath(int year) const;
  std::filesystem::path GdscPath(int year) const;

  // Throws kConfigError.
  void Validate() const;
};

// Flat "key = value" text; '#' starts a comment, lists are comma separated.
// Unknown keys, repeated keys and malformed values throw kConfigError.
RunConfig ParseConfig(std::istream& in);
RunConfig LoadConfig(const std::filesystem::path& path);

// Resolved settings as JSON (threads excluded).
nlohmann::ordered_json ConfigEcho(const RunConfig& config);

// Which stages run after clustering.
struct Stages {
  bool train = true;
  bool explain = true;
  bool stats = true;
};

struct CellReport {
  int year = 0;
  std::size_t k = 0;
  bool ok = false;
  std::string error_code;
  std::string error_message;

  ClusterAssignment assignment;
  std::vector<std::string> district_ids;
  std::vector<ClusterMeanRow> mean_table;
  bool trained = false;
  MetricsBundle metrics;
  std::vector<TreeEnsemble> fold_models;
  std::vector<std::vector<std::size_t>> fold_test_rows;
  bool explained = false;
  GlobalImportance importance;
  std::vector<GlobalImportance> fold_importance;
  // Held-out attributions per source feature, summed over outputs:
  // [row][source], in dataset row order.
  std::vector<std::vector<double>> row_attributions;
  bool tested = false;
  std::vector<FeatureComparison> tests;
  std::vector<std::vector<BoxSummary>> box;  // [feature][cluster]
  CrossTab crosstab;
  // Map layer; kept out of the report JSON.
  nlohmann::ordered_json choropleth;
};

struct YearReport {
  int year = 0;
  YearDataset dataset;
  std::vector<std::string> dropped_vaccination_only;
  std::vector<std::string> dropped_gdsc_only;
  Dendrogram dendrogram;
  std::size_t suggested_k = 0;
  std::vector<CellReport> cells;
};

struct RunReport {
  RunConfig config;
  Stages stages;
  std::vector<YearReport> years;

  std::size_t failed_cells() const;
};

// Loads and joins one year's tables. Throws data errors.
JoinResult LoadYear(const RunConfig& config, int year);

// Clusters each year and evaluates every (year, k) cell. Cells run on
// config.threads workers; a failing cell records its error and the others
// continue. Ingestion errors propagate.
RunReport RunPipeline(const RunConfig& config, const Stages& stages = {});

// Same as RunPipeline on already loaded datasets.
RunReport RunOnDatasets(const RunConfig& config, const Stages& stages,
                        std::vector<JoinResult> years);

// Writes every artifact under config.out_dir. Output bytes depend only on
// the report.
void WriteArtifacts(const RunReport& report);

// Metrics table: one row per year and metric, one column per k in
// ascending order, percentages with one decimal; failed cells show an
// em dash with a footnote row.
std::string EmitMetricsTable(std::span<const CellReport> cells);
std::string EmitMetricsTable(const RunReport& report);

// Feature collection when `geometry` is given (features keyed by
// properties.district_id), otherwise a flat array of property objects.
// Throws GeometryKeyMismatch naming districts without geometry.
nlohmann::ordered_json EmitChoropleth(const ClusterAssignment& assignment,
                                      const YearDataset& dataset,
                                      const nlohmann::json* geometry);

// Lossless JSON for one cell.
nlohmann::ordered_json CellReportToJson(const CellReport& cell);
CellReport CellReportFromJson(const nlohmann::json& json);

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitCellFailures = 3;

}  // namespace vaxclust

#endif  // VAXCLUST_PIPELINE_H_
