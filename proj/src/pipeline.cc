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

#include "vaxclust/pipeline.h"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "vaxclust/csv.h"
#include "vaxclust/error.h"

namespace vaxclust {
namespace {

namespace fs = std::filesystem;
using OJson = nlohmann::ordered_json;

constexpr std::string_view kDash = "\xE2\x80\x94";  // U+2014

std::ifstream OpenInput(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError,
                fmt::format("cannot read '{}'", path.generic_string()));
  }
  return in;
}

void WriteFile(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) {
    throw Error(ErrorCode::kIoError,
                fmt::format("cannot write '{}'", path.generic_string()));
  }
}

std::string Dump(const OJson& json) { return json.dump(2) + "\n"; }

std::string Percent1(double fraction) {
  return csv::FormatFixed(100.0 * fraction, 1);
}

std::string CellTag(int year, std::size_t k) {
  return fmt::format("{}_k{}", year, k);
}

nlohmann::json LoadGeometry(const fs::path& path) {
  std::ifstream in = OpenInput(path);
  try {
    nlohmann::json geometry = nlohmann::json::parse(in);
    if (!geometry.contains("features") || !geometry["features"].is_array()) {
      throw Error(ErrorCode::kIoError,
                  "geometry file is not a feature collection");
    }
    return geometry;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kIoError,
                fmt::format("cannot parse geometry '{}': {}",
                            path.generic_string(), e.what()));
  }
}

// Districts x sources held-out attribution matrix, summed over outputs.
std::vector<std::vector<double>> HeldOutAttributions(
    const CvResult& cv, std::size_t n_rows, std::size_t n_sources) {
  std::vector<std::vector<double>> rows(n_rows,
                                        std::vector<double>(n_sources, 0.0));
  for (const FoldResult& fold : cv.folds) {
    for (std::size_t i = 0; i < fold.test_rows.size(); ++i) {
      const Attribution a = TreeShap(fold.model, fold.test_encoded.row(i));
      for (const auto& phi : a.phi) {
        const auto grouped = AggregateToSources(fold.model, phi);
        for (std::size_t f = 0; f < n_sources; ++f) {
          rows[fold.test_rows[i]][f] += grouped[f];
        }
      }
    }
  }
  return rows;
}

CellReport RunCell(const RunConfig& config, const Stages& stages,
                   const YearReport& year, std::size_t k,
                   const nlohmann::json* geometry) {
  CellReport cell;
  cell.year = year.year;
  cell.k = k;
  const YearDataset& dataset = year.dataset;
  const std::size_t n = dataset.size();
  if (k < 2 || k + 1 > n) {
    throw Error(ErrorCode::kKOutOfRange,
                fmt::format("k = {} not in [2, {}] for {} districts", k,
                            n < 1 ? 0 : n - 1, n));
  }
  if (year.dendrogram.merges.size() + 1 != n) {
    throw Error(ErrorCode::kTooFewRows, "year has no dendrogram");
  }
  const std::vector<int> raw = CutAtK(year.dendrogram, k);
  cell.assignment = LabelByCoverage(raw, dataset, k);
  for (const DistrictRow& row : dataset.rows) cell.district_ids.push_back(row.id);
  cell.mean_table = ClusterMeanTable(cell.assignment, dataset);
  cell.choropleth = EmitChoropleth(cell.assignment, dataset, geometry);

  if (stages.train) {
    CvConfig cv_config;
    cv_config.k_folds = config.k_folds;
    cv_config.stratified = config.stratified;
    cv_config.seed = config.seed;
    cv_config.train = config.train;
    const FeatureTable features = GdscFeatures(dataset);
    CvResult cv =
        CrossValidate(features, cell.assignment.labels, k, cv_config);
    cell.trained = true;
    cell.metrics = cv.metrics;
    for (const FoldResult& fold : cv.folds) {
      cell.fold_test_rows.push_back(fold.test_rows);
    }
    if (stages.explain) {
      for (const FoldResult& fold : cv.folds) {
        cell.fold_importance.push_back(
            ComputeGlobalImportance(fold.model, fold.test_encoded));
      }
      cell.importance = AverageImportance(cell.fold_importance);
      cell.explained = true;
      if (config.export_attributions) {
        cell.row_attributions =
            HeldOutAttributions(cv, n, features.num_sources());
      }
    }
    for (FoldResult& fold : cv.folds) {
      cell.fold_models.push_back(std::move(fold.model));
    }
  }

  if (stages.stats) {
    cell.tests = CompareLowCluster(cell.assignment.labels, dataset, k);
    for (std::size_t f = 0; f < kNumGdscFeatures; ++f) {
      cell.box.push_back(
          BoxStats(GdscColumn(dataset, f), cell.assignment.labels, k));
    }
    cell.crosstab = RuralityCrossTab(cell.assignment.labels, dataset, k);
    cell.tested = true;
  }
  cell.ok = true;
  return cell;
}

CellReport FailedCell(int year, std::size_t k, std::string code,
                      std::string message) {
  CellReport cell;
  cell.year = year;
  cell.k = k;
  cell.ok = false;
  cell.error_code = std::move(code);
  cell.error_message = std::move(message);
  return cell;
}

// ---- artifact writers ----

std::string ClusterMeansCsv(const CellReport& cell) {
  std::ostringstream out;
  std::vector<std::string> header = {"cluster", "count"};
  for (std::string_view v : kVaccineColumns) header.emplace_back(v);
  header.emplace_back("overall");
  csv::WriteRow(out, header);
  for (const ClusterMeanRow& row : cell.mean_table) {
    std::vector<std::string> fields = {row.name, std::to_string(row.count)};
    for (double rate : row.rates) fields.push_back(csv::FormatFixed(rate, 1));
    fields.push_back(csv::FormatFixed(row.overall, 1));
    csv::WriteRow(out, fields);
  }
  return out.str();
}

std::string ImportanceCsv(const CellReport& cell) {
  std::ostringstream out;
  std::vector<std::string> header = {"feature_name", "mean_abs_shap", "rank"};
  for (std::size_t f = 0; f < cell.fold_importance.size(); ++f) {
    header.push_back(fmt::format("fold_{}", f + 1));
  }
  csv::WriteRow(out, header);
  const std::vector<std::size_t> ranking = cell.importance.Ranking();
  for (std::size_t r = 0; r < ranking.size(); ++r) {
    const std::size_t f = ranking[r];
    std::vector<std::string> fields = {cell.importance.feature_names[f],
                                       csv::FormatDouble(
                                           cell.importance.mean_abs[f]),
                                       std::to_string(r + 1)};
    for (const GlobalImportance& fold : cell.fold_importance) {
      fields.push_back(csv::FormatDouble(fold.mean_abs[f]));
    }
    csv::WriteRow(out, fields);
  }
  return out.str();
}

std::string ImportanceByClassCsv(const CellReport& cell) {
  std::ostringstream out;
  std::vector<std::string> header = {"feature_name"};
  const std::size_t outputs = cell.importance.per_output.size();
  for (std::size_t o = 0; o < outputs; ++o) {
    // A binary model has a single class-1 margin.
    header.push_back(outputs == 1 ? cell.assignment.names.back()
                                  : cell.assignment.names[o]);
  }
  csv::WriteRow(out, header);
  for (std::size_t f = 0; f < cell.importance.feature_names.size(); ++f) {
    std::vector<std::string> fields = {cell.importance.feature_names[f]};
    for (std::size_t o = 0; o < outputs; ++o) {
      fields.push_back(csv::FormatDouble(cell.importance.per_output[o][f]));
    }
    csv::WriteRow(out, fields);
  }
  return out.str();
}

std::string TestsCsv(const CellReport& cell) {
  std::ostringstream out;
  csv::WriteRow(out, {"feature", "U", "z", "p", "significant", "n_low",
                      "n_high", "method", "welch_t", "welch_df", "welch_p"});
  for (const FeatureComparison& c : cell.tests) {
    const TestResult& t = c.mann_whitney;
    csv::WriteRow(
        out,
        {t.feature_name, csv::FormatDouble(t.u_statistic),
         csv::FormatDouble(t.z), csv::FormatDouble(t.p_two_sided),
         t.significant_at_0_05 ? "true" : "false", std::to_string(t.n_low),
         std::to_string(t.n_high), t.exact ? "exact" : "normal",
         c.welch.defined ? csv::FormatDouble(c.welch.t) : "",
         c.welch.defined ? csv::FormatDouble(c.welch.df) : "",
         c.welch.defined ? csv::FormatDouble(c.welch.p_two_sided) : ""});
  }
  return out.str();
}

std::string BoxStatsCsv(const CellReport& cell) {
  std::ostringstream out;
  csv::WriteRow(out, {"feature", "cluster", "min", "q1", "median", "q3", "max",
                      "whisker_low", "whisker_high", "outlier_count"});
  for (std::size_t f = 0; f < cell.box.size(); ++f) {
    for (const BoxSummary& b : cell.box[f]) {
      csv::WriteRow(out, {GdscFeatureName(f), cell.assignment.names[b.group],
                          csv::FormatDouble(b.min), csv::FormatDouble(b.q1),
                          csv::FormatDouble(b.median), csv::FormatDouble(b.q3),
                          csv::FormatDouble(b.max),
                          csv::FormatDouble(b.whisker_low),
                          csv::FormatDouble(b.whisker_high),
                          std::to_string(b.outliers.size())});
    }
  }
  return out.str();
}

std::string CrossTabCsv(const CellReport& cell) {
  std::ostringstream out;
  std::vector<std::string> header = {"rurality", "label"};
  for (const std::string& name : cell.assignment.names) header.push_back(name);
  csv::WriteRow(out, header);
  for (std::size_t r = 0; r < cell.crosstab.size(); ++r) {
    const int category = static_cast<int>(r) + kMinRurality;
    std::vector<std::string> fields = {std::to_string(category),
                                       std::string(RuralityLabel(category))};
    for (std::size_t count : cell.crosstab[r]) {
      fields.push_back(std::to_string(count));
    }
    csv::WriteRow(out, fields);
  }
  return out.str();
}

std::string FoldMetricsCsv(const CellReport& cell) {
  std::ostringstream out;
  csv::WriteRow(out, {"fold", "accuracy", "macro_precision", "macro_recall",
                      "macro_f1", "weighted_precision", "weighted_recall",
                      "weighted_f1", "zero_denominators"});
  auto row = [&](const std::string& label, const FoldMetrics& m) {
    csv::WriteRow(out, {label, csv::FormatDouble(m.accuracy),
                        csv::FormatDouble(m.macro_precision),
                        csv::FormatDouble(m.macro_recall),
                        csv::FormatDouble(m.macro_f1),
                        csv::FormatDouble(m.weighted_precision),
                        csv::FormatDouble(m.weighted_recall),
                        csv::FormatDouble(m.weighted_f1),
                        std::to_string(m.zero_denominators)});
  };
  for (std::size_t f = 0; f < cell.metrics.per_fold.size(); ++f) {
    row(std::to_string(f + 1), cell.metrics.per_fold[f]);
  }
  row("mean", cell.metrics.mean);
  return out.str();
}

std::string AttributionsCsv(const CellReport& cell,
                            const YearDataset& dataset) {
  std::ostringstream out;
  std::vector<std::string> header = {"district_id"};
  for (const std::string& name : cell.importance.feature_names) {
    header.push_back(name);
  }
  csv::WriteRow(out, header);
  for (std::size_t r = 0; r < cell.row_attributions.size(); ++r) {
    std::vector<std::string> fields = {dataset.rows[r].id};
    for (double v : cell.row_attributions[r]) {
      fields.push_back(csv::FormatDouble(v));
    }
    csv::WriteRow(out, fields);
  }
  return out.str();
}

std::string MetricsFullCsv(const RunReport& report) {
  std::ostringstream out;
  csv::WriteRow(out, {"year", "k", "metric", "value"});
  for (const YearReport& year : report.years) {
    for (const CellReport& cell : year.cells) {
      if (!cell.ok || !cell.trained) continue;
      const FoldMetrics& m = cell.metrics.mean;
      const std::pair<std::string_view, double> values[] = {
          {"accuracy", m.accuracy},
          {"macro_precision", m.macro_precision},
          {"macro_recall", m.macro_recall},
          {"macro_f1", m.macro_f1},
          {"weighted_precision", m.weighted_precision},
          {"weighted_recall", m.weighted_recall},
          {"weighted_f1", m.weighted_f1}};
      for (const auto& [name, value] : values) {
        csv::WriteRow(out, {std::to_string(cell.year), std::to_string(cell.k),
                            std::string(name), csv::FormatDouble(value)});
      }
    }
  }
  return out.str();
}

OJson RunSummary(const RunReport& report) {
  OJson summary;
  summary["versions"] = {{"vaxclust", std::string(kVersion)},
                         {"report_format", kReportFormatVersion}};
  summary["config"] = ConfigEcho(report.config);
  summary["stages"] = {{"train", report.stages.train},
                       {"explain", report.stages.explain},
                       {"stats", report.stages.stats}};
  OJson years = OJson::array();
  for (const YearReport& year : report.years) {
    OJson y;
    y["year"] = year.year;
    y["label"] = YearKey{year.year}.Label();
    y["n_districts"] = year.dataset.size();
    y["dropped_vaccination_only"] = year.dropped_vaccination_only;
    y["dropped_gdsc_only"] = year.dropped_gdsc_only;
    y["suggested_k"] = year.suggested_k;
    OJson cells = OJson::array();
    for (const CellReport& cell : year.cells) {
      OJson c{{"k", cell.k}, {"ok", cell.ok}};
      if (!cell.ok) {
        c["error_code"] = cell.error_code;
        c["error_message"] = cell.error_message;
      } else if (cell.trained) {
        c["accuracy"] = cell.metrics.mean.accuracy;
        c["macro_f1"] = cell.metrics.mean.macro_f1;
        c["warnings"] = cell.metrics.warnings;
      }
      cells.push_back(c);
    }
    y["cells"] = cells;
    years.push_back(y);
  }
  summary["years"] = years;
  summary["failed_cells"] = report.failed_cells();
  return summary;
}

OJson ErrorsJson(const RunReport& report) {
  OJson errors = OJson::array();
  for (const YearReport& year : report.years) {
    for (const CellReport& cell : year.cells) {
      if (cell.ok) continue;
      errors.push_back(OJson{{"year", cell.year},
                             {"k", cell.k},
                             {"code", cell.error_code},
                             {"message", cell.error_message}});
    }
  }
  return errors;
}

}  // namespace

std::size_t RunReport::failed_cells() const {
  std::size_t failed = 0;
  for (const YearReport& year : years) {
    for (const CellReport& cell : year.cells) failed += cell.ok ? 0 : 1;
  }
  return failed;
}

JoinResult LoadYear(const RunConfig& config, int year) {
  std::ifstream vacc_in = OpenInput(config.VaccinationPath(year));
  std::ifstream gdsc_in = OpenInput(config.GdscPath(year));
  const VaccinationTable vaccination =
      ParseVaccinationTable(vacc_in, YearKey{year});
  const GdscTable gdsc = ParseGdscTable(gdsc_in, YearKey{year});
  return JoinYear(vaccination, gdsc, YearKey{year},
                  JoinOptions{config.allow_partial});
}

RunReport RunPipeline(const RunConfig& config, const Stages& stages) {
  config.Validate();
  std::vector<JoinResult> loaded;
  for (int year : config.years) loaded.push_back(LoadYear(config, year));
  return RunOnDatasets(config, stages, std::move(loaded));
}

RunReport RunOnDatasets(const RunConfig& config, const Stages& stages,
                        std::vector<JoinResult> years) {
  RunReport report;
  report.config = config;
  report.stages = stages;
  std::optional<nlohmann::json> geometry;
  if (!config.geometry.empty()) geometry = LoadGeometry(config.geometry);

  // Step 1 per year; failures here fail every cell of the year.
  std::vector<std::string> year_errors(years.size());
  std::vector<std::string> year_codes(years.size());
  for (std::size_t y = 0; y < years.size(); ++y) {
    YearReport yr;
    yr.year = years[y].dataset.year.start_year;
    yr.dataset = std::move(years[y].dataset);
    yr.dropped_vaccination_only = std::move(years[y].dropped_vaccination_only);
    yr.dropped_gdsc_only = std::move(years[y].dropped_gdsc_only);
    try {
      const Matrix raw = VaccinationMatrix(yr.dataset);
      std::vector<std::string> names(kVaccineColumns.begin(),
                                     kVaccineColumns.end());
      const Matrix points =
          config.scaled ? Standardize(raw, std::move(names)).values : raw;
      yr.dendrogram = Agglomerate(PairwiseDistances(points), {},
                                  config.linkage);
      const std::size_t n = yr.dataset.size();
      const std::size_t k_max = std::min(config.suggest_k_max, n - 1);
      if (k_max > config.suggest_k_min) {
        yr.suggested_k = SuggestK(yr.dendrogram, config.suggest_k_min, k_max);
      }
    } catch (const Error& e) {
      year_codes[y] = std::string(ErrorCodeName(e.code()));
      year_errors[y] = e.what();
    }
    report.years.push_back(std::move(yr));
  }

  struct Task {
    std::size_t year_index;
    std::size_t k;
  };
  std::vector<Task> tasks;
  for (std::size_t y = 0; y < report.years.size(); ++y) {
    for (std::size_t k : config.k_values) tasks.push_back({y, k});
  }
  std::vector<CellReport> results(tasks.size());
  auto run_task = [&](std::size_t t) {
    const Task& task = tasks[t];
    const YearReport& year = report.years[task.year_index];
    if (!year_errors[task.year_index].empty()) {
      results[t] = FailedCell(year.year, task.k, year_codes[task.year_index],
                              year_errors[task.year_index]);
      return;
    }
    try {
      results[t] = RunCell(config, stages, year, task.k,
                           geometry ? &*geometry : nullptr);
    } catch (const Error& e) {
      results[t] = FailedCell(year.year, task.k,
                              std::string(ErrorCodeName(e.code())), e.what());
    } catch (const std::exception& e) {
      results[t] = FailedCell(year.year, task.k, "Internal", e.what());
    }
  };

  const std::size_t workers = std::min(config.threads, tasks.size());
  if (workers <= 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < tasks.size(); t = next++) run_task(t);
      });
    }
    for (std::thread& thread : pool) thread.join();
  }
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    report.years[tasks[t].year_index].cells.push_back(std::move(results[t]));
  }
  return report;
}

OJson EmitChoropleth(const ClusterAssignment& assignment,
                     const YearDataset& dataset,
                     const nlohmann::json* geometry) {
  if (assignment.labels.size() != dataset.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                fmt::format("{} labels for {} districts",
                            assignment.labels.size(), dataset.size()));
  }
  auto properties = [&](std::size_t r) {
    const int label = assignment.labels[r];
    return OJson{{"district_id", dataset.rows[r].id},
                 {"district_name", dataset.rows[r].name},
                 {"cluster_index", label},
                 {"cluster_name", assignment.names.at(label)},
                 {"mean_overall_coverage",
                  dataset.rows[r].vaccination.OverallCoverage()}};
  };
  if (geometry == nullptr) {
    OJson rows = OJson::array();
    for (std::size_t r = 0; r < dataset.size(); ++r) {
      rows.push_back(properties(r));
    }
    return rows;
  }
  std::map<std::string, const nlohmann::json*> shapes;
  for (const nlohmann::json& feature : geometry->at("features")) {
    const auto props = feature.find("properties");
    if (props == feature.end() || !props->is_object()) continue;
    const auto id = props->find("district_id");
    if (id == props->end() || !id->is_string()) continue;
    const auto shape = feature.find("geometry");
    shapes[id->get<std::string>()] =
        shape == feature.end() ? nullptr : &*shape;
  }
  std::vector<std::string> missing;
  for (const DistrictRow& row : dataset.rows) {
    if (!shapes.contains(row.id)) missing.push_back(row.id);
  }
  if (!missing.empty()) throw GeometryKeyMismatchError(std::move(missing));

  OJson features = OJson::array();
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    const nlohmann::json* shape = shapes[dataset.rows[r].id];
    OJson feature;
    feature["type"] = "Feature";
    feature["geometry"] = shape ? OJson::parse(shape->dump()) : OJson();
    feature["properties"] = properties(r);
    features.push_back(std::move(feature));
  }
  return OJson{{"type", "FeatureCollection"}, {"features", features}};
}

std::string EmitMetricsTable(std::span<const CellReport> cells) {
  std::set<int> years;
  std::set<std::size_t> ks;
  std::map<std::pair<int, std::size_t>, const CellReport*> by_key;
  for (const CellReport& cell : cells) {
    years.insert(cell.year);
    ks.insert(cell.k);
    by_key[{cell.year, cell.k}] = &cell;
  }
  std::ostringstream out;
  std::vector<std::string> header = {"year", "metric"};
  for (std::size_t k : ks) header.push_back(fmt::format("{} cluster", k));
  csv::WriteRow(out, header);
  using Getter = double (*)(const FoldMetrics&);
  const std::pair<std::string_view, Getter> metrics[] = {
      {"Accuracy", [](const FoldMetrics& m) { return m.accuracy; }},
      {"Precision", [](const FoldMetrics& m) { return m.macro_precision; }},
      {"Recall", [](const FoldMetrics& m) { return m.macro_recall; }},
      {"F1 score", [](const FoldMetrics& m) { return m.macro_f1; }},
  };
  bool any_missing = false;
  for (int year : years) {
    for (const auto& [name, get] : metrics) {
      std::vector<std::string> fields = {YearKey{year}.Label(),
                                         std::string(name)};
      for (std::size_t k : ks) {
        const auto it = by_key.find({year, k});
        if (it == by_key.end() || !it->second->ok || !it->second->trained) {
          fields.emplace_back(kDash);
          any_missing = true;
        } else {
          fields.push_back(Percent1(get(it->second->metrics.mean)));
        }
      }
      csv::WriteRow(out, fields);
    }
  }
  if (any_missing) {
    csv::WriteRow(out, {fmt::format("{} no result for this configuration; "
                                    "see errors.json",
                                    kDash)});
  }
  return out.str();
}

std::string EmitMetricsTable(const RunReport& report) {
  std::vector<CellReport> cells;
  for (const YearReport& year : report.years) {
    for (const CellReport& cell : year.cells) {
      CellReport summary;
      summary.year = cell.year;
      summary.k = cell.k;
      summary.ok = cell.ok;
      summary.trained = cell.trained;
      summary.metrics.mean = cell.metrics.mean;
      cells.push_back(std::move(summary));
    }
  }
  return EmitMetricsTable(cells);
}

void WriteArtifacts(const RunReport& report) {
  const fs::path root = report.config.out_dir;
  fs::create_directories(root);
  for (const YearReport& year : report.years) {
    const fs::path year_dir = root / std::to_string(year.year);
    if (!year.dendrogram.merges.empty()) {
      std::ostringstream dendrogram;
      WriteDendrogram(dendrogram, year.dendrogram);
      WriteFile(year_dir / fmt::format("dendrogram_{}.csv", year.year),
                dendrogram.str());
    }
    for (const CellReport& cell : year.cells) {
      const std::string tag = CellTag(cell.year, cell.k);
      const fs::path dir = year_dir / fmt::format("k{}", cell.k);
      WriteFile(dir / fmt::format("report_{}.json", tag),
                Dump(CellReportToJson(cell)));
      if (!cell.ok) continue;
      std::ostringstream clusters;
      WriteAssignmentCsv(clusters, cell.assignment, year.dataset);
      WriteFile(dir / fmt::format("clusters_{}.csv", tag), clusters.str());
      WriteFile(dir / fmt::format("cluster_means_{}.csv", tag),
                ClusterMeansCsv(cell));
      WriteFile(dir / fmt::format("choropleth_{}.json", tag),
                Dump(cell.choropleth));
      if (cell.trained) {
        WriteFile(dir / fmt::format("fold_metrics_{}.csv", tag),
                  FoldMetricsCsv(cell));
        if (report.config.save_models) {
          for (std::size_t f = 0; f < cell.fold_models.size(); ++f) {
            WriteFile(dir / fmt::format("model_{}_fold{}.json", tag, f + 1),
                      ModelToJson(cell.fold_models[f]) + "\n");
          }
        }
      }
      if (cell.explained) {
        WriteFile(dir / fmt::format("shap_importance_{}.csv", tag),
                  ImportanceCsv(cell));
        WriteFile(dir / fmt::format("shap_importance_by_class_{}.csv", tag),
                  ImportanceByClassCsv(cell));
        if (!cell.row_attributions.empty()) {
          WriteFile(dir / fmt::format("shap_rows_{}.csv", tag),
                    AttributionsCsv(cell, year.dataset));
        }
      }
      if (cell.tested) {
        WriteFile(dir / fmt::format("tests_{}.csv", tag), TestsCsv(cell));
        WriteFile(dir / fmt::format("boxstats_{}.csv", tag),
                  BoxStatsCsv(cell));
        WriteFile(dir / fmt::format("crosstab_{}.csv", tag),
                  CrossTabCsv(cell));
      }
    }
  }
  if (report.stages.train) {
    WriteFile(root / "metrics.csv", EmitMetricsTable(report));
    WriteFile(root / "metrics_full.csv", MetricsFullCsv(report));
  }
  WriteFile(root / "errors.json", Dump(ErrorsJson(report)));
  WriteFile(root / "run_summary.json", Dump(RunSummary(report)));
}

}  // namespace vaxclust
