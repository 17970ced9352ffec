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

#include <fmt/format.h>

#include "vaxclust/error.h"
#include "vaxclust/pipeline.h"

namespace vaxclust {
namespace {

using OJson = nlohmann::ordered_json;
using Json = nlohmann::json;

OJson ToJson(const ClassMetrics& m) {
  return OJson{{"precision", m.precision},
               {"recall", m.recall},
               {"f1", m.f1},
               {"support", m.support}};
}

ClassMetrics ClassMetricsFrom(const Json& j) {
  ClassMetrics m;
  m.precision = j.at("precision").get<double>();
  m.recall = j.at("recall").get<double>();
  m.f1 = j.at("f1").get<double>();
  m.support = j.at("support").get<std::size_t>();
  return m;
}

OJson ToJson(const FoldMetrics& m) {
  OJson j;
  j["accuracy"] = m.accuracy;
  j["macro_precision"] = m.macro_precision;
  j["macro_recall"] = m.macro_recall;
  j["macro_f1"] = m.macro_f1;
  j["weighted_precision"] = m.weighted_precision;
  j["weighted_recall"] = m.weighted_recall;
  j["weighted_f1"] = m.weighted_f1;
  j["confusion"] = m.confusion;
  OJson per_class = OJson::array();
  for (const ClassMetrics& c : m.per_class) per_class.push_back(ToJson(c));
  j["per_class"] = per_class;
  j["classes"] = m.classes;
  j["zero_denominators"] = m.zero_denominators;
  return j;
}

FoldMetrics FoldMetricsFrom(const Json& j) {
  FoldMetrics m;
  m.accuracy = j.at("accuracy").get<double>();
  m.macro_precision = j.at("macro_precision").get<double>();
  m.macro_recall = j.at("macro_recall").get<double>();
  m.macro_f1 = j.at("macro_f1").get<double>();
  m.weighted_precision = j.at("weighted_precision").get<double>();
  m.weighted_recall = j.at("weighted_recall").get<double>();
  m.weighted_f1 = j.at("weighted_f1").get<double>();
  m.confusion = j.at("confusion").get<Confusion>();
  for (const Json& c : j.at("per_class")) {
    m.per_class.push_back(ClassMetricsFrom(c));
  }
  m.classes = j.at("classes").get<std::vector<std::size_t>>();
  m.zero_denominators = j.at("zero_denominators").get<std::size_t>();
  return m;
}

OJson ToJson(const GlobalImportance& g) {
  return OJson{{"feature_names", g.feature_names},
               {"mean_abs", g.mean_abs},
               {"per_output", g.per_output}};
}

GlobalImportance ImportanceFrom(const Json& j) {
  GlobalImportance g;
  g.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  g.mean_abs = j.at("mean_abs").get<std::vector<double>>();
  g.per_output = j.at("per_output").get<std::vector<std::vector<double>>>();
  return g;
}

OJson ToJson(const FeatureComparison& c) {
  const TestResult& t = c.mann_whitney;
  OJson mw{{"feature_name", t.feature_name},
           {"u_statistic", t.u_statistic},
           {"z", t.z},
           {"p_two_sided", t.p_two_sided},
           {"n_low", t.n_low},
           {"n_high", t.n_high},
           {"exact", t.exact},
           {"significant_at_0_05", t.significant_at_0_05}};
  OJson welch{{"t", c.welch.t},
              {"df", c.welch.df},
              {"p_two_sided", c.welch.p_two_sided},
              {"defined", c.welch.defined}};
  return OJson{{"mann_whitney", mw}, {"welch", welch}};
}

FeatureComparison ComparisonFrom(const Json& j) {
  FeatureComparison c;
  const Json& mw = j.at("mann_whitney");
  c.mann_whitney.feature_name = mw.at("feature_name").get<std::string>();
  c.mann_whitney.u_statistic = mw.at("u_statistic").get<double>();
  c.mann_whitney.z = mw.at("z").get<double>();
  c.mann_whitney.p_two_sided = mw.at("p_two_sided").get<double>();
  c.mann_whitney.n_low = mw.at("n_low").get<std::size_t>();
  c.mann_whitney.n_high = mw.at("n_high").get<std::size_t>();
  c.mann_whitney.exact = mw.at("exact").get<bool>();
  c.mann_whitney.significant_at_0_05 =
      mw.at("significant_at_0_05").get<bool>();
  const Json& w = j.at("welch");
  c.welch.t = w.at("t").get<double>();
  c.welch.df = w.at("df").get<double>();
  c.welch.p_two_sided = w.at("p_two_sided").get<double>();
  c.welch.defined = w.at("defined").get<bool>();
  return c;
}

OJson ToJson(const BoxSummary& b) {
  return OJson{{"group", b.group},
               {"n", b.n},
               {"min", b.min},
               {"q1", b.q1},
               {"median", b.median},
               {"q3", b.q3},
               {"max", b.max},
               {"whisker_low", b.whisker_low},
               {"whisker_high", b.whisker_high},
               {"outliers", b.outliers}};
}

BoxSummary BoxFrom(const Json& j) {
  BoxSummary b;
  b.group = j.at("group").get<std::size_t>();
  b.n = j.at("n").get<std::size_t>();
  b.min = j.at("min").get<double>();
  b.q1 = j.at("q1").get<double>();
  b.median = j.at("median").get<double>();
  b.q3 = j.at("q3").get<double>();
  b.max = j.at("max").get<double>();
  b.whisker_low = j.at("whisker_low").get<double>();
  b.whisker_high = j.at("whisker_high").get<double>();
  b.outliers = j.at("outliers").get<std::vector<double>>();
  return b;
}

}  // namespace

OJson CellReportToJson(const CellReport& cell) {
  OJson j;
  j["format_version"] = kReportFormatVersion;
  j["year"] = cell.year;
  j["k"] = cell.k;
  j["ok"] = cell.ok;
  j["error_code"] = cell.error_code;
  j["error_message"] = cell.error_message;

  OJson assignment;
  assignment["k"] = cell.assignment.k;
  assignment["names"] = cell.assignment.names;
  assignment["generic_names"] = cell.assignment.generic_names;
  assignment["labels"] = cell.assignment.labels;
  j["assignment"] = assignment;
  j["district_ids"] = cell.district_ids;

  OJson means = OJson::array();
  for (const ClusterMeanRow& row : cell.mean_table) {
    means.push_back(OJson{{"name", row.name},
                          {"count", row.count},
                          {"rates", row.rates},
                          {"overall", row.overall}});
  }
  j["mean_table"] = means;

  j["trained"] = cell.trained;
  OJson metrics;
  metrics["mean"] = ToJson(cell.metrics.mean);
  OJson folds = OJson::array();
  for (const FoldMetrics& f : cell.metrics.per_fold) folds.push_back(ToJson(f));
  metrics["per_fold"] = folds;
  metrics["warnings"] = cell.metrics.warnings;
  j["metrics"] = metrics;
  j["fold_test_rows"] = cell.fold_test_rows;

  j["explained"] = cell.explained;
  j["importance"] = ToJson(cell.importance);
  OJson fold_importance = OJson::array();
  for (const GlobalImportance& g : cell.fold_importance) {
    fold_importance.push_back(ToJson(g));
  }
  j["fold_importance"] = fold_importance;

  j["tested"] = cell.tested;
  OJson tests = OJson::array();
  for (const FeatureComparison& c : cell.tests) tests.push_back(ToJson(c));
  j["tests"] = tests;
  OJson box = OJson::array();
  for (const auto& feature : cell.box) {
    OJson groups = OJson::array();
    for (const BoxSummary& b : feature) groups.push_back(ToJson(b));
    box.push_back(groups);
  }
  j["box"] = box;
  j["crosstab"] = cell.crosstab;
  return j;
}

CellReport CellReportFromJson(const Json& j) {
  try {
    if (j.at("format_version").get<int>() != kReportFormatVersion) {
      throw Error(ErrorCode::kInvalidModel, "unsupported report format");
    }
    CellReport cell;
    cell.year = j.at("year").get<int>();
    cell.k = j.at("k").get<std::size_t>();
    cell.ok = j.at("ok").get<bool>();
    cell.error_code = j.at("error_code").get<std::string>();
    cell.error_message = j.at("error_message").get<std::string>();

    const Json& a = j.at("assignment");
    cell.assignment.k = a.at("k").get<std::size_t>();
    cell.assignment.names = a.at("names").get<std::vector<std::string>>();
    cell.assignment.generic_names = a.at("generic_names").get<bool>();
    cell.assignment.labels = a.at("labels").get<std::vector<int>>();
    cell.district_ids = j.at("district_ids").get<std::vector<std::string>>();

    for (const Json& row : j.at("mean_table")) {
      ClusterMeanRow r;
      r.name = row.at("name").get<std::string>();
      r.count = row.at("count").get<std::size_t>();
      r.rates = row.at("rates").get<std::array<double, kNumVaccines>>();
      r.overall = row.at("overall").get<double>();
      cell.mean_table.push_back(std::move(r));
    }

    cell.trained = j.at("trained").get<bool>();
    const Json& metrics = j.at("metrics");
    cell.metrics.mean = FoldMetricsFrom(metrics.at("mean"));
    for (const Json& f : metrics.at("per_fold")) {
      cell.metrics.per_fold.push_back(FoldMetricsFrom(f));
    }
    cell.metrics.warnings =
        metrics.at("warnings").get<std::vector<std::string>>();
    cell.fold_test_rows =
        j.at("fold_test_rows").get<std::vector<std::vector<std::size_t>>>();

    cell.explained = j.at("explained").get<bool>();
    cell.importance = ImportanceFrom(j.at("importance"));
    for (const Json& g : j.at("fold_importance")) {
      cell.fold_importance.push_back(ImportanceFrom(g));
    }

    cell.tested = j.at("tested").get<bool>();
    for (const Json& c : j.at("tests")) {
      cell.tests.push_back(ComparisonFrom(c));
    }
    for (const Json& feature : j.at("box")) {
      std::vector<BoxSummary> groups;
      for (const Json& b : feature) groups.push_back(BoxFrom(b));
      cell.box.push_back(std::move(groups));
    }
    cell.crosstab = j.at("crosstab").get<CrossTab>();
    return cell;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidModel,
                fmt::format("malformed cell report: {}", e.what()));
  }
}

}  // namespace vaxclust
