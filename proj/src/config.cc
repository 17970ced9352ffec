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

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "vaxclust/error.h"
#include "vaxclust/pipeline.h"

namespace vaxclust {
namespace {

[[noreturn]] void Fail(int line, const std::string& message) {
  throw Error(ErrorCode::kConfigError,
              line > 0 ? fmt::format("line {}: {}", line, message) : message);
}

std::string Trim(std::string_view text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return std::string(text.substr(begin, end - begin + 1));
}

std::vector<std::string> SplitList(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) items.push_back(Trim(item));
  return items;
}

template <typename T>
T ParseNumber(const std::string& text, int line, std::string_view key) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    Fail(line, fmt::format("'{}' is not a valid value for {}", text, key));
  }
  return value;
}

bool ParseBool(const std::string& text, int line, std::string_view key) {
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  Fail(line, fmt::format("'{}' is not a boolean for {}", text, key));
}

// Keys with a per-year suffix: vaccination_<year>, gdsc_<year>.
bool ParseYearKey(const std::string& key, std::string_view prefix,
                  int* year) {
  if (key.size() <= prefix.size() || key.compare(0, prefix.size(), prefix)) {
    return false;
  }
  const std::string digits = key.substr(prefix.size());
  const char* end = digits.data() + digits.size();
  const auto [ptr, ec] = std::from_chars(digits.data(), end, *year);
  return ec == std::errc() && ptr == end;
}

const std::vector<std::string>& ScalarKeys() {
  static const std::vector<std::string> keys = {
      "years",        "k_values",     "linkage",
      "scaling",      "n_trees",      "depth",
      "learning_rate", "l2_leaf_reg", "ts_prior_weight",
      "n_permutations", "border_count", "k_folds",
      "stratified",   "seed",         "suggest_k_min",
      "suggest_k_max", "out_dir",     "data_dir",
      "geometry",     "allow_partial", "save_models",
      "export_attributions", "threads"};
  return keys;
}

}  // namespace

std::filesystem::path RunConfig::VaccinationPath(int year) const {
  const auto it = vaccination_paths.find(year);
  if (it != vaccination_paths.end()) return it->second;
  return data_dir / fmt::format("vaccination_{}.csv", year);
}

std::filesystem::path RunConfig::GdscPath(int year) const {
  const auto it = gdsc_paths.find(year);
  if (it != gdsc_paths.end()) return it->second;
  return data_dir / fmt::format("gdsc_{}.csv", year);
}

void RunConfig::Validate() const {
  if (years.empty()) Fail(0, "years must list at least one study year");
  if (k_values.empty()) Fail(0, "k_values must not be empty");
  for (std::size_t k : k_values) {
    if (k < 2) Fail(0, fmt::format("k_values entry {} is below 2", k));
  }
  if (std::set<int>(years.begin(), years.end()).size() != years.size()) {
    Fail(0, "years contains duplicates");
  }
  if (std::set<std::size_t>(k_values.begin(), k_values.end()).size() !=
      k_values.size()) {
    Fail(0, "k_values contains duplicates");
  }
  if (k_folds < 2) Fail(0, "k_folds must be at least 2");
  if (threads < 1) Fail(0, "threads must be at least 1");
  if (suggest_k_min < 2 || suggest_k_max <= suggest_k_min) {
    Fail(0, "need 2 <= suggest_k_min < suggest_k_max");
  }
  try {
    train.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfigError, e.what());
  }
}

RunConfig ParseConfig(std::istream& in) {
  RunConfig config;
  std::set<std::string> seen;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = Trim(raw.substr(0, raw.find('#')));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      Fail(line, fmt::format("expected 'key = value', got '{}'", text));
    }
    const std::string key = Trim(text.substr(0, eq));
    const std::string value = Trim(text.substr(eq + 1));
    if (!seen.insert(key).second) {
      Fail(line, fmt::format("key '{}' repeated", key));
    }

    int year = 0;
    if (key == "years") {
      config.years.clear();
      for (const auto& item : SplitList(value)) {
        config.years.push_back(ParseNumber<int>(item, line, key));
      }
    } else if (key == "k_values") {
      config.k_values.clear();
      for (const auto& item : SplitList(value)) {
        config.k_values.push_back(ParseNumber<std::size_t>(item, line, key));
      }
    } else if (key == "linkage") {
      try {
        config.linkage = ParseLinkage(value);
      } catch (const Error& e) {
        Fail(line, e.what());
      }
    } else if (key == "scaling") {
      if (value != "zscore" && value != "raw") {
        Fail(line, fmt::format("scaling must be zscore or raw, got '{}'",
                               value));
      }
      config.scaled = value == "zscore";
    } else if (key == "n_trees") {
      config.train.n_trees = ParseNumber<int>(value, line, key);
    } else if (key == "depth") {
      config.train.depth = ParseNumber<int>(value, line, key);
    } else if (key == "learning_rate") {
      config.train.learning_rate = ParseNumber<double>(value, line, key);
    } else if (key == "l2_leaf_reg") {
      config.train.l2_leaf_reg = ParseNumber<double>(value, line, key);
    } else if (key == "ts_prior_weight") {
      config.train.ts_prior_weight = ParseNumber<double>(value, line, key);
    } else if (key == "n_permutations") {
      config.train.n_permutations = ParseNumber<int>(value, line, key);
    } else if (key == "border_count") {
      config.train.border_count = ParseNumber<int>(value, line, key);
    } else if (key == "k_folds") {
      config.k_folds = ParseNumber<std::size_t>(value, line, key);
    } else if (key == "stratified") {
      config.stratified = ParseBool(value, line, key);
    } else if (key == "seed") {
      config.seed = ParseNumber<uint64_t>(value, line, key);
    } else if (key == "suggest_k_min") {
      config.suggest_k_min = ParseNumber<std::size_t>(value, line, key);
    } else if (key == "suggest_k_max") {
      config.suggest_k_max = ParseNumber<std::size_t>(value, line, key);
    } else if (key == "out_dir") {
      config.out_dir = value;
    } else if (key == "data_dir") {
      config.data_dir = value;
    } else if (key == "geometry") {
      config.geometry = value;
    } else if (key == "allow_partial") {
      config.allow_partial = ParseBool(value, line, key);
    } else if (key == "save_models") {
      config.save_models = ParseBool(value, line, key);
    } else if (key == "export_attributions") {
      config.export_attributions = ParseBool(value, line, key);
    } else if (key == "threads") {
      config.threads = ParseNumber<std::size_t>(value, line, key);
    } else if (ParseYearKey(key, "vaccination_", &year)) {
      config.vaccination_paths[year] = value;
    } else if (ParseYearKey(key, "gdsc_", &year)) {
      config.gdsc_paths[year] = value;
    } else {
      Fail(line, fmt::format("unknown key '{}'", key));
    }
  }
  for (const std::string& key : ScalarKeys()) {
    if (!seen.contains(key) && key != "threads" && key != "out_dir") {
      config.defaulted.push_back(key);
    }
  }
  config.train.seed = config.seed;
  config.Validate();
  return config;
}

RunConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kConfigError,
                fmt::format("cannot read config file '{}'", path.string()));
  }
  RunConfig config = ParseConfig(in);
  // Relative paths are taken relative to the config file.
  const std::filesystem::path base = path.parent_path();
  auto resolve = [&](std::filesystem::path& p) {
    if (!p.empty() && p.is_relative()) p = base / p;
  };
  resolve(config.data_dir);
  resolve(config.geometry);
  resolve(config.out_dir);
  for (auto& [year, p] : config.vaccination_paths) resolve(p);
  for (auto& [year, p] : config.gdsc_paths) resolve(p);
  return config;
}

nlohmann::ordered_json ConfigEcho(const RunConfig& config) {
  nlohmann::ordered_json echo;
  echo["years"] = config.years;
  echo["k_values"] = config.k_values;
  echo["linkage"] = std::string(LinkageName(config.linkage));
  echo["distance"] = "euclidean";
  echo["scaling"] = config.scaled ? "zscore" : "raw";
  echo["suggest_k_min"] = config.suggest_k_min;
  echo["suggest_k_max"] = config.suggest_k_max;
  nlohmann::ordered_json train;
  train["n_trees"] = config.train.n_trees;
  train["depth"] = config.train.depth;
  train["learning_rate"] = config.train.learning_rate;
  train["l2_leaf_reg"] = config.train.l2_leaf_reg;
  train["ts_prior_weight"] = config.train.ts_prior_weight;
  train["n_permutations"] = config.train.n_permutations;
  train["border_count"] = config.train.border_count;
  train["loss"] = "binary_logistic for k = 2, multiclass_softmax otherwise";
  train["categorical_features"] = {"rurality"};
  echo["train"] = train;
  echo["k_folds"] = config.k_folds;
  echo["stratified"] = config.stratified;
  echo["fold_seed"] = "seed xor fold_index";
  echo["seed"] = config.seed;
  echo["metrics_averaging"] = "macro over classes, mean over folds";
  echo["shap"] = "path-dependent TreeSHAP on held-out fold rows, fold mean";
  echo["shap_multiclass_aggregation"] = "mean over classes of mean |phi|";
  echo["test"] = "two-sided Mann-Whitney U (exact for n <= 20); Welch t";
  echo["test_groups"] = "k = 2: L vs H; k > 2: lowest cluster vs rest";
  echo["quartiles"] = "linear interpolation, h = (n - 1) q";
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  for (int year : config.years) {
    inputs[std::to_string(year)] = {
        {"vaccination", config.VaccinationPath(year).generic_string()},
        {"gdsc", config.GdscPath(year).generic_string()}};
  }
  echo["inputs"] = inputs;
  echo["geometry"] = config.geometry.generic_string();
  echo["allow_partial"] = config.allow_partial;
  echo["save_models"] = config.save_models;
  echo["export_attributions"] = config.export_attributions;
  echo["defaulted"] = config.defaulted;
  return echo;
}

}  // namespace vaxclust
