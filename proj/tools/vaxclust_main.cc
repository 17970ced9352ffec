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

// Command-line entry point: run, cluster, train, explain, stats, synth,
// report.

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "vaxclust/error.h"
#include "vaxclust/pipeline.h"
#include "vaxclust/synth.h"

namespace {

namespace fs = std::filesystem;
using vaxclust::Error;
using vaxclust::ErrorCode;

struct GlobalFlags {
  std::string config;
  std::optional<uint64_t> seed;
  std::string out;
  bool allow_partial = false;
  std::optional<std::size_t> threads;
};

vaxclust::RunConfig ResolveConfig(const GlobalFlags& flags) {
  if (flags.config.empty()) {
    throw Error(ErrorCode::kConfigError, "--config is required");
  }
  vaxclust::RunConfig config = vaxclust::LoadConfig(flags.config);
  if (flags.seed) {
    config.seed = *flags.seed;
    config.train.seed = *flags.seed;
    std::erase(config.defaulted, "seed");
  }
  if (!flags.out.empty()) config.out_dir = flags.out;
  if (flags.allow_partial) {
    config.allow_partial = true;
    std::erase(config.defaulted, "allow_partial");
  }
  if (flags.threads) config.threads = *flags.threads;
  config.Validate();
  return config;
}

int RunStages(const GlobalFlags& flags, const vaxclust::Stages& stages) {
  const vaxclust::RunConfig config = ResolveConfig(flags);
  const vaxclust::RunReport report = vaxclust::RunPipeline(config, stages);
  vaxclust::WriteArtifacts(report);
  const std::size_t failed = report.failed_cells();
  for (const auto& year : report.years) {
    for (const auto& cell : year.cells) {
      if (!cell.ok) {
        fmt::print(stderr, "cell {} k={} failed: {}\n", cell.year, cell.k,
                   cell.error_message);
      }
    }
  }
  fmt::print(stderr, "wrote {} ({} cell(s) failed)\n",
             config.out_dir.generic_string(), failed);
  return failed > 0 ? vaxclust::kExitCellFailures : vaxclust::kExitOk;
}

struct SynthFlags {
  int year = 2021;
  std::size_t k = 2;
  std::size_t n_per_cluster = 75;
  double vacc_noise_sd = 2.0;
  double gdsc_noise_sd = 4.0;
  bool no_signal = false;
};

int RunSynth(const GlobalFlags& flags, const SynthFlags& synth) {
  vaxclust::SynthSpec spec = vaxclust::DefaultSynthSpec(
      synth.year, synth.k, synth.n_per_cluster, flags.seed.value_or(0));
  spec.vacc_noise_sd = synth.vacc_noise_sd;
  if (synth.gdsc_noise_sd != spec.gdsc_noise_sd) {
    // Keep shifts at two noise standard deviations.
    const double scale = synth.gdsc_noise_sd / spec.gdsc_noise_sd;
    for (auto& offsets : spec.gdsc_shift) {
      for (double& v : offsets) v *= scale;
    }
    spec.gdsc_noise_sd = synth.gdsc_noise_sd;
  }
  if (synth.no_signal) spec = vaxclust::WithoutSignal(spec);
  const vaxclust::SynthData data = vaxclust::Generate(spec);

  const fs::path dir = flags.out.empty() ? fs::path("synth") : fs::path(flags.out);
  fs::create_directories(dir);
  auto write = [&](const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) {
      throw Error(ErrorCode::kIoError,
                  fmt::format("cannot write '{}'", path.generic_string()));
    }
  };
  std::ostringstream vaccination, gdsc, truth;
  vaxclust::WriteVaccinationCsv(vaccination, data.dataset);
  vaxclust::WriteGdscCsv(gdsc, data.dataset);
  vaxclust::WriteTruthCsv(truth, data.dataset, data.truth);
  write(dir / fmt::format("vaccination_{}.csv", synth.year), vaccination.str());
  write(dir / fmt::format("gdsc_{}.csv", synth.year), gdsc.str());
  write(dir / "truth_labels.csv", truth.str());
  write(dir / "run.conf",
        fmt::format("# Generated by `vaxclust synth`.\n"
                    "years = {}\n"
                    "k_values = {}\n"
                    "data_dir = .\n"
                    "out_dir = out\n"
                    "seed = {}\n",
                    synth.year, synth.k, flags.seed.value_or(0)));
  fmt::print(stderr, "wrote {} synthetic districts to {}\n",
             data.dataset.size(), dir.generic_string());
  return vaxclust::kExitOk;
}

// Rebuilds metrics.csv from the report_*.json files under the output dir.
int RunReportCommand(const GlobalFlags& flags) {
  fs::path root = flags.out;
  if (root.empty()) root = ResolveConfig(flags).out_dir;
  if (!fs::is_directory(root)) {
    throw Error(ErrorCode::kIoError,
                fmt::format("no output directory '{}'", root.generic_string()));
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.starts_with("report_") &&
        name.ends_with(".json")) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<vaxclust::CellReport> cells;
  for (const fs::path& path : files) {
    std::ifstream in(path);
    cells.push_back(
        vaxclust::CellReportFromJson(nlohmann::json::parse(in, nullptr, true)));
  }
  if (cells.empty()) {
    throw Error(ErrorCode::kIoError, "no cell reports found");
  }
  const std::string table = vaxclust::EmitMetricsTable(cells);
  std::ofstream out(root / "metrics.csv", std::ios::binary | std::ios::trunc);
  out << table;
  std::cout << table;
  return vaxclust::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"District vaccination-coverage clustering and explanation"};
  app.require_subcommand(1);
  GlobalFlags flags;
  app.add_option("--config", flags.config, "Run configuration file");
  app.add_option("--seed", flags.seed, "Override the configured seed");
  app.add_option("--out", flags.out, "Output directory");
  app.add_flag("--allow-partial", flags.allow_partial,
               "Drop districts missing from one of the two tables");
  app.add_option("--threads", flags.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  app.fallthrough();

  auto* run = app.add_subcommand("run", "Cluster, train, explain and test");
  auto* cluster = app.add_subcommand("cluster", "Clustering outputs only");
  auto* train = app.add_subcommand("train", "Clustering and cross-validation");
  auto* explain =
      app.add_subcommand("explain", "Cross-validation plus SHAP importance");
  auto* stats = app.add_subcommand("stats", "Clustering plus feature tests");
  auto* synth = app.add_subcommand("synth", "Write a synthetic dataset");
  auto* report = app.add_subcommand("report", "Rebuild metrics.csv");

  SynthFlags synth_flags;
  synth->add_option("--year", synth_flags.year, "Study start year");
  synth->add_option("--k", synth_flags.k, "Cluster count (2, 3 or 6)");
  synth->add_option("--n-per-cluster", synth_flags.n_per_cluster,
                    "Districts per cluster");
  synth->add_option("--vacc-noise-sd", synth_flags.vacc_noise_sd,
                    "Vaccination noise sd (percentage points)");
  synth->add_option("--gdsc-noise-sd", synth_flags.gdsc_noise_sd,
                    "GDSC noise sd");
  synth->add_flag("--no-signal", synth_flags.no_signal,
                  "Zero the GDSC cluster shifts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? vaxclust::kExitOk : vaxclust::kExitConfig;
  }

  try {
    if (*run) return RunStages(flags, {true, true, true});
    if (*cluster) return RunStages(flags, {false, false, false});
    if (*train) return RunStages(flags, {true, false, false});
    if (*explain) return RunStages(flags, {true, true, false});
    if (*stats) return RunStages(flags, {false, false, true});
    if (*synth) return RunSynth(flags, synth_flags);
    if (*report) return RunReportCommand(flags);
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return vaxclust::IsDataError(e.code()) ? vaxclust::kExitData
                                           : vaxclust::kExitConfig;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return vaxclust::kExitData;
  }
  return vaxclust::kExitOk;
}
