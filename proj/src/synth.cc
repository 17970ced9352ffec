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

#include "vaxclust/synth.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "vaxclust/csv.h"
#include "vaxclust/error.h"
#include "vaxclust/fixtures.h"
#include "vaxclust/rng.h"

namespace vaxclust {
namespace {

constexpr std::array<double, kNumGdscNumeric> kDefaultBaseline = {
    22.0, 20.0, 10.0, 25.0, 18.0, 8.0, 15.0, 14.0};

constexpr std::array<double, kMaxRurality> kUrbanWeights = {
    0.90, 0.04, 0.03, 0.01, 0.01, 0.01};
constexpr std::array<double, kMaxRurality> kMixedWeights = {
    0.15, 0.10, 0.20, 0.15, 0.20, 0.20};

constexpr std::array<std::size_t, 3> kSignalFeatures = {
    kEnglishProficiency, kEthnicMinority, kBornOutsideUk};

double Round(double value) {
  const double scale = std::pow(10.0, kSynthDecimals);
  return std::round(value * scale) / scale;
}

double Clamp(double value, double upper) {
  return std::clamp(value, 0.0, upper);
}

}  // namespace

std::size_t SynthSpec::total() const {
  return std::accumulate(n_per_cluster.begin(), n_per_cluster.end(),
                         std::size_t{0});
}

void SynthSpec::Validate() const {
  auto fail = [](const std::string& message) {
    throw Error(ErrorCode::kSpecInvalid, message);
  };
  if (k < 2) fail(fmt::format("k must be at least 2, got {}", k));
  if (cluster_means.size() != k || n_per_cluster.size() != k ||
      gdsc_shift.size() != k || rurality_weights.size() != k) {
    fail(fmt::format("per-cluster fields must all have {} entries", k));
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (n_per_cluster[c] < 2) {
      fail(fmt::format("cluster {} needs at least 2 districts", c));
    }
    for (double rate : cluster_means[c].rates) {
      if (!(rate >= 0.0 && rate <= 100.0)) {
        fail(fmt::format("cluster {} mean {} outside [0, 100]", c, rate));
      }
    }
    double weight_sum = 0.0;
    for (double w : rurality_weights[c]) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        fail(fmt::format("cluster {} has an invalid rurality weight", c));
      }
      weight_sum += w;
    }
    if (weight_sum <= 0.0) {
      fail(fmt::format("cluster {} rurality weights sum to 0", c));
    }
    for (double s : gdsc_shift[c]) {
      if (!std::isfinite(s)) fail("non-finite GDSC shift");
    }
  }
  if (!(vacc_noise_sd >= 0.0) || !(gdsc_noise_sd >= 0.0) ||
      !std::isfinite(vacc_noise_sd) || !std::isfinite(gdsc_noise_sd)) {
    fail("noise standard deviations must be finite and >= 0");
  }
  if (total() > 9999) fail("at most 9999 districts");
}

SynthSpec DefaultSynthSpec(int year, std::size_t k, std::size_t n_per_cluster,
                           uint64_t seed) {
  SynthSpec spec;
  spec.year = YearKey{year};
  spec.k = k;
  spec.seed = seed;
  spec.gdsc_baseline = kDefaultBaseline;
  for (const PublishedMeansRow& row : PublishedMeansBlock(year, static_cast<int>(k))) {
    spec.cluster_means.push_back(row.Profile());
  }
  if (spec.cluster_means.size() != k) {
    throw Error(ErrorCode::kSpecInvalid,
                fmt::format("published means block for k = {} has {} rows", k,
                            spec.cluster_means.size()));
  }
  spec.n_per_cluster.assign(k, n_per_cluster);
  const double shift = 2.0 * spec.gdsc_noise_sd;
  for (std::size_t c = 0; c < k; ++c) {
    // 1 for the lowest-coverage cluster, 0 for the highest.
    const double t =
        static_cast<double>(k - 1 - c) / static_cast<double>(k - 1);
    std::array<double, kNumGdscNumeric> offsets{};
    for (std::size_t f : kSignalFeatures) offsets[f] = t * shift;
    spec.gdsc_shift.push_back(offsets);
    std::array<double, kMaxRurality> weights{};
    for (std::size_t r = 0; r < weights.size(); ++r) {
      weights[r] = t * kUrbanWeights[r] + (1.0 - t) * kMixedWeights[r];
    }
    spec.rurality_weights.push_back(weights);
  }
  return spec;
}

SynthSpec WithoutSignal(SynthSpec spec) {
  for (auto& offsets : spec.gdsc_shift) offsets.fill(0.0);
  for (auto& weights : spec.rurality_weights) weights = kMixedWeights;
  return spec;
}

SynthData Generate(const SynthSpec& spec) {
  spec.Validate();
  Rng rng(spec.seed);
  SynthData out;
  out.dataset.year = spec.year;
  std::size_t index = 0;
  for (std::size_t c = 0; c < spec.k; ++c) {
    for (std::size_t i = 0; i < spec.n_per_cluster[c]; ++i) {
      ++index;
      DistrictRow row;
      row.id = fmt::format("S{:04d}", index);
      row.name = fmt::format("Synthetic District {}", index);
      for (std::size_t v = 0; v < kNumVaccines; ++v) {
        const double draw = rng.Normal(0.0, spec.vacc_noise_sd);
        row.vaccination.rates[v] =
            Round(Clamp(spec.cluster_means[c].rates[v] + draw, 100.0));
      }
      for (std::size_t f = 0; f < kNumGdscNumeric; ++f) {
        const double draw = rng.Normal(0.0, spec.gdsc_noise_sd);
        const double upper = f == kImdAvgScore
                                 ? std::numeric_limits<double>::max()
                                 : 100.0;
        row.gdsc.numeric[f] = Round(Clamp(
            spec.gdsc_baseline[f] + spec.gdsc_shift[c][f] + draw, upper));
      }
      row.gdsc.rurality = kMinRurality + static_cast<int>(rng.Categorical(
                                             spec.rurality_weights[c]));
      out.dataset.rows.push_back(std::move(row));
      out.truth.push_back(static_cast<int>(c));
    }
  }
  return out;
}

void WriteVaccinationCsv(std::ostream& out, const YearDataset& dataset) {
  std::vector<std::string> header = {std::string(kDistrictIdColumn),
                                     std::string(kDistrictNameColumn)};
  for (std::string_view v : kVaccineColumns) header.emplace_back(v);
  csv::WriteRow(out, header);
  for (const DistrictRow& row : dataset.rows) {
    std::vector<std::string> fields = {row.id, row.name};
    for (double rate : row.vaccination.rates) {
      fields.push_back(csv::FormatDouble(rate));
    }
    csv::WriteRow(out, fields);
  }
}

void WriteGdscCsv(std::ostream& out, const YearDataset& dataset) {
  std::vector<std::string> header = {std::string(kDistrictIdColumn)};
  for (std::string_view f : kGdscNumericColumns) header.emplace_back(f);
  header.emplace_back(kRuralityColumn);
  csv::WriteRow(out, header);
  for (const DistrictRow& row : dataset.rows) {
    std::vector<std::string> fields = {row.id};
    for (double value : row.gdsc.numeric) {
      fields.push_back(csv::FormatDouble(value));
    }
    fields.push_back(std::to_string(row.gdsc.rurality));
    csv::WriteRow(out, fields);
  }
}

void WriteTruthCsv(std::ostream& out, const YearDataset& dataset,
                   std::span<const int> truth) {
  csv::WriteRow(out, {std::string(kDistrictIdColumn), "cluster"});
  for (std::size_t r = 0; r < dataset.size() && r < truth.size(); ++r) {
    csv::WriteRow(out, {dataset.rows[r].id, std::to_string(truth[r])});
  }
}

}  // namespace vaxclust
