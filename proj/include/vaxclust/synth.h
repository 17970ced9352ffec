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

#ifndef VAXCLUST_SYNTH_H_
#define VAXCLUST_SYNTH_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "vaxclust/dataset.h"

namespace vaxclust {

// Generated values are rounded to this many decimals so the CSV text
// round-trips exactly.
inline constexpr int kSynthDecimals = 4;

struct SynthSpec {
  YearKey year{2021};
  std::size_t k = 2;
  // Cluster c is the c-th lowest-coverage cluster.
  std::vector<VaccinationProfile> cluster_means;
  std::vector<std::size_t> n_per_cluster;
  double vacc_noise_sd = 2.0;

  std::array<double, kNumGdscNumeric> gdsc_baseline{};
  double gdsc_noise_sd = 4.0;
  std::vector<std::array<double, kNumGdscNumeric>> gdsc_shift;  // [cluster]
  std::vector<std::array<double, kMaxRurality>> rurality_weights;  // [cluster]
  uint64_t seed = 0;

  std::size_t total() const;
  // Throws kSpecInvalid.
  void Validate() const;
};

// Cluster means from the embedded published means for (year, k), which must
// exist (k in {2, 3, 6}, years 2021-2023). Signal features
// (english_proficiency, ethnic_minority, born_outside_uk) sit
// 2 * gdsc_noise_sd higher in the lowest cluster, scaled linearly to 0 at the
// highest; the lowest cluster is mostly rurality 1.
SynthSpec DefaultSynthSpec(int year = 2021, std::size_t k = 2,
                           std::size_t n_per_cluster = 75, uint64_t seed = 0);

// Same spec with every GDSC shift zeroed and one rurality distribution for
// all clusters.
SynthSpec WithoutSignal(SynthSpec spec);

struct SynthData {
  YearDataset dataset;
  std::vector<int> truth;  // cluster per row
};

// Rows are generated cluster by cluster; ids "S0001", ... follow generation
// order. Per row the draws are: 14 vaccination normals, 8 GDSC normals, one
// rurality category, all from one Rng(seed) stream. Values are clamped
// (rates and percentages to [0, 100], imd_avg_score to >= 0) and rounded.
SynthData Generate(const SynthSpec& spec);

// Same layouts ParseVaccinationTable / ParseGdscTable read.
void WriteVaccinationCsv(std::ostream& out, const YearDataset& dataset);
void WriteGdscCsv(std::ostream& out, const YearDataset& dataset);
// district_id,cluster
void WriteTruthCsv(std::ostream& out, const YearDataset& dataset,
                   std::span<const int> truth);

}  // namespace vaxclust

#endif  // VAXCLUST_SYNTH_H_
