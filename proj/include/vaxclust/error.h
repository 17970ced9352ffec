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

#ifndef VAXCLUST_ERROR_H_
#define VAXCLUST_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vaxclust {

enum class ErrorCode {
  // Ingestion.
  kMissingColumn,
  kMalformedCell,
  kOutOfRange,
  kRuralityOutOfDomain,
  kDuplicateDistrict,
  kEmptyTable,
  kJoinMismatch,
  kTooFewRows,
  // Clustering.
  kNonFiniteInput,
  kKOutOfRange,
  // Boosting.
  kInvalidConfig,
  kDegenerateLabels,
  kNonFiniteFeature,
  kFeatureArityMismatch,
  kInvalidModel,
  // Attribution.
  kMissingCover,
  kTooManyFeatures,
  kEmptySample,
  // Evaluation.
  kKFoldsOutOfRange,
  kLabelOutOfRange,
  kLengthMismatch,
  kEmptyMatrix,
  // Statistics.
  kEmptyGroup,
  // Synthetic data.
  kSpecInvalid,
  // Pipeline.
  kGeometryKeyMismatch,
  kConfigError,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

// True for errors caused by input data rather than configuration.
bool IsDataError(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// District ids present in only one of the two joined tables.
class JoinMismatchError : public Error {
 public:
  JoinMismatchError(std::vector<std::string> left_only,
                    std::vector<std::string> right_only);

  const std::vector<std::string>& left_only() const { return left_only_; }
  const std::vector<std::string>& right_only() const { return right_only_; }

 private:
  std::vector<std::string> left_only_;
  std::vector<std::string> right_only_;
};

class GeometryKeyMismatchError : public Error {
 public:
  explicit GeometryKeyMismatchError(std::vector<std::string> missing_ids);

  const std::vector<std::string>& missing_ids() const { return missing_ids_; }

 private:
  std::vector<std::string> missing_ids_;
};

}  // namespace vaxclust

#endif  // VAXCLUST_ERROR_H_
