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

#include "vaxclust/error.h"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <utility>

namespace vaxclust {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kMalformedCell: return "MalformedCell";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kRuralityOutOfDomain: return "RuralityOutOfDomain";
    case ErrorCode::kDuplicateDistrict: return "DuplicateDistrict";
    case ErrorCode::kEmptyTable: return "EmptyTable";
    case ErrorCode::kJoinMismatch: return "JoinMismatch";
    case ErrorCode::kTooFewRows: return "TooFewRows";
    case ErrorCode::kNonFiniteInput: return "NonFiniteInput";
    case ErrorCode::kKOutOfRange: return "KOutOfRange";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kDegenerateLabels: return "DegenerateLabels";
    case ErrorCode::kNonFiniteFeature: return "NonFiniteFeature";
    case ErrorCode::kFeatureArityMismatch: return "FeatureArityMismatch";
    case ErrorCode::kInvalidModel: return "InvalidModel";
    case ErrorCode::kMissingCover: return "MissingCover";
    case ErrorCode::kTooManyFeatures: return "TooManyFeatures";
    case ErrorCode::kEmptySample: return "EmptySample";
    case ErrorCode::kKFoldsOutOfRange: return "KFoldsOutOfRange";
    case ErrorCode::kLabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptyMatrix: return "EmptyMatrix";
    case ErrorCode::kEmptyGroup: return "EmptyGroup";
    case ErrorCode::kSpecInvalid: return "SpecInvalid";
    case ErrorCode::kGeometryKeyMismatch: return "GeometryKeyMismatch";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

bool IsDataError(ErrorCode code) {
  return code != ErrorCode::kConfigError && code != ErrorCode::kInvalidConfig;
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(fmt::format("{}: {}", ErrorCodeName(code), message)),
      code_(code) {}

JoinMismatchError::JoinMismatchError(std::vector<std::string> left_only,
                                     std::vector<std::string> right_only)
    : Error(ErrorCode::kJoinMismatch,
            fmt::format("only in vaccination table: [{}]; only in gdsc "
                        "table: [{}]",
                        fmt::join(left_only, ", "),
                        fmt::join(right_only, ", "))),
      left_only_(std::move(left_only)),
      right_only_(std::move(right_only)) {}

GeometryKeyMismatchError::GeometryKeyMismatchError(
    std::vector<std::string> missing_ids)
    : Error(ErrorCode::kGeometryKeyMismatch,
            fmt::format("no geometry for district ids: [{}]",
                        fmt::join(missing_ids, ", "))),
      missing_ids_(std::move(missing_ids)) {}

}  // namespace vaxclust
