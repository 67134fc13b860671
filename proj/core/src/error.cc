/*
 * Copyright 2026 The v2g Authors.
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

#include "v2g/error.h"

namespace v2g {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kMagicMismatch: return "MagicMismatch";
    case ErrorCode::kTruncatedFile: return "TruncatedFile";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kFormatError: return "FormatError";
    case ErrorCode::kBadHeader: return "BadHeader";
    case ErrorCode::kUnsupportedMaxval: return "UnsupportedMaxval";
    case ErrorCode::kNoMatch: return "NoMatch";
    case ErrorCode::kDegenerateTrack: return "DegenerateTrack";
    case ErrorCode::kInfeasibleMinLen: return "InfeasibleMinLen";
    case ErrorCode::kPopularityOutOfRange: return "PopularityOutOfRange";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kStaleCache: return "StaleCache";
    case ErrorCode::kCategoryOutOfRange: return "CategoryOutOfRange";
    case ErrorCode::kNoLabeledSegments: return "NoLabeledSegments";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kUnreachableRecall: return "UnreachableRecall";
    case ErrorCode::kNoPositives: return "NoPositives";
    case ErrorCode::kInsufficientCreators: return "InsufficientCreators";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace v2g
