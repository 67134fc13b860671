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

#ifndef V2G_ERROR_H_
#define V2G_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace v2g {

// Every failure raised by the library carries one of these codes so callers
// (notably the CLI) can branch on the kind of failure without parsing text.
enum class ErrorCode {
  kInvalidArgument,
  kIoFailure,
  kMagicMismatch,
  kTruncatedFile,
  kNonFiniteValue,
  kFormatError,
  kBadHeader,
  kUnsupportedMaxval,
  kNoMatch,
  kDegenerateTrack,
  kInfeasibleMinLen,
  kPopularityOutOfRange,
  kDimMismatch,
  kStaleCache,
  kCategoryOutOfRange,
  kNoLabeledSegments,
  kNonFiniteLoss,
  kUnreachableRecall,
  kNoPositives,
  kInsufficientCreators,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace v2g

#endif  // V2G_ERROR_H_
