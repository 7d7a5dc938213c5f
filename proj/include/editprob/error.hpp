// Copyright 2026 The editprob Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace editprob {

enum class ErrorCode {
  kNegativeEntry,
  kBadSum,
  kDimensionMismatch,
  kIndexOutOfRange,
  kInvalidChain,
  kZeroProbability,
  kTooLarge,
  kNonPositiveEntry,
  kWordContainsEos,
  kLambdaOutOfRange,
  kEmptyLexicon,
  kDivergedLoss,
  kInvalidArgument,
  kParseError,
};

const char* errorCodeName(ErrorCode code);

/**
 * Every failure raised by the library carries one of the codes above so
 * callers (the CLI in particular) can map them to exit statuses.
 */
class EpError : public std::runtime_error {
 public:
  EpError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(errorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept {
    return code_;
  }

 private:
  ErrorCode code_;
};

} // namespace editprob
