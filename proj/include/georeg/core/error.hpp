// Copyright 2026 The georeg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace georeg {

enum class ErrorCode {
  kEmptyCloud,
  kNoGroundPoints,
  kPointAtInfinity,
  kNotThreeBands,
  kResolutionMismatch,
  kNoOverlap,
  kTooFewPoints,
  kDegenerateInput,
  kNoMutualPairs,
  kNoConsensus,
  kDegenerateConfiguration,
  kNonConvergence,
  kUndefinedMetric,
  kEmptyList,
  kZeroBefore,
  kSpecInfeasible,
  kIo,
  kParse,
  kConfig,
  kInvalidArgument,
};

std::string_view error_code_name(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so the
// CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code),
        detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  // Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace georeg
