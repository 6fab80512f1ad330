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

#include "georeg/core/error.hpp"

namespace georeg {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kEmptyCloud: return "EmptyCloud";
    case ErrorCode::kNoGroundPoints: return "NoGroundPoints";
    case ErrorCode::kPointAtInfinity: return "PointAtInfinity";
    case ErrorCode::kNotThreeBands: return "NotThreeBands";
    case ErrorCode::kResolutionMismatch: return "ResolutionMismatch";
    case ErrorCode::kNoOverlap: return "NoOverlap";
    case ErrorCode::kTooFewPoints: return "TooFewPoints";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kNoMutualPairs: return "NoMutualPairs";
    case ErrorCode::kNoConsensus: return "NoConsensus";
    case ErrorCode::kDegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorCode::kNonConvergence: return "NonConvergence";
    case ErrorCode::kUndefinedMetric: return "UndefinedMetric";
    case ErrorCode::kEmptyList: return "EmptyList";
    case ErrorCode::kZeroBefore: return "ZeroBefore";
    case ErrorCode::kSpecInfeasible: return "SpecInfeasible";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace georeg
