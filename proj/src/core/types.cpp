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

#include "georeg/core/types.hpp"

namespace georeg {

void PointCloud::validate() const {
  if (!classes.empty() && classes.size() != points.size()) {
    throw Error(ErrorCode::kInvalidArgument, "class list length differs from point count");
  }
  if (!intensity.empty() && intensity.size() != points.size()) {
    throw Error(ErrorCode::kInvalidArgument, "intensity list length differs from point count");
  }
  for (const Point3& p : points) {
    if (!p.allFinite()) throw Error(ErrorCode::kInvalidArgument, "non-finite point coordinate");
  }
}

}  // namespace georeg
