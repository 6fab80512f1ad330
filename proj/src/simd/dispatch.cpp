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

#include <cstdlib>
#include <string_view>

#include <spdlog/spdlog.h>

#include "georeg/simd/kernels.hpp"

namespace georeg::simd {

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
  }
  return "unknown";
}

Isa detect_isa() noexcept {
#if defined(GEOREG_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  if (__builtin_cpu_supports("avx2")) return Isa::kAvx2;
#endif
  return Isa::kScalar;
}

const KernelTable* kernels_for(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar:
      return &detail::scalar_table();
    case Isa::kAvx2:
#if defined(GEOREG_HAVE_AVX2)
      if (detect_isa() == Isa::kAvx2) return &detail::avx2_table();
#endif
      return nullptr;
  }
  return nullptr;
}

const KernelTable& kernels() {
  static const KernelTable& table = []() -> const KernelTable& {
    Isa want = detect_isa();
    if (const char* env = std::getenv("GEOREG_SIMD")) {
      const std::string_view v(env);
      if (v == "scalar") want = Isa::kScalar;
      else if (v == "avx2") want = Isa::kAvx2;
    }
    const KernelTable* t = kernels_for(want);
    if (t == nullptr) t = &detail::scalar_table();
    spdlog::debug("simd kernels: {}", isa_name(t->isa));
    return *t;
  }();
  return table;
}

}  // namespace georeg::simd
