// Copyright 2026-present the dwell project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <cstring>

#include "kernels_impl.hpp"

namespace dwell::kernels {
namespace {

const Ops kScalarOps = {
    "scalar",
    &scalar::sum_squares,
    &scalar::weighted_displacement_sum,
    &scalar::bath_energy_sum,
    &scalar::bath_rates,
    &scalar::stage_state,
    &scalar::linear_combination,
    &scalar::error_sums,
};

#if defined(DWELL_HAVE_AVX2)
const Ops kAvx2Ops = {
    "avx2",
    &avx2::sum_squares,
    &avx2::weighted_displacement_sum,
    &avx2::bath_energy_sum,
    &avx2::bath_rates,
    &avx2::stage_state,
    &avx2::linear_combination,
    &avx2::error_sums,
};

bool cpu_has_avx2_fma() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

const Ops& resolve() {
  const char* pref = std::getenv("DWELL_SIMD");
#if defined(DWELL_HAVE_AVX2)
  if (pref != nullptr && std::strcmp(pref, "scalar") == 0) return kScalarOps;
  if (pref != nullptr && std::strcmp(pref, "avx2") == 0) {
    return cpu_has_avx2_fma() ? kAvx2Ops : kScalarOps;
  }
  return cpu_has_avx2_fma() ? kAvx2Ops : kScalarOps;
#else
  (void)pref;
  return kScalarOps;
#endif
}

}  // namespace

const Ops& ops() {
  static const Ops& selected = resolve();
  return selected;
}

const char* active_impl() { return ops().name; }

const Ops& scalar_ops() { return kScalarOps; }

const Ops* avx2_ops() {
#if defined(DWELL_HAVE_AVX2)
  return cpu_has_avx2_fma() ? &kAvx2Ops : nullptr;
#else
  return nullptr;
#endif
}

}  // namespace dwell::kernels
