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

#pragma once

#include <cmath>
#include <cstddef>

// Data-parallel inner loops of the simulator: bath reductions, bath rate
// updates, Runge-Kutta stage arithmetic, and the step error norm.
//
// Two implementations exist behind one function-pointer table: a scalar
// reference ("scalar") and an AVX2+FMA variant ("avx2") selected at runtime
// from CPU capabilities. DWELL_SIMD=scalar|avx2|auto overrides the choice.
// Elementwise kernels are bit-identical across implementations (both sides
// round through the same operation sequence, fma included); reductions use
// Neumaier compensation on every path and agree to a few ulp.

namespace dwell::kernels {

/// Compensated accumulator (Neumaier variant of Kahan summation) for
/// incremental host-side sums; the array kernels below use the same scheme.
struct NeumaierSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }

  double value() const { return sum + comp; }
};

/// sum_i x_i^2
using SumSquaresFn = double (*)(const double* x, std::size_t n);

/// sum_i w2_i * (q_i - q_ref)
using WeightedDispSumFn = double (*)(const double* w2, const double* q,
                                     double q_ref, std::size_t n);

/// sum_i [ p_i^2/(2m) + (m/2) * w2_i * (q_i - q_ref)^2 ]
using BathEnergySumFn = double (*)(const double* w2, const double* q,
                                   const double* p, double q_ref, double m,
                                   std::size_t n);

/// dq_i = p_i * (1/m);  dp_i = -m * (w2_i * (q_i - q_ref))
using BathRatesFn = void (*)(const double* w2, const double* q,
                             const double* p, double q_ref, double m,
                             double* dq, double* dp, std::size_t n);

/// out_i = y_i + h * (c_0*k_0[i] + ... + c_{nk-1}*k_{nk-1}[i]), fma-chained
using StageStateFn = void (*)(const double* y, const double* const* k,
                              const double* c, int nk, double h, double* out,
                              std::size_t n);

/// out_i = c_0*k_0[i] + ... + c_{nk-1}*k_{nk-1}[i], fma-chained
using LinearCombinationFn = void (*)(const double* const* k, const double* c,
                                     int nk, double* out, std::size_t n);

/// Scaled squared sums of the two embedded error estimates:
///   s5 = sum_i (e5_i/sc_i)^2,  s3 = sum_i (e3_i/sc_i)^2,
/// with sc_i = atol + rtol*max(|y0_i|, |y1_i|). The caller combines them
/// into the stretched error norm |h| * s5 / sqrt((s5 + 0.01 s3) * n).
struct ErrorSums {
  double s5;
  double s3;
};
using ErrorSumsFn = ErrorSums (*)(const double* e5, const double* e3,
                                  const double* y0, const double* y1,
                                  double atol, double rtol, std::size_t n);

struct Ops {
  const char* name;
  SumSquaresFn sum_squares;
  WeightedDispSumFn weighted_displacement_sum;
  BathEnergySumFn bath_energy_sum;
  BathRatesFn bath_rates;
  StageStateFn stage_state;
  LinearCombinationFn linear_combination;
  ErrorSumsFn error_sums;
};

/// Table in use by the process (resolved once, thread-safe).
const Ops& ops();

/// Name of the selected implementation ("scalar" or "avx2").
const char* active_impl();

/// Reference table, always available.
const Ops& scalar_ops();

/// AVX2 table, or nullptr when the CPU (or build) lacks AVX2+FMA.
const Ops* avx2_ops();

inline double sum_squares(const double* x, std::size_t n) {
  return ops().sum_squares(x, n);
}
inline double weighted_displacement_sum(const double* w2, const double* q,
                                        double q_ref, std::size_t n) {
  return ops().weighted_displacement_sum(w2, q, q_ref, n);
}
inline double bath_energy_sum(const double* w2, const double* q,
                              const double* p, double q_ref, double m,
                              std::size_t n) {
  return ops().bath_energy_sum(w2, q, p, q_ref, m, n);
}
inline void bath_rates(const double* w2, const double* q, const double* p,
                       double q_ref, double m, double* dq, double* dp,
                       std::size_t n) {
  ops().bath_rates(w2, q, p, q_ref, m, dq, dp, n);
}
inline void stage_state(const double* y, const double* const* k,
                        const double* c, int nk, double h, double* out,
                        std::size_t n) {
  ops().stage_state(y, k, c, nk, h, out, n);
}
inline void linear_combination(const double* const* k, const double* c, int nk,
                               double* out, std::size_t n) {
  ops().linear_combination(k, c, nk, out, n);
}
inline ErrorSums error_sums(const double* e5, const double* e3,
                            const double* y0, const double* y1, double atol,
                            double rtol, std::size_t n) {
  return ops().error_sums(e5, e3, y0, y1, atol, rtol, n);
}

}  // namespace dwell::kernels
