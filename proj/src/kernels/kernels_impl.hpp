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

#include "dwell/kernels.hpp"

// Per-ISA kernel namespaces. Each TU is compiled with its own target flags;
// only the dispatch TU sees both.

namespace dwell::kernels::scalar {

double sum_squares(const double* x, std::size_t n);
double weighted_displacement_sum(const double* w2, const double* q,
                                 double q_ref, std::size_t n);
double bath_energy_sum(const double* w2, const double* q, const double* p,
                       double q_ref, double m, std::size_t n);
void bath_rates(const double* w2, const double* q, const double* p,
                double q_ref, double m, double* dq, double* dp, std::size_t n);
void stage_state(const double* y, const double* const* k, const double* c,
                 int nk, double h, double* out, std::size_t n);
void linear_combination(const double* const* k, const double* c, int nk,
                        double* out, std::size_t n);
ErrorSums error_sums(const double* e5, const double* e3, const double* y0,
                     const double* y1, double atol, double rtol,
                     std::size_t n);

}  // namespace dwell::kernels::scalar

#if defined(DWELL_HAVE_AVX2)
namespace dwell::kernels::avx2 {

double sum_squares(const double* x, std::size_t n);
double weighted_displacement_sum(const double* w2, const double* q,
                                 double q_ref, std::size_t n);
double bath_energy_sum(const double* w2, const double* q, const double* p,
                       double q_ref, double m, std::size_t n);
void bath_rates(const double* w2, const double* q, const double* p,
                double q_ref, double m, double* dq, double* dp, std::size_t n);
void stage_state(const double* y, const double* const* k, const double* c,
                 int nk, double h, double* out, std::size_t n);
void linear_combination(const double* const* k, const double* c, int nk,
                        double* out, std::size_t n);
ErrorSums error_sums(const double* e5, const double* e3, const double* y0,
                     const double* y1, double atol, double rtol,
                     std::size_t n);

}  // namespace dwell::kernels::avx2
#endif
