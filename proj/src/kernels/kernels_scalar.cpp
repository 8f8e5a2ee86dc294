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

#include <algorithm>
#include <cmath>

#include "kernels_impl.hpp"

// Reference kernels. Operation order is the contract: the AVX2 variants
// round through the same sequence so elementwise results stay bit-identical.

namespace dwell::kernels::scalar {

double sum_squares(const double* x, std::size_t n) {
  NeumaierSum acc;
  for (std::size_t i = 0; i < n; ++i) acc.add(x[i] * x[i]);
  return acc.value();
}

double weighted_displacement_sum(const double* w2, const double* q,
                                 double q_ref, std::size_t n) {
  NeumaierSum acc;
  for (std::size_t i = 0; i < n; ++i) acc.add(w2[i] * (q[i] - q_ref));
  return acc.value();
}

double bath_energy_sum(const double* w2, const double* q, const double* p,
                       double q_ref, double m, std::size_t n) {
  const double inv2m = 1.0 / (2.0 * m);
  const double halfm = 0.5 * m;
  NeumaierSum acc;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = q[i] - q_ref;
    const double kin = (p[i] * p[i]) * inv2m;
    const double pot = halfm * (w2[i] * (d * d));
    acc.add(kin + pot);
  }
  return acc.value();
}

void bath_rates(const double* w2, const double* q, const double* p,
                double q_ref, double m, double* dq, double* dp,
                std::size_t n) {
  const double inv_m = 1.0 / m;
  const double neg_m = -m;
  for (std::size_t i = 0; i < n; ++i) {
    dq[i] = p[i] * inv_m;
    dp[i] = neg_m * (w2[i] * (q[i] - q_ref));
  }
}

void stage_state(const double* y, const double* const* k, const double* c,
                 int nk, double h, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = c[0] * k[0][i];
    for (int j = 1; j < nk; ++j) acc = std::fma(c[j], k[j][i], acc);
    out[i] = std::fma(h, acc, y[i]);
  }
}

void linear_combination(const double* const* k, const double* c, int nk,
                        double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = c[0] * k[0][i];
    for (int j = 1; j < nk; ++j) acc = std::fma(c[j], k[j][i], acc);
    out[i] = acc;
  }
}

ErrorSums error_sums(const double* e5, const double* e3, const double* y0,
                     const double* y1, double atol, double rtol,
                     std::size_t n) {
  NeumaierSum s5;
  NeumaierSum s3;
  for (std::size_t i = 0; i < n; ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double a = e5[i] / sc;
    const double b = e3[i] / sc;
    s5.add(a * a);
    s3.add(b * b);
  }
  return {s5.value(), s3.value()};
}

}  // namespace dwell::kernels::scalar
