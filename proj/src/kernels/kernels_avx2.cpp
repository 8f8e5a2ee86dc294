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

#include "kernels_impl.hpp"

#if defined(DWELL_HAVE_AVX2)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace dwell::kernels::avx2 {
namespace {

inline __m256d abs_pd(__m256d v) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  return _mm256_andnot_pd(sign, v);
}

// 4-lane Neumaier accumulator; lanes are merged in fixed order so the
// result is deterministic for a given input.
struct VecNeumaier {
  __m256d sum = _mm256_setzero_pd();
  __m256d comp = _mm256_setzero_pd();

  inline void add(__m256d v) {
    const __m256d t = _mm256_add_pd(sum, v);
    const __m256d big_sum = _mm256_cmp_pd(abs_pd(sum), abs_pd(v), _CMP_GE_OQ);
    const __m256d corr_a = _mm256_add_pd(_mm256_sub_pd(sum, t), v);
    const __m256d corr_b = _mm256_add_pd(_mm256_sub_pd(v, t), sum);
    comp = _mm256_add_pd(comp, _mm256_blendv_pd(corr_b, corr_a, big_sum));
    sum = t;
  }

  inline void drain(NeumaierSum& host) const {
    alignas(32) double s[4];
    alignas(32) double c[4];
    _mm256_store_pd(s, sum);
    _mm256_store_pd(c, comp);
    for (int lane = 0; lane < 4; ++lane) {
      host.add(s[lane]);
      host.add(c[lane]);
    }
  }
};

}  // namespace

double sum_squares(const double* x, std::size_t n) {
  VecNeumaier vacc;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    vacc.add(_mm256_mul_pd(v, v));
  }
  NeumaierSum acc;
  vacc.drain(acc);
  for (; i < n; ++i) acc.add(x[i] * x[i]);
  return acc.value();
}

double weighted_displacement_sum(const double* w2, const double* q,
                                 double q_ref, std::size_t n) {
  const __m256d qr = _mm256_set1_pd(q_ref);
  VecNeumaier vacc;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(q + i), qr);
    vacc.add(_mm256_mul_pd(_mm256_loadu_pd(w2 + i), d));
  }
  NeumaierSum acc;
  vacc.drain(acc);
  for (; i < n; ++i) acc.add(w2[i] * (q[i] - q_ref));
  return acc.value();
}

double bath_energy_sum(const double* w2, const double* q, const double* p,
                       double q_ref, double m, std::size_t n) {
  const double inv2m_s = 1.0 / (2.0 * m);
  const double halfm_s = 0.5 * m;
  const __m256d qr = _mm256_set1_pd(q_ref);
  const __m256d inv2m = _mm256_set1_pd(inv2m_s);
  const __m256d halfm = _mm256_set1_pd(halfm_s);
  VecNeumaier vacc;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(q + i), qr);
    const __m256d pv = _mm256_loadu_pd(p + i);
    const __m256d kin = _mm256_mul_pd(_mm256_mul_pd(pv, pv), inv2m);
    const __m256d pot = _mm256_mul_pd(
        halfm, _mm256_mul_pd(_mm256_loadu_pd(w2 + i), _mm256_mul_pd(d, d)));
    vacc.add(_mm256_add_pd(kin, pot));
  }
  NeumaierSum acc;
  vacc.drain(acc);
  for (; i < n; ++i) {
    const double d = q[i] - q_ref;
    const double kin = (p[i] * p[i]) * inv2m_s;
    const double pot = halfm_s * (w2[i] * (d * d));
    acc.add(kin + pot);
  }
  return acc.value();
}

void bath_rates(const double* w2, const double* q, const double* p,
                double q_ref, double m, double* dq, double* dp,
                std::size_t n) {
  const double inv_m_s = 1.0 / m;
  const double neg_m_s = -m;
  const __m256d qr = _mm256_set1_pd(q_ref);
  const __m256d inv_m = _mm256_set1_pd(inv_m_s);
  const __m256d neg_m = _mm256_set1_pd(neg_m_s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(dq + i, _mm256_mul_pd(_mm256_loadu_pd(p + i), inv_m));
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(q + i), qr);
    const __m256d f = _mm256_mul_pd(_mm256_loadu_pd(w2 + i), d);
    _mm256_storeu_pd(dp + i, _mm256_mul_pd(neg_m, f));
  }
  for (; i < n; ++i) {
    dq[i] = p[i] * inv_m_s;
    dp[i] = neg_m_s * (w2[i] * (q[i] - q_ref));
  }
}

void stage_state(const double* y, const double* const* k, const double* c,
                 int nk, double h, double* out, std::size_t n) {
  const __m256d hv = _mm256_set1_pd(h);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_mul_pd(_mm256_set1_pd(c[0]), _mm256_loadu_pd(k[0] + i));
    for (int j = 1; j < nk; ++j) {
      acc = _mm256_fmadd_pd(_mm256_set1_pd(c[j]), _mm256_loadu_pd(k[j] + i),
                            acc);
    }
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(hv, acc, _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) {
    double acc = c[0] * k[0][i];
    for (int j = 1; j < nk; ++j) acc = std::fma(c[j], k[j][i], acc);
    out[i] = std::fma(h, acc, y[i]);
  }
}

void linear_combination(const double* const* k, const double* c, int nk,
                        double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_mul_pd(_mm256_set1_pd(c[0]), _mm256_loadu_pd(k[0] + i));
    for (int j = 1; j < nk; ++j) {
      acc = _mm256_fmadd_pd(_mm256_set1_pd(c[j]), _mm256_loadu_pd(k[j] + i),
                            acc);
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
    double acc = c[0] * k[0][i];
    for (int j = 1; j < nk; ++j) acc = std::fma(c[j], k[j][i], acc);
    out[i] = acc;
  }
}

ErrorSums error_sums(const double* e5, const double* e3, const double* y0,
                     const double* y1, double atol, double rtol,
                     std::size_t n) {
  const __m256d va = _mm256_set1_pd(atol);
  const __m256d vr = _mm256_set1_pd(rtol);
  VecNeumaier v5acc;
  VecNeumaier v3acc;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d sc = _mm256_add_pd(
        va, _mm256_mul_pd(vr, _mm256_max_pd(abs_pd(_mm256_loadu_pd(y0 + i)),
                                            abs_pd(_mm256_loadu_pd(y1 + i)))));
    const __m256d a = _mm256_div_pd(_mm256_loadu_pd(e5 + i), sc);
    const __m256d b = _mm256_div_pd(_mm256_loadu_pd(e3 + i), sc);
    v5acc.add(_mm256_mul_pd(a, a));
    v3acc.add(_mm256_mul_pd(b, b));
  }
  NeumaierSum s5;
  NeumaierSum s3;
  v5acc.drain(s5);
  v3acc.drain(s3);
  for (; i < n; ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double a = e5[i] / sc;
    const double b = e3[i] / sc;
    s5.add(a * a);
    s3.add(b * b);
  }
  return {s5.value(), s3.value()};
}

}  // namespace dwell::kernels::avx2

#endif  // DWELL_HAVE_AVX2
