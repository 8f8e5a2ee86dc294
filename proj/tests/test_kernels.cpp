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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "dwell/kernels.hpp"
#include "oracles.hpp"

using dwell::kernels::Ops;

namespace {

std::vector<double> random_vec(std::mt19937_64& eng, std::size_t n,
                               double lo = -2.0, double hi = 2.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(eng);
  return v;
}

// Sizes straddling the 4-lane boundary plus an empty and a large case.
const std::size_t kSizes[] = {0, 1, 3, 4, 5, 17, 64, 1999, 2000};

}  // namespace

TEST_CASE("NeumaierSum recovers catastrophic cancellation") {
  dwell::kernels::NeumaierSum acc;
  acc.add(1e16);
  acc.add(1.0);
  acc.add(-1e16);
  CHECK(acc.value() == 1.0);

  // Alternating large/small series vs long-double reference.
  std::mt19937_64 eng(7);
  std::vector<double> v;
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int i = 0; i < 5000; ++i) {
    v.push_back(dist(eng) * 1e12);
    v.push_back(dist(eng));
    v.push_back(-v[v.size() - 2]);
  }
  dwell::kernels::NeumaierSum s;
  for (double x : v) s.add(x);
  CHECK(s.value() == doctest::Approx(oracle::exact_sum(v)).epsilon(1e-15));
}

TEST_CASE("scalar reductions match long-double references") {
  std::mt19937_64 eng(11);
  const auto& ops = dwell::kernels::scalar_ops();
  for (std::size_t n : kSizes) {
    auto w2 = random_vec(eng, n, 0.0, 100.0);
    auto q = random_vec(eng, n, -10.0, 10.0);
    auto p = random_vec(eng, n, -3.0, 3.0);
    const double q_ref = 0.7;
    const double m = 1e-9;

    std::vector<double> terms(n);
    for (std::size_t i = 0; i < n; ++i) terms[i] = w2[i] * (q[i] - q_ref);
    const double want = oracle::exact_sum(terms);
    const double got = ops.weighted_displacement_sum(w2.data(), q.data(),
                                                     q_ref, n);
    CHECK(got == doctest::Approx(want).epsilon(1e-14));

    for (std::size_t i = 0; i < n; ++i) {
      const double d = q[i] - q_ref;
      terms[i] = (p[i] * p[i]) / (2.0 * m) + 0.5 * m * w2[i] * d * d;
    }
    CHECK(ops.bath_energy_sum(w2.data(), q.data(), p.data(), q_ref, m, n) ==
          doctest::Approx(oracle::exact_sum(terms)).epsilon(1e-13));

    for (std::size_t i = 0; i < n; ++i) terms[i] = q[i] * q[i];
    CHECK(ops.sum_squares(q.data(), n) ==
          doctest::Approx(oracle::exact_sum(terms)).epsilon(1e-14));
  }
}

TEST_CASE("avx2 and scalar elementwise kernels are bit-identical") {
  const Ops* avx2 = dwell::kernels::avx2_ops();
  if (avx2 == nullptr) {
    MESSAGE("AVX2 unavailable; dispatch falls back to scalar");
    CHECK(std::string(dwell::kernels::active_impl()) == "scalar");
    return;
  }
  const Ops& scalar = dwell::kernels::scalar_ops();
  std::mt19937_64 eng(23);

  for (std::size_t n : kSizes) {
    auto w2 = random_vec(eng, n, 0.0, 100.0);
    auto q = random_vec(eng, n, -10.0, 10.0);
    auto p = random_vec(eng, n, -3.0, 3.0);
    const double q_ref = -0.31;
    const double m = 1e-4;

    std::vector<double> dq_a(n), dp_a(n), dq_b(n), dp_b(n);
    scalar.bath_rates(w2.data(), q.data(), p.data(), q_ref, m, dq_a.data(),
                      dp_a.data(), n);
    avx2->bath_rates(w2.data(), q.data(), p.data(), q_ref, m, dq_b.data(),
                     dp_b.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(dq_a[i] == dq_b[i]);
      CHECK(dp_a[i] == dp_b[i]);
    }

    // Stage arithmetic with a 5-operand fma chain.
    const auto k0 = random_vec(eng, n);
    const auto k1 = random_vec(eng, n);
    const auto k2 = random_vec(eng, n);
    const auto k3 = random_vec(eng, n);
    const auto k4 = random_vec(eng, n);
    const auto y = random_vec(eng, n);
    const double* ks[] = {k0.data(), k1.data(), k2.data(), k3.data(),
                          k4.data()};
    const double coefs[] = {0.1, -2.5, 3.75, 1e-3, -0.875};
    std::vector<double> out_a(n), out_b(n);
    scalar.stage_state(y.data(), ks, coefs, 5, 0.037, out_a.data(), n);
    avx2->stage_state(y.data(), ks, coefs, 5, 0.037, out_b.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(out_a[i] == out_b[i]);

    scalar.linear_combination(ks, coefs, 5, out_a.data(), n);
    avx2->linear_combination(ks, coefs, 5, out_b.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(out_a[i] == out_b[i]);
  }
}

TEST_CASE("avx2 and scalar reductions agree to a few ulp") {
  const Ops* avx2 = dwell::kernels::avx2_ops();
  if (avx2 == nullptr) return;
  const Ops& scalar = dwell::kernels::scalar_ops();
  std::mt19937_64 eng(31);

  for (std::size_t n : kSizes) {
    if (n == 0) continue;
    auto w2 = random_vec(eng, n, 0.0, 100.0);
    auto q = random_vec(eng, n, -10.0, 10.0);
    auto p = random_vec(eng, n, -3.0, 3.0);

    const double a = scalar.weighted_displacement_sum(w2.data(), q.data(), 0.5, n);
    const double b = avx2->weighted_displacement_sum(w2.data(), q.data(), 0.5, n);
    CHECK(a == doctest::Approx(b).epsilon(1e-14));

    const double ea = scalar.bath_energy_sum(w2.data(), q.data(), p.data(),
                                             0.5, 1e-9, n);
    const double eb = avx2->bath_energy_sum(w2.data(), q.data(), p.data(),
                                            0.5, 1e-9, n);
    CHECK(ea == doctest::Approx(eb).epsilon(1e-14));

    const auto e5 = random_vec(eng, n, -1e-9, 1e-9);
    const auto e3 = random_vec(eng, n, -1e-8, 1e-8);
    const auto sa = scalar.error_sums(e5.data(), e3.data(), q.data(), p.data(),
                                      1e-11, 1e-11, n);
    const auto sb = avx2->error_sums(e5.data(), e3.data(), q.data(), p.data(),
                                     1e-11, 1e-11, n);
    CHECK(sa.s5 == doctest::Approx(sb.s5).epsilon(1e-13));
    CHECK(sa.s3 == doctest::Approx(sb.s3).epsilon(1e-13));
  }
}

TEST_CASE("error_sums matches a direct evaluation") {
  std::mt19937_64 eng(43);
  const std::size_t n = 101;
  const auto e5 = random_vec(eng, n, -1e-10, 1e-10);
  const auto e3 = random_vec(eng, n, -1e-9, 1e-9);
  const auto y0 = random_vec(eng, n, -5.0, 5.0);
  const auto y1 = random_vec(eng, n, -5.0, 5.0);
  const double atol = 1e-11, rtol = 1e-9;

  long double s5 = 0.0L, s3 = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    s5 += static_cast<long double>((e5[i] / sc)) * (e5[i] / sc);
    s3 += static_cast<long double>((e3[i] / sc)) * (e3[i] / sc);
  }
  const auto got = dwell::kernels::error_sums(e5.data(), e3.data(), y0.data(),
                                              y1.data(), atol, rtol, n);
  CHECK(got.s5 == doctest::Approx(static_cast<double>(s5)).epsilon(1e-13));
  CHECK(got.s3 == doctest::Approx(static_cast<double>(s3)).epsilon(1e-13));
}

TEST_CASE("dispatch selects a usable implementation") {
  const char* name = dwell::kernels::active_impl();
  CHECK((std::string(name) == "scalar" || std::string(name) == "avx2"));
  const double xs[] = {3.0, 4.0};
  CHECK(dwell::kernels::sum_squares(xs, 2) == 25.0);
}
