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
#include <numbers>
#include <random>

#include "dwell/analysis.hpp"
#include "oracles.hpp"

using namespace dwell;

namespace {

Trajectory make_traj(const std::vector<double>& q, double dt) {
  Trajectory t;
  t.config.sample_dt = dt;
  t.samples.reserve(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    t.samples.push_back(
        {static_cast<double>(i) * dt, q[i], 0.0, 0.0, 0.0, 0.0});
  }
  return t;
}

Trajectory sampled(const std::function<double(double)>& f, double dt,
                   std::size_t n) {
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) q[i] = f(static_cast<double>(i) * dt);
  return make_traj(q, dt);
}

}  // namespace

TEST_CASE("hysteresis detection on a cosine") {
  const double dt = 0.01;
  const auto traj =
      sampled([](double t) { return std::cos(t); }, dt, 4000);
  const HopRecord rec = detect_well_transitions(traj, 0.1);
  REQUIRE(!rec.times.empty());
  // Band exit at arccos(-0.1) ~ 1.6710, detected within one sample.
  CHECK(rec.times.front() > 1.47);
  CHECK(rec.times.front() == doctest::Approx(1.6710).epsilon(0.011 / 1.671));
  // Transitions spaced by half periods, so the period is 2 pi.
  const auto period = interwell_period(rec);
  REQUIRE(period.has_value());
  CHECK(*period == doctest::Approx(2.0 * std::numbers::pi).epsilon(0.01));
}

TEST_CASE("non-hopping trajectories are censored") {
  const auto still = sampled([](double) { return 0.68; }, 0.01, 500);
  const HopRecord r1 = detect_well_transitions(still, 0.1);
  CHECK(r1.times.empty());
  CHECK(r1.censored);

  const auto inside =
      sampled([](double t) { return 0.05 * std::sin(3.0 * t); }, 0.01, 2000);
  const HopRecord r2 = detect_well_transitions(inside, 0.1);
  CHECK(r2.times.empty());
  CHECK(r2.censored);

  CHECK_THROWS_AS(detect_well_transitions(still, 0.0), ConfigError);
}

TEST_CASE("interwell period from transition gaps") {
  HopRecord r;
  r.times = {1.0, 2.0, 3.0, 4.0};
  r.censored = false;
  CHECK(*interwell_period(r) == doctest::Approx(2.0).epsilon(1e-15));

  HopRecord single;
  single.times = {1.0};
  single.censored = true;
  CHECK(!interwell_period(single).has_value());
}

TEST_CASE("alternation and band monotonicity on noisy synthetic signals") {
  std::mt19937_64 eng(99);
  std::normal_distribution<double> noise(0.0, 0.35);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> q(3000);
    for (std::size_t i = 0; i < q.size(); ++i) {
      const double square =
          (static_cast<int>(i / 250) % 2 == 0) ? 0.7 : -0.7;
      q[i] = square + noise(eng);
    }
    const auto traj = make_traj(q, 0.01);

    std::size_t prev_count = SIZE_MAX;
    for (double band : {0.05, 0.1, 0.2, 0.4, 0.6}) {
      const HopRecord rec = detect_well_transitions(traj, band);
      CHECK(rec.times.size() <= prev_count);
      prev_count = rec.times.size();

      // Reconstruct wells at the recorded times: signs must alternate.
      int last_sign = 0;
      for (double t : rec.times) {
        const auto idx = static_cast<std::size_t>(std::lround(t / 0.01));
        const double v = q[idx];
        CHECK(std::abs(v) > band);
        const int sign = v > 0.0 ? 1 : -1;
        if (last_sign != 0) CHECK(sign == -last_sign);
        last_sign = sign;
      }
      // Strictly increasing times.
      for (std::size_t i = 1; i < rec.times.size(); ++i) {
        CHECK(rec.times[i] > rec.times[i - 1]);
      }
    }
  }
}

TEST_CASE("on-bin tone concentrates in a single bin") {
  const double dt = 0.125;
  const std::size_t n = 1024;
  const auto traj = sampled(
      [](double t) { return std::sin(2.0 * std::numbers::pi * 0.5 * t); }, dt,
      n);
  const SpectrumResult spec = power_spectrum(traj, n);
  REQUIRE(spec.power.size() == n / 2 + 1);
  CHECK(spec.peak_freq == doctest::Approx(0.5).epsilon(1e-15));
  const std::size_t peak_bin = 64;  // 0.5 * n * dt
  CHECK(spec.freqs[peak_bin] == doctest::Approx(0.5).epsilon(1e-15));
  for (std::size_t k = 0; k < spec.power.size(); ++k) {
    if (k == peak_bin) continue;
    CHECK(spec.power[k] < 1e-20 * spec.power[peak_bin]);
  }
  CHECK(spec.flatness < 1e-6);
}

TEST_CASE("constant trajectory has an all-zero spectrum") {
  const auto traj = sampled([](double) { return 3.25; }, 0.1, 256);
  const SpectrumResult spec = power_spectrum(traj, 256);
  for (double p : spec.power) CHECK(p == 0.0);
  CHECK(spec.integral == 0.0);
  CHECK(spec.flatness == 0.0);
}

TEST_CASE("Parseval: two-sided power sum equals signal energy") {
  std::mt19937_64 eng(17);
  std::normal_distribution<double> g(0.0, 1.3);
  std::vector<double> q(512);
  for (auto& x : q) x = g(eng);
  const auto traj = make_traj(q, 0.05);
  const SpectrumResult spec = power_spectrum(traj, 512);

  double mean = 0.0;
  for (double x : q) mean += x;
  mean /= static_cast<double>(q.size());
  long double energy = 0.0L;
  for (double x : q) {
    energy += static_cast<long double>(x - mean) * (x - mean);
  }
  long double total = 0.0L;
  for (double p : spec.power) total += p;
  CHECK(static_cast<double>(total) ==
        doctest::Approx(static_cast<double>(energy)).epsilon(1e-12));
}

TEST_CASE("spectrum matches a naive DFT oracle") {
  std::mt19937_64 eng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> q(64);
  for (auto& x : q) x = u(eng);
  const auto traj = make_traj(q, 0.2);
  const SpectrumResult spec = power_spectrum(traj, 64);

  double mean = 0.0;
  for (double x : q) mean += x;
  mean /= 64.0;
  std::vector<double> centered(64);
  for (std::size_t i = 0; i < 64; ++i) centered[i] = q[i] - mean;
  const auto dft = oracle::naive_dft(centered);
  for (std::size_t k = 0; k <= 32; ++k) {
    const double fold = (k == 0 || k == 32) ? 1.0 : 2.0;
    const double want = fold * std::norm(dft[k]) / 64.0;
    CHECK(spec.power[k] == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("windowed spectrum spreads an off-bin tone less") {
  const double dt = 0.125;
  const std::size_t n = 1024;
  // Half-bin offset: worst-case leakage for the raw transform.
  const double f = (64.5) / (static_cast<double>(n) * dt);
  const auto traj = sampled(
      [f](double t) { return std::sin(2.0 * std::numbers::pi * f * t); }, dt,
      n);
  const SpectrumResult raw = power_spectrum(traj, n, SpectrumWindow::kNone);
  const SpectrumResult win = power_spectrum(traj, n, SpectrumWindow::kHann);
  // Leakage far from the peak is orders of magnitude lower with the window.
  CHECK(win.power[400] < 1e-6 * raw.power[400]);
}

TEST_CASE("white noise flatness is high; scaling laws hold") {
  std::mt19937_64 eng(31);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> q(8192);
  for (auto& x : q) x = g(eng);
  const auto traj = make_traj(q, 0.01);
  const SpectrumResult spec = power_spectrum(traj, 8192);
  CHECK(spec.flatness > 0.4);

  SpectrumResult scaled = spec;
  const double c = 37.5;
  for (auto& p : scaled.power) p *= c;
  const auto sums = spectral_summaries(scaled);
  CHECK(sums.peak_freq == spec.peak_freq);
  CHECK(sums.flatness == doctest::Approx(spec.flatness).epsilon(1e-12));
  CHECK(sums.integral == doctest::Approx(c * spec.integral).epsilon(1e-12));
}

TEST_CASE("spectrum input validation") {
  const auto traj = sampled([](double t) { return std::sin(t); }, 0.1, 100);
  CHECK_THROWS_AS(power_spectrum(traj, 128), ConfigError);   // too few samples
  CHECK_THROWS_AS(power_spectrum(traj, 96), ConfigError);    // not power of 2
  SpectrumResult empty;
  CHECK_THROWS_AS(spectral_summaries(empty), ConfigError);
}

TEST_CASE("bistability scan: deterministic monochromatic transition at 800") {
  WellParams p;
  std::vector<std::size_t> grid;
  for (std::size_t n = 0; n <= 1000; n += 1) grid.push_back(n);

  const BistabilityScan a =
      scan_bistability(p, 1e-4, 5.0, 0.0, grid, 3, 42, 2);
  const BistabilityScan b =
      scan_bistability(p, 1e-4, 5.0, 0.0, grid, 3, 777, 1);

  // Seed- and worker-independent in the monochromatic case.
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].mean_qmin == b.rows[i].mean_qmin);
    CHECK(a.rows[i].mean_vmin == b.rows[i].mean_vmin);
  }
  for (std::size_t n : a.first_monostable_n) CHECK(n == 800);
  CHECK(a.rows[799].mean_qmin > 0.0);
  CHECK(a.rows[800].mean_qmin == 0.0);
  CHECK(a.rows[800].mean_vmin == 0.0);
  // N = 0: bare barrier depth mu^2/(4 lambda).
  CHECK(a.rows[0].mean_vmin == 0.25);
  CHECK(a.rows[0].std_vmin == 0.0);
}

TEST_CASE("bistability scan: full-bandwidth mean transition near 600") {
  WellParams p;
  const std::vector<std::size_t> grid{0, 1000};
  const BistabilityScan scan =
      scan_bistability(p, 1e-4, 5.0, 10.0, grid, 100, 7, 3);
  double mean = 0.0;
  for (std::size_t n : scan.first_monostable_n) {
    mean += static_cast<double>(n);
  }
  mean /= static_cast<double>(scan.first_monostable_n.size());
  CHECK(mean == doctest::Approx(600.0).epsilon(0.05));
}

TEST_CASE("period scan produces censored sentinels when nothing hops") {
  WellParams p;
  p.hbar = 0.05;
  BathSpec spec;
  spec.n_osc = 0;
  spec.mass = 1e-9;
  spec.omega_max = 10.0;
  spec.seed = 4;
  IntegratorConfig cfg;
  cfg.t_end = 2.0;  // far too short for any hop at this hbar
  cfg.sample_dt = 0.02;

  PeriodScanConfig scan;
  scan.base = {0.0, 0.0, 0.11, 0.0};  // rho0 near the width fixed point
  scan.q0_values = {std::sqrt(0.5), 1.05 * std::sqrt(0.5)};
  const auto rows = scan_period_vs_initial_position(p, spec, cfg, scan);
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    CHECK(row.censored);
    CHECK(!row.failed);
    CHECK(row.period == 2.0 * cfg.t_end);
  }
  CHECK(rows[0].q0_over_qmin == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rows[1].q0_over_qmin == doctest::Approx(1.05).epsilon(1e-12));

  // Mode preconditions.
  WellParams classical = p;
  classical.hbar = 0.0;
  CHECK_THROWS_AS(
      scan_period_vs_initial_position(classical, spec, cfg, scan), ConfigError);
  BathSpec warm = spec;
  warm.temperature = 1e-3;
  CHECK_THROWS_AS(scan_period_vs_initial_position(p, warm, cfg, scan),
                  ConfigError);
}
