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

#include "dwell/analysis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "dwell/bath.hpp"
#include "dwell/dynamics.hpp"
#include "dwell/kernels.hpp"
#include "dwell/parallel.hpp"
#include "dwell/potential.hpp"

namespace dwell {

HopRecord detect_well_transitions(const Trajectory& traj, double band) {
  if (!(band > 0.0)) throw ConfigError("hysteresis band must be > 0");
  HopRecord rec;
  int well = 0;
  for (const auto& s : traj.samples) {
    if (well == 0) {
      if (std::abs(s.Q) > band) well = (s.Q > 0.0) ? 1 : -1;
    } else if (well == 1 && s.Q < -band) {
      well = -1;
      rec.times.push_back(s.t);
    } else if (well == -1 && s.Q > band) {
      well = 1;
      rec.times.push_back(s.t);
    }
  }
  rec.censored = rec.times.size() < 2;
  return rec;
}

std::optional<double> interwell_period(const HopRecord& hops) {
  if (hops.censored || hops.times.size() < 2) return std::nullopt;
  kernels::NeumaierSum gaps;
  for (std::size_t i = 1; i < hops.times.size(); ++i) {
    gaps.add(hops.times[i] - hops.times[i - 1]);
  }
  return 2.0 * gaps.value() / static_cast<double>(hops.times.size() - 1);
}

namespace {

// FFTW plan creation is not thread-safe; execution of distinct plans is.
std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

SpectrumResult power_spectrum(const Trajectory& traj, std::size_t n_samples,
                              SpectrumWindow window) {
  if (n_samples < 2 || (n_samples & (n_samples - 1)) != 0) {
    throw ConfigError("n_samples must be a power of two >= 2");
  }
  if (traj.samples.size() < n_samples) {
    throw ConfigError("trajectory has fewer samples than n_samples");
  }
  const std::size_t n = n_samples;
  const double dt = traj.config.sample_dt;

  kernels::NeumaierSum mean_acc;
  for (std::size_t j = 0; j < n; ++j) mean_acc.add(traj.samples[j].Q);
  const double mean = mean_acc.value() / static_cast<double>(n);

  double* in = fftw_alloc_real(n);
  fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
  for (std::size_t j = 0; j < n; ++j) in[j] = traj.samples[j].Q - mean;
  if (window == SpectrumWindow::kHann) {
    for (std::size_t j = 0; j < n; ++j) {
      in[j] *= 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi *
                                     static_cast<double>(j) /
                                     static_cast<double>(n)));
    }
  }

  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fftw_destroy_plan(plan);
  }

  SpectrumResult res;
  const std::size_t bins = n / 2 + 1;
  res.freqs.resize(bins);
  res.power.resize(bins);
  const double inv_n = 1.0 / static_cast<double>(n);
  const double df = 1.0 / (static_cast<double>(n) * dt);
  for (std::size_t k = 0; k < bins; ++k) {
    const double re = out[k][0];
    const double im = out[k][1];
    // One-sided normalization: the two-sided sum equals sum (Q - mean)^2.
    const double fold = (k == 0 || k == n / 2) ? 1.0 : 2.0;
    res.freqs[k] = static_cast<double>(k) * df;
    res.power[k] = fold * (re * re + im * im) * inv_n;
  }
  fftw_free(in);
  fftw_free(out);

  const auto sums = spectral_summaries(res);
  res.peak_freq = sums.peak_freq;
  res.integral = sums.integral;
  res.flatness = sums.flatness;
  return res;
}

SpectralSummaries spectral_summaries(const SpectrumResult& spec) {
  if (spec.power.empty() || spec.power.size() != spec.freqs.size()) {
    throw ConfigError("spectrum is empty or inconsistent");
  }
  const std::size_t n = spec.power.size();

  std::size_t peak = 0;
  for (std::size_t k = 1; k < n; ++k) {
    if (spec.power[k] > spec.power[peak]) peak = k;
  }

  kernels::NeumaierSum integ;
  for (std::size_t k = 1; k < n; ++k) {
    integ.add(0.5 * (spec.power[k] + spec.power[k - 1]) *
              (spec.freqs[k] - spec.freqs[k - 1]));
  }

  kernels::NeumaierSum am_acc;
  kernels::NeumaierSum log_acc;
  constexpr double kGeoFloor = 1e-30;
  for (std::size_t k = 0; k < n; ++k) {
    am_acc.add(spec.power[k]);
    log_acc.add(std::log(std::max(spec.power[k], kGeoFloor)));
  }
  const double am = am_acc.value() / static_cast<double>(n);
  double flatness = 0.0;
  if (am > 0.0) {
    const double gm = std::exp(log_acc.value() / static_cast<double>(n));
    flatness = std::clamp(gm / am, 0.0, 1.0);
  }
  return {spec.freqs[peak], integ.value(), flatness};
}

BistabilityScan scan_bistability(const WellParams& params, double bath_mass,
                                 double omega0, double delta_omega,
                                 const std::vector<std::size_t>& n_grid,
                                 std::size_t trials, std::uint64_t seed,
                                 unsigned workers) {
  params.check();
  if (!(params.lambda > 0.0)) {
    throw ConfigError("bistability scan requires lambda > 0");
  }
  if (!(bath_mass > 0.0)) throw ConfigError("bath_mass must be > 0");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (n_grid.empty()) throw ConfigError("N grid is empty");
  if (!std::is_sorted(n_grid.begin(), n_grid.end())) {
    throw ConfigError("N grid must be ascending");
  }
  if (delta_omega < 0.0 || delta_omega > 2.0 * omega0 || !(omega0 > 0.0)) {
    throw ConfigError("need omega0 > 0 and 0 <= delta_omega <= 2*omega0");
  }
  const double w_lo = omega0 - 0.5 * delta_omega;
  const double w_hi = omega0 + 0.5 * delta_omega;

  const std::size_t n_points = n_grid.size();
  std::vector<std::vector<double>> qmin(trials), vmin(trials);
  std::vector<std::size_t> crossing(trials);

  // Generous cap on the monostable-crossing search.
  const double expect =
      2.0 * params.mu /
      (bath_mass * (omega0 * omega0 + delta_omega * delta_omega / 12.0));
  const std::size_t cap =
      n_grid.back() +
      static_cast<std::size_t>(std::max(1000.0, 20.0 * std::max(expect, 0.0)));

  parallel_for(trials, workers, [&](std::size_t trial) {
    Rng rng(seed, trial);
    qmin[trial].resize(n_points);
    vmin[trial].resize(n_points);
    kernels::NeumaierSum sum_w2;
    std::size_t grid_pos = 0;
    std::size_t crossed_at = 0;
    for (std::size_t n = 0; grid_pos < n_points || crossed_at == 0; ++n) {
      const double mu_eff = params.mu - 0.5 * bath_mass * sum_w2.value();
      if (crossed_at == 0 && mu_eff <= 0.0) crossed_at = n;
      while (grid_pos < n_points && n_grid[grid_pos] == n) {
        qmin[trial][grid_pos] = effective_minimum_abs(mu_eff, params.lambda);
        vmin[trial][grid_pos] = effective_barrier_depth(mu_eff, params.lambda);
        ++grid_pos;
      }
      if (n >= cap) break;
      const double w = rng.uniform(w_lo, w_hi);
      sum_w2.add(w * w);
    }
    crossing[trial] = (crossed_at == 0) ? cap : crossed_at;
  });

  BistabilityScan scan;
  scan.rows.resize(n_points);
  for (std::size_t g = 0; g < n_points; ++g) {
    kernels::NeumaierSum sq, sv;
    for (std::size_t t = 0; t < trials; ++t) {
      sq.add(qmin[t][g]);
      sv.add(vmin[t][g]);
    }
    const double mq = sq.value() / static_cast<double>(trials);
    const double mv = sv.value() / static_cast<double>(trials);
    double sd = 0.0;
    if (trials > 1) {
      kernels::NeumaierSum dev;
      for (std::size_t t = 0; t < trials; ++t) {
        const double d = vmin[t][g] - mv;
        dev.add(d * d);
      }
      sd = std::sqrt(dev.value() / static_cast<double>(trials - 1));
    }
    scan.rows[g] = {n_grid[g], mq, mv, sd};
  }
  scan.first_monostable_n = std::move(crossing);
  return scan;
}

std::vector<PeriodRow> scan_period_vs_initial_position(
    const WellParams& params, const BathSpec& spec,
    const IntegratorConfig& cfg, const PeriodScanConfig& scan) {
  validate(params, spec, cfg);
  if (params.classical()) {
    throw ConfigError("period scan requires quantum mode (hbar > 0)");
  }
  if (spec.temperature != 0.0) {
    throw ConfigError("period scan requires a zero-temperature bath");
  }
  if (!(params.mu > 0.0) || !(params.lambda > 0.0)) {
    throw ConfigError("period scan requires a bistable well (mu, lambda > 0)");
  }
  if (scan.q0_values.empty()) throw ConfigError("q0 grid is empty");

  // One realized frequency set for the whole scan.
  Rng rng(spec.seed, 0);
  const std::vector<double> omegas = sample_frequencies(spec, rng);
  const double mu_eff = effective_quadratic_coefficient(params, omegas, spec.mass);
  const double qmin_bare = std::sqrt(params.mu / (2.0 * params.lambda));
  const double qmin_eff = effective_minimum_abs(mu_eff, params.lambda);
  const double band =
      scan.band_fraction * (qmin_eff > 0.0 ? qmin_eff : qmin_bare);

  std::vector<PeriodRow> rows(scan.q0_values.size());
  parallel_for(scan.q0_values.size(), scan.workers, [&](std::size_t i) {
    const double q0 = scan.q0_values[i];
    PeriodRow row{q0 / qmin_bare, 2.0 * cfg.t_end, true, false};
    try {
      InitialState init = scan.base;
      init.q0 = q0;
      Rng thermal_rng(spec.seed, i + 1);  // unused at T = 0
      BathState bath = sample_thermal_state(omegas, spec.mass,
                                            spec.temperature, q0, thermal_rng);
      const ExtendedState s0 = make_initial_state(params, init, std::move(bath));
      const IntegrationReport rep = integrate(s0, params, spec, cfg);
      const HopRecord hops = detect_well_transitions(rep.trajectory, band);
      if (const auto period = interwell_period(hops)) {
        row.period = *period;
        row.censored = false;
      }
    } catch (const NumericalError&) {
      row.failed = true;
    }
    rows[i] = row;
  });
  return rows;
}

}  // namespace dwell
