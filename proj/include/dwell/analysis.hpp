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

#include <cstdint>
#include <optional>
#include <vector>

#include "dwell/model.hpp"

// Post-processing: well-transition detection, interwell period, power
// spectra, and the two headline parameter scans.

namespace dwell {

/// Ordered well-transition times; censored when fewer than two transitions
/// occurred before the end of the trajectory. Consecutive transitions
/// alternate wells by construction.
struct HopRecord {
  std::vector<double> times;
  bool censored = true;
};

/// Hysteresis detector: the initial well is the sign of the first sample
/// with |Q| > band; a transition is recorded at the first sample where Q
/// exits [-band, band] on the side opposite the last confirmed well.
/// Trajectories that never leave the band yield an empty, censored record.
HopRecord detect_well_transitions(const Trajectory& traj, double band);

/// Interwell period = 2 x mean gap between successive transitions (two
/// transitions make one full cycle). Censored records return nullopt; the
/// CSV layer renders them as the lower bound 2*t_end.
std::optional<double> interwell_period(const HopRecord& hops);

enum class SpectrumWindow { kNone, kHann };

/// One-sided power spectrum of Q(t) over the first n_samples samples
/// (power of two): the mean of Q is removed, the DFT taken, and power
/// normalized so that the two-sided sum equals sum (Q - mean)^2.
/// Frequencies are f_k = k/(n_samples * sample_dt).
SpectrumResult power_spectrum(const Trajectory& traj, std::size_t n_samples,
                              SpectrumWindow window = SpectrumWindow::kNone);

struct SpectralSummaries {
  double peak_freq;
  double integral;
  double flatness;
};

/// peak_freq = argmax of power; integral = trapezoid over freqs; flatness =
/// geometric/arithmetic mean ratio with zero bins floored at 1e-30 for the
/// geometric mean, clamped into [0, 1].
SpectralSummaries spectral_summaries(const SpectrumResult& spec);

struct BistabilityRow {
  std::size_t n_osc;
  double mean_qmin;
  double mean_vmin;
  double std_vmin;
};

struct BistabilityScan {
  std::vector<BistabilityRow> rows;
  /// Per-trial first N at which the effective potential is monostable
  /// (mu_eff <= 0), from the same frequency streams as the rows.
  std::vector<std::size_t> first_monostable_n;
};

/// Fig.-1-style scan: for each trial an i.i.d. frequency stream is drawn
/// once; grid point N uses the first N draws, so each trial's curve follows
/// one growing bath realization. Deterministic (and seed-independent) when
/// delta_omega = 0.
BistabilityScan scan_bistability(const WellParams& params, double bath_mass,
                                 double omega0, double delta_omega,
                                 const std::vector<std::size_t>& n_grid,
                                 std::size_t trials, std::uint64_t seed,
                                 unsigned workers = 1);

struct PeriodRow {
  double q0_over_qmin;
  double period;  // lower bound 2*t_end when censored
  bool censored;
  bool failed;  // integration error at this grid point
};

struct PeriodScanConfig {
  std::vector<double> q0_values;  // absolute initial positions
  InitialState base;              // p0, rho0, pi0 shared by all points
  double band_fraction = 0.1;     // hysteresis band = fraction * |Q_min,eff|
  unsigned workers = 1;
};

/// Fig.-6-style scan at bath temperature zero: one integration and one
/// period extraction per grid point, all sharing a single realized
/// frequency set. Periods are reported against Q0/Q_min with the bare
/// Q_min = sqrt(mu/(2 lambda)). Failed grid points are flagged and the scan
/// continues.
std::vector<PeriodRow> scan_period_vs_initial_position(
    const WellParams& params, const BathSpec& spec,
    const IntegratorConfig& cfg, const PeriodScanConfig& scan);

}  // namespace dwell
