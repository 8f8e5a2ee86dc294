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
#include <cstdint>
#include <vector>

#include "dwell/errors.hpp"

// Domain types. Natural units with k_B = 1 throughout; hbar is a free
// parameter and hbar = 0 selects the classical mode, in which the
// fluctuation pair (rho, Pi) is structurally absent rather than a limit of
// the quantum equations.

namespace dwell {

/// Double-well constants for V(Q) = -mu Q^2 + lambda Q^4 and the test
/// particle. lambda = 0 with mu < 0 is the bounded harmonic limit.
struct WellParams {
  double mu = 1.0;
  double lambda = 1.0;
  double mass = 1.0;
  double hbar = 1.0;

  bool classical() const { return hbar == 0.0; }

  void check() const;
};

/// Bath ensemble definition: N oscillators of mass m with angular
/// frequencies drawn uniformly from [omega_min, omega_max] at temperature T.
struct BathSpec {
  std::size_t n_osc = 0;
  double mass = 1.0;
  double omega_min = 0.0;
  double omega_max = 0.0;
  double temperature = 0.0;
  std::uint64_t seed = 0;

  void check() const;
};

/// A realized bath: frequencies plus phase-space coordinates.
struct BathState {
  std::vector<double> omegas;
  std::vector<double> q;
  std::vector<double> p;

  std::size_t size() const { return omegas.size(); }

  void check() const;
};

/// Full dynamical state of the extended system. Quantum mode keeps
/// rho > 0; classical mode keeps rho = Pi = 0 identically.
struct ExtendedState {
  double t = 0.0;
  double Q = 0.0;
  double P = 0.0;
  double rho = 0.0;
  double Pi = 0.0;
  BathState bath;
};

/// sqrt(rho^2 Pi^2 + hbar^2/4), the wavepacket uncertainty product; it is
/// >= hbar/2 for every representable state.
inline double uncertainty_product(const ExtendedState& s, double hbar) {
  return std::sqrt(s.rho * s.rho * s.Pi * s.Pi + 0.25 * hbar * hbar);
}

struct IntegratorConfig {
  double abs_tol = 1e-11;
  double rel_tol = 1e-11;
  double t_end = 1.0;
  double sample_dt = 0.01;
  double rho_floor = 1e-12;

  void check() const;
};

/// One output sample of a trajectory.
struct TrajectorySample {
  double t;
  double Q;
  double P;
  double rho;
  double Pi;
  double H;
};

/// Uniformly sampled time series plus the inputs that produced it.
struct Trajectory {
  std::vector<TrajectorySample> samples;
  WellParams params;
  BathSpec bath_spec;
  IntegratorConfig config;
};

/// One-sided power spectrum of Q(t) with derived summaries.
struct SpectrumResult {
  std::vector<double> freqs;
  std::vector<double> power;
  double peak_freq = 0.0;
  double integral = 0.0;
  double flatness = 0.0;
};

/// Initial conditions for the test particle and fluctuation sector.
struct InitialState {
  double q0 = 0.0;
  double p0 = 0.0;
  double rho0 = 0.0;
  double pi0 = 0.0;
};

/// Gate for raw user-supplied values: throws ConfigError naming the violated
/// invariant, returns normally when every type invariant holds.
void validate(const WellParams& params, const BathSpec& spec,
              const IntegratorConfig& cfg);

/// Mode-dependent initial-state invariants (rho0 > 0 in quantum mode,
/// rho0 = pi0 = 0 in classical mode).
void validate_initial_state(const WellParams& params, const InitialState& init);

}  // namespace dwell
