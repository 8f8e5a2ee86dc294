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

#include <iosfwd>
#include <vector>

#include "dwell/model.hpp"
#include "dwell/rng.hpp"

// Seedable stochastic construction of the bath ensemble.

namespace dwell {

/// N i.i.d. draws uniform on [omega_min, omega_max]; a degenerate range
/// yields a constant array regardless of the generator state.
std::vector<double> sample_frequencies(const BathSpec& spec, Rng& rng);

/// Boltzmann-distributed initial conditions: per oscillator an energy
/// E ~ Exponential(mean T) and a phase phi ~ Uniform[0, 2*pi), mapped to
///   q - Q0 = sqrt(2 E / (m w^2)) sin(phi),   p = sqrt(2 m E) cos(phi).
/// Oscillators with w = 0 decouple from position: q = Q0 and
/// p = +-sqrt(2 m E) with random sign. T = 0 gives q = Q0, p = 0 exactly.
/// Displacements are sampled relative to the particle position Q0 since the
/// coupling is (q - Q)^2; the ensemble is centered on the particle.
BathState sample_thermal_state(std::vector<double> omegas, double bath_mass,
                               double temperature, double Q0, Rng& rng);

/// Frequencies plus thermal state in one call, consuming one Rng stream.
BathState sample_bath(const BathSpec& spec, double Q0, Rng& rng);

/// sum_n [ p_n^2/(2m) + (m/2) w_n^2 (q_n - Q)^2 ]
double bath_energy(const BathState& bath, double Q, double bath_mass);

/// CSV export (header: index,omega,q,p) for reproducibility audits.
void write_bath_csv(std::ostream& out, const BathState& bath);

}  // namespace dwell
