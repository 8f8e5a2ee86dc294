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

#include <span>

#include "dwell/model.hpp"

// Closed forms for the double well V(Q) = -mu Q^2 + lambda Q^4, its
// bath-renormalized variant, and the critical oscillator number.

namespace dwell {

/// First four derivatives of V at a point. Orders >= 5 vanish identically.
struct PotentialDerivatives {
  double d1;
  double d2;
  double d3;
  double d4;
};

/// V(Q) = -mu Q^2 + lambda Q^4
double potential_energy(double Q, const WellParams& params);

/// (V', V'', V''', V'''') at Q.
PotentialDerivatives potential_derivatives(double Q, const WellParams& params);

/// V^(order)(Q); zero for order >= 5 (and order 0 returns V itself).
double potential_derivative(int order, double Q, const WellParams& params);

/// Bath-renormalized quadratic coefficient mu_eff = mu - (m/2) sum w_n^2.
double effective_quadratic_coefficient(const WellParams& params,
                                       std::span<const double> omegas,
                                       double bath_mass);

/// Mean critical oscillator number (2 mu / (m w0^2)) / (1 + dw^2/(12 w0^2)),
/// real-valued. Requires mu > 0 (there is no bistability to destroy
/// otherwise), m > 0, w0 > 0 and 0 <= dw <= 2 w0.
double critical_oscillator_number(double mu, double bath_mass, double omega0,
                                  double delta_omega);

/// |Q| of the effective-potential minimum: sqrt(mu_eff/(2 lambda)) when
/// mu_eff > 0, otherwise 0 (monostable). Requires lambda > 0.
double effective_minimum_abs(double mu_eff, double lambda);

/// Barrier depth |V_eff(Q_min)| = mu_eff^2/(4 lambda) when mu_eff > 0,
/// otherwise 0. Requires lambda > 0.
double effective_barrier_depth(double mu_eff, double lambda);

}  // namespace dwell
