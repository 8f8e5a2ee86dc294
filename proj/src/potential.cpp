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

#include "dwell/potential.hpp"

#include <cmath>

#include "dwell/kernels.hpp"

namespace dwell {

double potential_energy(double Q, const WellParams& params) {
  const double q2 = Q * Q;
  return (-params.mu + params.lambda * q2) * q2;
}

PotentialDerivatives potential_derivatives(double Q, const WellParams& params) {
  const double mu = params.mu;
  const double lam = params.lambda;
  return {
      (-2.0 * mu + 4.0 * lam * Q * Q) * Q,
      -2.0 * mu + 12.0 * lam * Q * Q,
      24.0 * lam * Q,
      24.0 * lam,
  };
}

double potential_derivative(int order, double Q, const WellParams& params) {
  switch (order) {
    case 0:
      return potential_energy(Q, params);
    case 1:
      return potential_derivatives(Q, params).d1;
    case 2:
      return potential_derivatives(Q, params).d2;
    case 3:
      return potential_derivatives(Q, params).d3;
    case 4:
      return potential_derivatives(Q, params).d4;
    default:
      return 0.0;
  }
}

double effective_quadratic_coefficient(const WellParams& params,
                                       std::span<const double> omegas,
                                       double bath_mass) {
  const double sum_w2 = kernels::sum_squares(omegas.data(), omegas.size());
  return params.mu - 0.5 * bath_mass * sum_w2;
}

double critical_oscillator_number(double mu, double bath_mass, double omega0,
                                  double delta_omega) {
  if (!(mu > 0.0)) throw ConfigError("critical oscillator number requires mu > 0");
  if (!(bath_mass > 0.0)) throw ConfigError("bath mass must be > 0");
  if (!(omega0 > 0.0)) throw ConfigError("omega0 must be > 0");
  if (delta_omega < 0.0 || delta_omega > 2.0 * omega0) {
    throw ConfigError("delta_omega must lie in [0, 2*omega0]");
  }
  const double band = 1.0 + delta_omega * delta_omega / (12.0 * omega0 * omega0);
  return 2.0 * mu / (bath_mass * omega0 * omega0) / band;
}

double effective_minimum_abs(double mu_eff, double lambda) {
  if (!(lambda > 0.0)) throw ConfigError("effective minimum requires lambda > 0");
  if (mu_eff <= 0.0) return 0.0;
  return std::sqrt(mu_eff / (2.0 * lambda));
}

double effective_barrier_depth(double mu_eff, double lambda) {
  if (!(lambda > 0.0)) throw ConfigError("barrier depth requires lambda > 0");
  if (mu_eff <= 0.0) return 0.0;
  return mu_eff * mu_eff / (4.0 * lambda);
}

}  // namespace dwell
