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

#include "dwell/bath.hpp"

#include <cmath>
#include <ostream>

#include "dwell/csv.hpp"
#include "dwell/kernels.hpp"

namespace dwell {

std::vector<double> sample_frequencies(const BathSpec& spec, Rng& rng) {
  std::vector<double> omegas(spec.n_osc);
  for (auto& w : omegas) w = rng.uniform(spec.omega_min, spec.omega_max);
  return omegas;
}

BathState sample_thermal_state(std::vector<double> omegas, double bath_mass,
                               double temperature, double Q0, Rng& rng) {
  const std::size_t n = omegas.size();
  BathState bath;
  bath.q.assign(n, Q0);
  bath.p.assign(n, 0.0);
  bath.omegas = std::move(omegas);
  if (temperature == 0.0) return bath;

  for (std::size_t i = 0; i < n; ++i) {
    const double w = bath.omegas[i];
    const double energy = rng.exponential(temperature);
    if (w == 0.0) {
      bath.p[i] = rng.sign() * std::sqrt(2.0 * bath_mass * energy);
      continue;
    }
    const double phi = rng.angle();
    bath.q[i] = Q0 + std::sqrt(2.0 * energy / (bath_mass * w * w)) * std::sin(phi);
    bath.p[i] = std::sqrt(2.0 * bath_mass * energy) * std::cos(phi);
  }
  return bath;
}

BathState sample_bath(const BathSpec& spec, double Q0, Rng& rng) {
  return sample_thermal_state(sample_frequencies(spec, rng), spec.mass,
                              spec.temperature, Q0, rng);
}

double bath_energy(const BathState& bath, double Q, double bath_mass) {
  bath.check();
  const std::size_t n = bath.size();
  if (n == 0) return 0.0;
  std::vector<double> w2(n);
  for (std::size_t i = 0; i < n; ++i) w2[i] = bath.omegas[i] * bath.omegas[i];
  return kernels::bath_energy_sum(w2.data(), bath.q.data(), bath.p.data(), Q,
                                  bath_mass, n);
}

void write_bath_csv(std::ostream& out, const BathState& bath) {
  out << "index,omega,q,p\n";
  for (std::size_t i = 0; i < bath.size(); ++i) {
    out << i << ',' << csv::field(bath.omegas[i]) << ','
        << csv::field(bath.q[i]) << ',' << csv::field(bath.p[i]) << '\n';
  }
}

}  // namespace dwell
