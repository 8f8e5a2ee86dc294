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

#include "dwell/simulation.hpp"

#include <ostream>

#include "dwell/bath.hpp"
#include "dwell/csv.hpp"

namespace dwell {

ExtendedState prepare_initial_state(const ConfigBundle& bundle) {
  validate(bundle.params, bundle.bath, bundle.integrator);
  validate_initial_state(bundle.params, bundle.initial);
  Rng rng(bundle.bath.seed, 0);
  BathState bath = sample_bath(bundle.bath, bundle.initial.q0, rng);
  return make_initial_state(bundle.params, bundle.initial, std::move(bath));
}

IntegrationReport run_simulation(const ConfigBundle& bundle) {
  const ExtendedState s0 = prepare_initial_state(bundle);
  return integrate(s0, bundle.params, bundle.bath, bundle.integrator);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,Q,P,rho,Pi,H\n";
  for (const auto& s : traj.samples) {
    out << csv::field(s.t) << ',' << csv::field(s.Q) << ',' << csv::field(s.P)
        << ',' << csv::field(s.rho) << ',' << csv::field(s.Pi) << ','
        << csv::field(s.H) << '\n';
  }
}

}  // namespace dwell
