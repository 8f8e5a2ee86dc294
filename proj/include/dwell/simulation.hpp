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

#include "dwell/config.hpp"
#include "dwell/dynamics.hpp"

namespace dwell {

/// Realizes the bath (frequencies and thermal state from Rng stream 0 of the
/// configured seed, displacements centered on q0) and returns the t = 0
/// extended state.
ExtendedState prepare_initial_state(const ConfigBundle& bundle);

/// prepare_initial_state + integrate.
IntegrationReport run_simulation(const ConfigBundle& bundle);

/// Trajectory CSV with header `t,Q,P,rho,Pi,H`, one row per sample, 17
/// significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace dwell
