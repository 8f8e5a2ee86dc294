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

#include <cstddef>
#include <vector>

#include "dwell/model.hpp"

// Equations of motion for the extended system
//
//   dQ/dt   = P/M
//   dP/dt   = 2(mu - 6 lambda rho^2) Q - 4 lambda Q^3 + m sum w_n^2 (q_n - Q)
//   drho/dt = Pi/M
//   dPi/dt  = hbar^2/(4 M rho^3)
//             + 2(mu - 6 lambda Q^2 - (m/2) sum w_n^2) rho - 12 lambda rho^3
//   dq_n/dt = p_n/m
//   dp_n/dt = -m w_n^2 (q_n - Q)
//
// plus the conserved extended Hamiltonian of the total system and an
// adaptive eighth-order integrator with refined stepping to sample times.
// Classical mode (hbar = 0) drops the (rho, Pi) pair and the -6 lambda rho^2
// term structurally; the state dimension is 2+2N instead of 4+2N.

namespace dwell {

/// Rates for every state component; dq/dp lengths match the bath.
/// Classical mode has d_rho = d_pi = 0 structurally.
struct DerivativeVector {
  double dQ = 0.0;
  double dP = 0.0;
  double dRho = 0.0;
  double dPi = 0.0;
  std::vector<double> dq;
  std::vector<double> dp;
};

DerivativeVector rhs_extended(const ExtendedState& state,
                              const WellParams& params, double bath_mass,
                              double rho_floor = 1e-12);

/// Truncated Ehrenfest hierarchy in the Gaussian approximation (closed
/// system only):
///   dP/dt  = -sum_{n=0..n_max} V^(2n+1)(Q) rho^(2n) / (n! 2^n)
///   dPi/dt = hbar^2/(4 M rho^3)
///            - sum_{n=0..n_max} V^(2n+2)(Q) rho^(2n+1) / (n! 2^n)
/// For the quartic well all terms with n >= 2 vanish, so n_max >= 2
/// reproduces the closed forms of rhs_extended exactly.
DerivativeVector rhs_general_sum(const ExtendedState& state,
                                 const WellParams& params, int n_max,
                                 double rho_floor = 1e-12);

/// Conserved energy of the extended total system.
double extended_hamiltonian(const ExtendedState& state,
                            const WellParams& params, double bath_mass,
                            double rho_floor = 1e-12);

struct IntegrationReport {
  Trajectory trajectory;
  ExtendedState final_state;
  std::size_t n_steps_accepted = 0;
  std::size_t n_steps_rejected = 0;
  std::size_t n_rhs_evals = 0;
  /// Accumulated per-step local error estimate for the Q component, in
  /// absolute units; an a-posteriori bound on the integration error of Q
  /// excluding error transport by the flow.
  double accumulated_q_error = 0.0;
};

/// Adaptive integration of rhs_extended from state0.t to state0.t + t_end
/// with per-step local error controlled by (abs_tol, rel_tol). Output is
/// sampled at uniform sample_dt by landing steps exactly on sample times;
/// each sample records the extended Hamiltonian. Steps proposing
/// rho <= rho_floor are rejected and retried smaller. Throws NumericalError
/// (with the failure time) on step-size underflow, on rho collapsing to the
/// floor, and on non-finite state components.
IntegrationReport integrate(const ExtendedState& state0,
                            const WellParams& params, const BathSpec& spec,
                            const IntegratorConfig& cfg);

/// Assembles the t = 0 extended state from validated inputs and a realized
/// bath. Classical mode forces rho = pi = 0 (validated upstream).
ExtendedState make_initial_state(const WellParams& params,
                                 const InitialState& init, BathState bath);

}  // namespace dwell
