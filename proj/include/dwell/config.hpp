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

#include <string>
#include <vector>

#include "dwell/model.hpp"

// Flat key-value configuration files. The schema is fixed: exactly the keys
//   mu, lambda, mass, hbar, n_osc, bath_mass, omega_min, omega_max,
//   temperature, seed, abs_tol, rel_tol, t_end, sample_dt, q0, p0, rho0, pi0
// are accepted; unknown keys are errors. Lines are `key = value`; '#' starts
// a comment.

namespace dwell {

struct ConfigBundle {
  WellParams params;
  BathSpec bath;
  IntegratorConfig integrator;
  InitialState initial;
};

/// Parses the file, applies `key=value` overrides last, then validates all
/// type invariants. Errors carry the offending key and line.
ConfigBundle parse_config(const std::string& path,
                          const std::vector<std::string>& overrides = {});

/// Parses config text (same format) from a string; `origin` names the
/// source in error messages.
ConfigBundle parse_config_text(const std::string& text,
                               const std::vector<std::string>& overrides = {},
                               const std::string& origin = "<string>");

/// Serializes a bundle back to config-file text; re-parsing reproduces the
/// bundle bit-exactly.
std::string serialize_config(const ConfigBundle& bundle);

}  // namespace dwell
