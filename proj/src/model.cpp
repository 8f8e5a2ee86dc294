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

#include "dwell/model.hpp"

#include <cmath>
#include <string>

namespace dwell {
namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void WellParams::check() const {
  require(finite(mu) && finite(lambda) && finite(mass) && finite(hbar),
          "well parameters must be finite");
  require(lambda >= 0.0, "lambda must be >= 0");
  if (lambda == 0.0) require(mu < 0.0, "lambda=0 requires mu<0");
  require(mass > 0.0, "mass must be > 0");
  require(hbar >= 0.0, "hbar must be >= 0");
}

void BathSpec::check() const {
  require(finite(mass) && finite(omega_min) && finite(omega_max) &&
              finite(temperature),
          "bath parameters must be finite");
  require(mass > 0.0, "bath_mass must be > 0");
  require(omega_min >= 0.0, "omega_min must be >= 0");
  require(omega_min <= omega_max, "omega bounds inverted");
  require(temperature >= 0.0, "temperature must be >= 0");
}

void BathState::check() const {
  require(q.size() == omegas.size() && p.size() == omegas.size(),
          "bath arrays must have identical length");
}

void IntegratorConfig::check() const {
  require(finite(abs_tol) && finite(rel_tol) && finite(t_end) &&
              finite(sample_dt) && finite(rho_floor),
          "integrator parameters must be finite");
  require(abs_tol > 0.0, "abs_tol must be > 0");
  require(rel_tol > 0.0, "rel_tol must be > 0");
  require(t_end > 0.0, "t_end must be > 0");
  require(sample_dt > 0.0, "sample_dt must be > 0");
  require(rho_floor > 0.0, "rho_floor must be > 0");
}

void validate(const WellParams& params, const BathSpec& spec,
              const IntegratorConfig& cfg) {
  params.check();
  spec.check();
  cfg.check();
}

void validate_initial_state(const WellParams& params,
                            const InitialState& init) {
  if (params.classical()) {
    if (init.rho0 != 0.0 || init.pi0 != 0.0) {
      throw ConfigError("classical mode (hbar=0) requires rho0=0 and pi0=0");
    }
  } else {
    if (!(init.rho0 > 0.0)) {
      throw ConfigError("quantum mode requires rho0 > 0");
    }
  }
}

}  // namespace dwell
