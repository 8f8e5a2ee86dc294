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

#include <stdexcept>
#include <string>

namespace dwell {

/// Invalid configuration or parameter set (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure during integration or analysis (CLI exit code 3).
/// Carries the simulation time at which the failure was detected.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double t_fail)
      : std::runtime_error(what + " (at t=" + std::to_string(t_fail) + ")"),
        t_fail_(t_fail) {}

  double failure_time() const { return t_fail_; }

 private:
  double t_fail_;
};

}  // namespace dwell
