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

#include "dwell/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "dwell/csv.hpp"

namespace dwell {
namespace {

constexpr const char* kKeys[] = {
    "mu",        "lambda",    "mass",      "hbar",   "n_osc",
    "bath_mass", "omega_min", "omega_max", "temperature", "seed",
    "abs_tol",   "rel_tol",   "t_end",     "sample_dt",   "q0",
    "p0",        "rho0",      "pi0",
};

bool known_key(const std::string& key) {
  for (const char* k : kKeys) {
    if (key == k) return true;
  }
  return false;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0' || errno == ERANGE) {
    throw ConfigError("key '" + key + "': cannot parse number '" + value + "'");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0' || errno == ERANGE) {
    throw ConfigError("key '" + key + "': cannot parse integer '" + value +
                      "'");
  }
  return static_cast<std::uint64_t>(v);
}

using KeyValues = std::map<std::string, std::string>;

void insert_pair(KeyValues& kv, const std::string& key,
                 const std::string& value, const std::string& where,
                 bool allow_replace) {
  if (!known_key(key)) {
    throw ConfigError("unknown key '" + key + "' (" + where + ")");
  }
  if (!allow_replace && kv.count(key) != 0) {
    throw ConfigError("duplicate key '" + key + "' (" + where + ")");
  }
  kv[key] = value;
}

ConfigBundle from_map(const KeyValues& kv) {
  for (const char* k : kKeys) {
    if (kv.count(k) == 0) {
      throw ConfigError(std::string("missing key '") + k + "'");
    }
  }
  auto num = [&](const char* k) { return parse_double(k, kv.at(k)); };

  ConfigBundle b;
  b.params.mu = num("mu");
  b.params.lambda = num("lambda");
  b.params.mass = num("mass");
  b.params.hbar = num("hbar");
  const double n_osc = num("n_osc");
  if (n_osc < 0.0 || n_osc != static_cast<double>(static_cast<std::size_t>(n_osc))) {
    throw ConfigError("key 'n_osc': must be a nonnegative integer");
  }
  b.bath.n_osc = static_cast<std::size_t>(n_osc);
  b.bath.mass = num("bath_mass");
  b.bath.omega_min = num("omega_min");
  b.bath.omega_max = num("omega_max");
  b.bath.temperature = num("temperature");
  b.bath.seed = parse_u64("seed", kv.at("seed"));
  b.integrator.abs_tol = num("abs_tol");
  b.integrator.rel_tol = num("rel_tol");
  b.integrator.t_end = num("t_end");
  b.integrator.sample_dt = num("sample_dt");
  b.initial.q0 = num("q0");
  b.initial.p0 = num("p0");
  b.initial.rho0 = num("rho0");
  b.initial.pi0 = num("pi0");

  validate(b.params, b.bath, b.integrator);
  validate_initial_state(b.params, b.initial);
  return b;
}

void apply_overrides(KeyValues& kv, const std::vector<std::string>& overrides) {
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("override '" + item + "' is not of the form key=value");
    }
    const std::string key = trim(item.substr(0, eq));
    const std::string value = trim(item.substr(eq + 1));
    if (value.empty()) {
      throw ConfigError("override '" + item + "' has an empty value");
    }
    insert_pair(kv, key, value, "override", /*allow_replace=*/true);
  }
}

KeyValues parse_lines(std::istream& in, const std::string& origin) {
  KeyValues kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos) {
      throw ConfigError("expected key = value (" + where + ")");
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("expected key = value (" + where + ")");
    }
    insert_pair(kv, key, value, where, /*allow_replace=*/false);
  }
  return kv;
}

}  // namespace

ConfigBundle parse_config(const std::string& path,
                          const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  KeyValues kv = parse_lines(in, path);
  apply_overrides(kv, overrides);
  return from_map(kv);
}

ConfigBundle parse_config_text(const std::string& text,
                               const std::vector<std::string>& overrides,
                               const std::string& origin) {
  std::istringstream in(text);
  KeyValues kv = parse_lines(in, origin);
  apply_overrides(kv, overrides);
  return from_map(kv);
}

std::string serialize_config(const ConfigBundle& b) {
  std::ostringstream out;
  out << "mu = " << csv::field(b.params.mu) << '\n'
      << "lambda = " << csv::field(b.params.lambda) << '\n'
      << "mass = " << csv::field(b.params.mass) << '\n'
      << "hbar = " << csv::field(b.params.hbar) << '\n'
      << "n_osc = " << b.bath.n_osc << '\n'
      << "bath_mass = " << csv::field(b.bath.mass) << '\n'
      << "omega_min = " << csv::field(b.bath.omega_min) << '\n'
      << "omega_max = " << csv::field(b.bath.omega_max) << '\n'
      << "temperature = " << csv::field(b.bath.temperature) << '\n'
      << "seed = " << b.bath.seed << '\n'
      << "abs_tol = " << csv::field(b.integrator.abs_tol) << '\n'
      << "rel_tol = " << csv::field(b.integrator.rel_tol) << '\n'
      << "t_end = " << csv::field(b.integrator.t_end) << '\n'
      << "sample_dt = " << csv::field(b.integrator.sample_dt) << '\n'
      << "q0 = " << csv::field(b.initial.q0) << '\n'
      << "p0 = " << csv::field(b.initial.p0) << '\n'
      << "rho0 = " << csv::field(b.initial.rho0) << '\n'
      << "pi0 = " << csv::field(b.initial.pi0) << '\n';
  return out.str();
}

}  // namespace dwell
