// Copyright 2026 The Pulseforge Authors
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

#ifndef PULSEFORGE_CONFIG_HPP
#define PULSEFORGE_CONFIG_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pulseforge/dynamics.hpp"
#include "pulseforge/pulse.hpp"

namespace pulseforge::cli {

// Flat key = value experiment description. Every field carries the
// simulation-setup default; unknown keys are rejected.
struct RunConfig {
  // Gate: either a named preset or raw angles (gamma/phi/theta keys).
  std::string gate = "CNOT";
  bool raw_gate = false;
  double gamma = 0.0, phi = 0.0, theta = 0.0;

  // Coefficient source: preset variant name, "file:<path>", or
  // "inline:a1,...,a8".
  std::string coeffs = "optimized";

  dynamics::SystemParams params{};
  dynamics::Tolerances tol{};
  bool compensation = true;

  double sweep_start = 0.0, sweep_stop = 0.0;
  int sweep_points = 0;
  bool sweep_given = false;
  std::vector<double> v_grid = {12.5, 25.0, 50.0, 100.0, 200.0};

  std::vector<std::string> inputs = {"01", "11"};
  int samples = 2048;
  int random_states = 1000;
  std::uint64_t seed = 1;

  int pop = 24;
  int generations = 30;
  std::string policy = "knee";

  int workers = 0;  // 0 = all cores
  std::string output;  // empty = stdout
};

// Parses `key = value` lines ('#' comments allowed). Throws ConfigError on
// unknown keys, bad values, or malformed lines.
RunConfig parse_config_text(const std::string& text);

// Applies one "key=value" override on top of an existing config.
void apply_override(RunConfig& cfg, const std::string& assignment);

// Resolves the gate spec and coefficient set named by the config.
pulse::GateSpec resolve_gate(const RunConfig& cfg);
pulse::PchCoefficients resolve_coeffs(const RunConfig& cfg);

}  // namespace pulseforge::cli

#endif  // PULSEFORGE_CONFIG_HPP
