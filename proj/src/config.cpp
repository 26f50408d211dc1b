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

#include "pulseforge/config.hpp"

#include <algorithm>
#include <sstream>

#include "pulseforge/textio.hpp"

namespace pulseforge::cli {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(trim(cur));
  return parts;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw ConfigError("not a boolean: '" + v + "'");
}

int parse_int(const std::string& v) {
  const double d = util::parse_double(v);
  const int i = static_cast<int>(d);
  if (static_cast<double>(i) != d) throw ConfigError("not an integer: '" + v + "'");
  return i;
}

void set_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "gate") {
    cfg.gate = value;
  } else if (key == "gamma") {
    cfg.gamma = util::parse_double(value);
    cfg.raw_gate = true;
  } else if (key == "phi") {
    cfg.phi = util::parse_double(value);
    cfg.raw_gate = true;
  } else if (key == "theta") {
    cfg.theta = util::parse_double(value);
    cfg.raw_gate = true;
  } else if (key == "coeffs") {
    cfg.coeffs = value;
  } else if (key == "v_mhz") {
    cfg.params.v_mhz = util::parse_double(value);
  } else if (key == "tau_us") {
    cfg.params.tau_us = util::parse_double(value);
  } else if (key == "delta_khz") {
    cfg.params.delta_khz = util::parse_double(value);
  } else if (key == "gamma1_hz") {
    cfg.params.gamma1_hz = util::parse_double(value);
  } else if (key == "gamma2_hz") {
    cfg.params.gamma2_hz = util::parse_double(value);
  } else if (key == "gamma3_hz") {
    cfg.params.gamma3_hz = util::parse_double(value);
  } else if (key == "amplitude_cap_mhz") {
    cfg.params.amplitude_cap_mhz = util::parse_double(value);
  } else if (key == "model") {
    if (value == "full") {
      cfg.params.model = dynamics::Model::full;
    } else if (value == "rwa") {
      cfg.params.model = dynamics::Model::rwa;
    } else {
      throw ConfigError("model must be 'full' or 'rwa'");
    }
  } else if (key == "ee_detuning") {
    cfg.params.ee_detuning = parse_bool(value);
  } else if (key == "rel_tol") {
    cfg.tol.rel = util::parse_double(value);
  } else if (key == "abs_tol") {
    cfg.tol.abs = util::parse_double(value);
  } else if (key == "compensation") {
    cfg.compensation = parse_bool(value);
  } else if (key == "sweep_start") {
    cfg.sweep_start = util::parse_double(value);
    cfg.sweep_given = true;
  } else if (key == "sweep_stop") {
    cfg.sweep_stop = util::parse_double(value);
    cfg.sweep_given = true;
  } else if (key == "sweep_points") {
    cfg.sweep_points = parse_int(value);
    cfg.sweep_given = true;
  } else if (key == "v_grid") {
    cfg.v_grid.clear();
    for (const auto& tok : split(value, ',')) cfg.v_grid.push_back(util::parse_double(tok));
    if (cfg.v_grid.empty()) throw ConfigError("v_grid must list at least one value");
  } else if (key == "inputs") {
    cfg.inputs.clear();
    if (value == "all") {
      cfg.inputs = {"00", "01", "10", "11"};
    } else {
      for (const auto& tok : split(value, ',')) cfg.inputs.push_back(tok);
    }
    if (cfg.inputs.empty()) throw ConfigError("inputs must list at least one state");
  } else if (key == "samples") {
    cfg.samples = parse_int(value);
  } else if (key == "random_states") {
    cfg.random_states = parse_int(value);
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(util::parse_double(value));
  } else if (key == "pop") {
    cfg.pop = parse_int(value);
  } else if (key == "generations") {
    cfg.generations = parse_int(value);
  } else if (key == "policy") {
    cfg.policy = value;
  } else if (key == "workers") {
    cfg.workers = parse_int(value);
  } else if (key == "output") {
    cfg.output = value;
  } else {
    throw ConfigError("unknown config key: '" + key + "'");
  }
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    set_key(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return cfg;
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override must be key=value");
  set_key(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

pulse::GateSpec resolve_gate(const RunConfig& cfg) {
  if (cfg.raw_gate) {
    pulse::GateSpec g;
    g.gamma = cfg.gamma;
    g.phi = cfg.phi;
    g.theta = cfg.theta;
    g.name = "custom";
    return g;
  }
  return pulse::PresetLibrary::load_default().gate(cfg.gate);
}

pulse::PchCoefficients resolve_coeffs(const RunConfig& cfg) {
  if (cfg.coeffs.rfind("file:", 0) == 0) {
    const std::string path = cfg.coeffs.substr(5);
    std::istringstream in(util::read_file(path));
    std::array<double, 8> a{};
    for (double& v : a) {
      if (!(in >> v)) throw ConfigError("coefficient file must hold 8 numbers: " + path);
    }
    return pulse::PchCoefficients::from_a8(a);
  }
  if (cfg.coeffs.rfind("inline:", 0) == 0) {
    const auto toks = split(cfg.coeffs.substr(7), ',');
    if (toks.size() != 8) throw ConfigError("inline coefficients need 8 comma-separated values");
    std::array<double, 8> a{};
    for (std::size_t i = 0; i < 8; ++i) a[i] = util::parse_double(toks[i]);
    return pulse::PchCoefficients::from_a8(a);
  }
  const std::string gate_key = cfg.raw_gate ? "ALL" : cfg.gate;
  return pulse::PresetLibrary::load_default().coeffs(gate_key, cfg.coeffs);
}

}  // namespace pulseforge::cli
