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

#include "pulseforge/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "pulseforge/presets_text.hpp"

namespace pulseforge::pulse {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  // fmod can land exactly on 2*pi after the correction
  if (a >= kTwoPi) a -= kTwoPi;
  return a;
}

}  // namespace

PchCoefficients PchCoefficients::from_a8(const std::array<double, 8>& a) {
  PchCoefficients c;
  c.blocks.resize(2);
  for (int k = 0; k < 4; ++k) {
    c.blocks[0].a[static_cast<std::size_t>(k)] = a[static_cast<std::size_t>(k)];
    c.blocks[1].a[static_cast<std::size_t>(k)] = a[static_cast<std::size_t>(k + 4)];
  }
  return c;
}

std::array<double, 8> PchCoefficients::to_a8() const {
  std::array<double, 8> a{};
  for (int k = 0; k < 4; ++k) {
    a[static_cast<std::size_t>(k)] = blocks.at(0).a[static_cast<std::size_t>(k)];
    a[static_cast<std::size_t>(k + 4)] = blocks.at(1).a[static_cast<std::size_t>(k)];
  }
  return a;
}

double SegmentSchedule::total_duration() const {
  double t = 0.0;
  for (const auto& s : segments) t += s.duration;
  return t;
}

int SegmentSchedule::segment_at(double t) const {
  const double total = total_duration();
  const double slack = 1e-12 * std::max(total, 1.0);
  if (t < -slack || t > total + slack) {
    throw OutOfRangeError("time outside schedule");
  }
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const double end = segments[i].start + segments[i].duration;
    if (t < end || i + 1 == segments.size()) return static_cast<int>(i);
  }
  return static_cast<int>(segments.size()) - 1;
}

double pch_envelope(const CoefficientBlock& block, double tau, double t_local) {
  const double slack = 1e-12 * tau;
  if (t_local < -slack || t_local > tau + slack) {
    throw OutOfSegmentError("local time outside [0, tau]");
  }
  t_local = std::clamp(t_local, 0.0, tau);
  double omega = kPi / (2.0 * tau);
  for (int k = 1; k <= 4; ++k) {
    omega += block.a[static_cast<std::size_t>(k - 1)] * (k * kPi / tau) *
             std::cos(k * kPi * t_local / tau);
  }
  return omega;
}

ValidationReport validate_coefficients(const PchCoefficients& coeffs, double tau) {
  ValidationReport report;
  report.all_valid = true;
  for (const auto& block : coeffs.blocks) {
    BlockReport br;
    br.residual_odd = block.residual_odd();
    br.residual_even = block.residual_even();
    br.endpoint_start = pch_envelope(block, tau, 0.0);
    br.endpoint_end = pch_envelope(block, tau, tau);

    // Composite Simpson quadrature of the segment area.
    const int intervals = 2048;
    const double h = tau / intervals;
    double area = pch_envelope(block, tau, 0.0) + pch_envelope(block, tau, tau);
    for (int i = 1; i < intervals; ++i) {
      area += (i % 2 == 1 ? 4.0 : 2.0) * pch_envelope(block, tau, i * h);
    }
    br.area_quadrature = area * h / 3.0;

    br.valid = std::abs(br.residual_odd) <= 0.01 && std::abs(br.residual_even) <= 0.01;
    report.all_valid = report.all_valid && br.valid;
    report.blocks.push_back(br);
  }
  return report;
}

SegmentSchedule build_schedule(const GateSpec& gate, double tau, bool with_compensation) {
  SegmentSchedule schedule;
  auto add_pair = [&](double theta, double phi, double gamma) {
    Segment s1;
    s1.start = schedule.total_duration();
    s1.duration = tau;
    s1.theta = theta;
    s1.phi_c = 0.0;
    s1.phi_0t = 0.0;
    s1.phi_1t = wrap_angle(phi);
    s1.block_index = 0;
    schedule.segments.push_back(s1);

    Segment s2;
    s2.start = schedule.total_duration();
    s2.duration = tau;
    s2.theta = theta;
    s2.phi_c = kPi;
    s2.phi_0t = wrap_angle(kPi + gamma);
    s2.phi_1t = wrap_angle(phi + kPi + gamma);
    s2.block_index = 1;
    schedule.segments.push_back(s2);
  };

  add_pair(gate.theta, gate.phi, gate.gamma);
  if (with_compensation) {
    // Swapped bright/dark roles cancel the detuning phase; gamma = 0 keeps
    // the resonant action trivial.
    add_pair(kPi - gate.theta, gate.phi + kPi, 0.0);
  }
  return schedule;
}

FieldSample fields_at(const SegmentSchedule& schedule, const PchCoefficients& coeffs, double t) {
  const int idx = schedule.segment_at(t);
  const Segment& seg = schedule.segments[static_cast<std::size_t>(idx)];
  const auto& block = coeffs.blocks.at(static_cast<std::size_t>(seg.block_index));

  FieldSample f;
  f.segment = idx;
  f.omega_t = pch_envelope(block, seg.duration, t - seg.start);
  f.omega_c = std::sqrt(3.0) * f.omega_t * std::polar(1.0, seg.phi_c);
  f.omega_0t = f.omega_t * std::sin(seg.theta / 2.0) * std::polar(1.0, seg.phi_0t);
  f.omega_1t = -f.omega_t * std::cos(seg.theta / 2.0) * std::polar(1.0, seg.phi_1t);
  return f;
}

double max_field_amplitude(const SegmentSchedule& schedule, const PchCoefficients& coeffs,
                           int samples) {
  if (samples < 256) throw OutOfRangeError("max_field_amplitude needs samples >= 256");
  const int per_segment =
      (samples + static_cast<int>(schedule.segments.size()) - 1) /
      static_cast<int>(schedule.segments.size());
  double peak = 0.0;
  for (const auto& seg : schedule.segments) {
    const auto& block = coeffs.blocks.at(static_cast<std::size_t>(seg.block_index));
    for (int i = 0; i <= per_segment; ++i) {
      const double tl = seg.duration * i / per_segment;
      peak = std::max(peak, std::abs(pch_envelope(block, seg.duration, tl)));
    }
  }
  return std::sqrt(3.0) * peak / kTwoPi;
}

const GateSpec& PresetLibrary::gate(const std::string& name) const {
  for (const auto& g : gates) {
    if (g.name == name) return g;
  }
  throw ConfigError("unknown gate preset: " + name);
}

const PchCoefficients& PresetLibrary::coeffs(const std::string& gate_name,
                                             const std::string& variant) const {
  for (const auto& e : coefficient_sets) {
    if (e.gate == gate_name && e.variant == variant) return e.coeffs;
  }
  for (const auto& e : coefficient_sets) {
    if (e.gate == "ALL" && e.variant == variant) return e.coeffs;
  }
  throw ConfigError("no coefficient preset for gate=" + gate_name + " variant=" + variant);
}

PresetLibrary PresetLibrary::parse(const std::string& text) {
  PresetLibrary lib;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "gate") {
      GateSpec g;
      if (!(ls >> g.name >> g.gamma >> g.phi >> g.theta)) {
        throw ConfigError("preset line " + std::to_string(lineno) + ": bad gate record");
      }
      lib.gates.push_back(g);
    } else if (tag == "coeffs") {
      Entry e;
      std::array<double, 8> a{};
      if (!(ls >> e.gate >> e.variant >> a[0] >> a[1] >> a[2] >> a[3] >> a[4] >> a[5] >> a[6] >>
            a[7])) {
        throw ConfigError("preset line " + std::to_string(lineno) + ": bad coeffs record");
      }
      e.coeffs = PchCoefficients::from_a8(a);
      lib.coefficient_sets.push_back(e);
    } else {
      throw ConfigError("preset line " + std::to_string(lineno) + ": unknown record '" + tag +
                        "'");
    }
  }
  return lib;
}

const PresetLibrary& PresetLibrary::load_default() {
  static const PresetLibrary lib = [] {
    if (const char* path = std::getenv("PULSEFORGE_PRESETS")) {
      std::ifstream f(path);
      if (!f) throw ConfigError(std::string("cannot open PULSEFORGE_PRESETS file: ") + path);
      std::ostringstream buf;
      buf << f.rdbuf();
      return parse(buf.str());
    }
    return parse(kEmbeddedPresetsText);
  }();
  return lib;
}

}  // namespace pulseforge::pulse
