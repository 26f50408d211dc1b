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

#ifndef PULSEFORGE_PULSE_HPP
#define PULSEFORGE_PULSE_HPP

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "pulseforge/errors.hpp"

namespace pulseforge::pulse {

using cxd = std::complex<double>;

// Angular units throughout: envelopes and field amplitudes are rad/us, times
// are us. User-facing ordinary frequencies (MHz) are converted by 2*pi at the
// interface, never inside.

// Cosine-harmonic weights for one pulse segment (four harmonics per segment).
struct CoefficientBlock {
  std::array<double, 4> a{};  // a_1 .. a_4

  // Boundary-condition residuals; both vanish iff the envelope is zero at
  // the segment endpoints.
  double residual_odd() const { return a[0] + 3.0 * a[2]; }
  double residual_even() const { return 2.0 * a[1] + 4.0 * a[3] + 0.5; }
};

struct PchCoefficients {
  std::vector<CoefficientBlock> blocks;  // block 0 drives odd segments, 1 even

  static PchCoefficients from_a8(const std::array<double, 8>& a);
  std::array<double, 8> to_a8() const;
};

// Controlled-gate parameters: rotation angle gamma about axis
// (sin(theta)cos(phi), sin(theta)sin(phi), cos(theta)) on the target,
// conditioned on the control being |1>.
struct GateSpec {
  double gamma = 0.0;
  double phi = 0.0;
  double theta = 0.0;
  std::string name;
};

struct Segment {
  double start = 0.0;
  double duration = 0.0;
  double theta = 0.0;
  double phi_c = 0.0;
  double phi_0t = 0.0;
  double phi_1t = 0.0;
  int block_index = 0;
};

struct SegmentSchedule {
  std::vector<Segment> segments;

  double total_duration() const;
  // Segment owning time t; the final segment owns its right endpoint.
  int segment_at(double t) const;  // throws OutOfRangeError
};

// Envelope value at local time t_local in [0, tau]:
//   pi/(2 tau) + sum_k a_k (k pi / tau) cos(k pi t_local / tau)
// The pulse area over a full segment is pi/2 for any coefficients.
double pch_envelope(const CoefficientBlock& block, double tau, double t_local);

struct BlockReport {
  double residual_odd = 0.0;
  double residual_even = 0.0;
  double endpoint_start = 0.0;  // envelope at t_local = 0   (rad/us)
  double endpoint_end = 0.0;    // envelope at t_local = tau (rad/us)
  double area_quadrature = 0.0;  // numerically integrated pulse area (rad)
  bool valid = false;            // both residuals within +-0.01
};

struct ValidationReport {
  std::vector<BlockReport> blocks;
  bool all_valid = false;
};

// Never throws; reports residuals, endpoint values and quadrature areas.
ValidationReport validate_coefficients(const PchCoefficients& coeffs, double tau);

// Two-segment gate schedule, optionally followed by the two compensation
// segments (theta' = pi - theta, phi' = phi + pi, gamma = 0). Segment phases:
//   segment 1: phi_c = 0,  phi_0t = 0,          phi_1t = phi
//   segment 2: phi_c = pi, phi_0t = pi + gamma, phi_1t = phi + pi + gamma
SegmentSchedule build_schedule(const GateSpec& gate, double tau, bool with_compensation);

struct FieldSample {
  cxd omega_c;   // control drive, rad/us
  cxd omega_0t;  // target |0>-<e> drive
  cxd omega_1t;  // target |1>-<e> drive
  double omega_t = 0.0;  // effective envelope, rad/us
  int segment = 0;
};

// Drive fields at global time t:
//   omega_c  = sqrt(3) Omega_t e^{i phi_c}
//   omega_0t = Omega_t sin(theta/2) e^{i phi_0t}
//   omega_1t = -Omega_t cos(theta/2) e^{i phi_1t}
FieldSample fields_at(const SegmentSchedule& schedule, const PchCoefficients& coeffs, double t);

// Peak of the strongest physical field, sqrt(3)*Omega_t/(2 pi), in MHz.
// Sampled on a uniform grid per segment; samples >= 256.
double max_field_amplitude(const SegmentSchedule& schedule, const PchCoefficients& coeffs,
                           int samples);

// Named gate presets (CNOT, CH, CZ, CS, CT) and published coefficient sets
// keyed by (gate, variant). Variants: "optimized" (constraint-consistent),
// "verbatim" (as printed, CNOT keeps the inconsistent a_4 sign), "baseline"
// (the unoptimized comparison set, gate independent).
struct PresetLibrary {
  std::vector<GateSpec> gates;
  struct Entry {
    std::string gate;     // gate name or "ALL"
    std::string variant;  // optimized | verbatim | baseline
    PchCoefficients coeffs;
  };
  std::vector<Entry> coefficient_sets;

  const GateSpec& gate(const std::string& name) const;  // throws ConfigError
  const PchCoefficients& coeffs(const std::string& gate, const std::string& variant) const;

  static PresetLibrary parse(const std::string& text);
  // PULSEFORGE_PRESETS env path when set, else the copy embedded at build time.
  static const PresetLibrary& load_default();
};

}  // namespace pulseforge::pulse

#endif  // PULSEFORGE_PULSE_HPP
