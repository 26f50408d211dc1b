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

#ifndef PULSEFORGE_GATELAB_HPP
#define PULSEFORGE_GATELAB_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pulseforge/dynamics.hpp"

namespace pulseforge::gatelab {

using dynamics::DensityMatrix;
using dynamics::SystemParams;
using dynamics::Tolerances;
using linalg::ComplexMatrix;
using linalg::cxd;
using linalg::StateVector;
using pulse::GateSpec;
using pulse::PchCoefficients;

// Target-qutrit basis change (|0>,|1>,|e>) -> (|b>,|d>,|e>):
//   |b> = sin(theta/2)|0> - cos(theta/2) e^{i phi} |1>
//   |d> = cos(theta/2) e^{-i phi} |0> + sin(theta/2)|1>
struct BrightDarkTransform {
  double theta = 0.0;
  double phi = 0.0;
  ComplexMatrix matrix{3, 3};  // columns (|b>, |d>, |e>)

  static BrightDarkTransform make(double theta, double phi);
};

// Conditional rotation in the 4-dim computational basis:
//   |0><0| (x) I + |1><1| (x) e^{-i gamma/2} exp(i (gamma/2) n.sigma),
// n = (sin t cos p, sin t sin p, cos t).
ComplexMatrix target_unitary(const GateSpec& gate);

// Closed-form ideal-resonance propagator of gate segment 1 or 2 in the
// computational basis (9x9). The pair composes exactly to target_unitary on
// the computational subspace.
ComplexMatrix analytic_segment_propagator(int segment_index, const GateSpec& gate);

struct GateResult {
  double fidelity = 0.0;
  double leakage = 0.0;
  DensityMatrix final_state;
  std::string gate;
  std::string input_label;
  double delta_khz = 0.0;
  double v_mhz = 0.0;
};

// Computational input with a printable label.
struct InputState {
  std::string label;
  StateVector state;

  // "00" | "01" | "10" | "11"
  static InputState computational(const std::string& label);
};

// Integrates the full schedule from |input>. Fidelity is measured against
// target_unitary applied to the computational projection of the input;
// leakage is the population outside the computational subspace at T.
GateResult run_gate(const GateSpec& gate, const SystemParams& params,
                    const PchCoefficients& coeffs, const StateVector& input,
                    bool with_compensation, Tolerances tol = {},
                    const std::string& input_label = {});

// Output-population matrix over the four computational inputs/outputs,
// row = input, column = output.
using TruthTable = std::array<std::array<double, 4>, 4>;
TruthTable truth_table(const GateSpec& gate, const SystemParams& params,
                       const PchCoefficients& coeffs, bool with_compensation = true,
                       Tolerances tol = {}, int workers = 0);

struct DetuningSweep {
  std::vector<std::string> input_labels;
  std::vector<double> delta_khz;
  // fidelity[input][grid point]
  std::vector<std::vector<double>> fidelity;
  std::vector<double> mean;  // per input, uniform-grid average
};

// Fidelity vs detuning with compensation enabled.
DetuningSweep detuning_sweep(const GateSpec& gate, const SystemParams& params,
                             const PchCoefficients& coeffs,
                             const std::vector<InputState>& inputs,
                             const std::vector<double>& delta_grid_khz, Tolerances tol = {},
                             int workers = 0);

struct OffresonantSweep {
  std::vector<std::string> input_labels;
  std::vector<double> delta_mhz;
  // excitation[input][grid point] = 1 - <psi0| rho(T) |psi0>
  std::vector<std::vector<double>> excitation;
  std::vector<double> max_beyond_8p9;  // per input
};

OffresonantSweep offresonant_sweep(const GateSpec& gate, const SystemParams& params,
                                   const PchCoefficients& coeffs,
                                   const std::vector<InputState>& inputs,
                                   const std::vector<double>& delta_grid_mhz,
                                   Tolerances tol = {}, int workers = 0);

// Mean fidelity over n Haar-style random computational states (normalized
// complex Gaussian amplitudes). Per-draw RNG streams are derived from the
// seed and the draw index, so the result is independent of scheduling.
double random_state_average(const GateSpec& gate, const SystemParams& params,
                            const PchCoefficients& coeffs, int n, std::uint64_t seed,
                            Tolerances tol = {}, int workers = 0);

struct InteractionSweep {
  std::vector<double> v_mhz;
  std::vector<double> v_over_omega_max;
  std::vector<double> fidelity;
};

InteractionSweep interaction_sweep(const GateSpec& gate, const SystemParams& params,
                                   const PchCoefficients& coeffs, const InputState& input,
                                   const std::vector<double>& v_grid_mhz, Tolerances tol = {},
                                   int workers = 0);

// Uniform inclusive grid helper shared by sweeps and the CLI.
std::vector<double> uniform_grid(double lo, double hi, int points);

}  // namespace pulseforge::gatelab

#endif  // PULSEFORGE_GATELAB_HPP
