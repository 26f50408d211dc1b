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

#ifndef PULSEFORGE_OPTIMIZER_HPP
#define PULSEFORGE_OPTIMIZER_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pulseforge/dynamics.hpp"
#include "pulseforge/gatelab.hpp"

namespace pulseforge::opt {

// The boundary conditions fix (a1, a2) per segment, so the search space is
// the free pair (a3, a4) of each block.
struct Genome {
  std::array<double, 4> genes{};  // (a3, a4) block 1, (a3, a4) block 2
};

constexpr double kGeneLo = -0.6;
constexpr double kGeneHi = 0.6;

// a1 = -3 a3, a2 = -0.25 - 2 a4 per block; residuals vanish exactly.
pulse::PchCoefficients decode(const Genome& genome);  // throws OutOfBoundsError
Genome encode(const pulse::PchCoefficients& coeffs);

struct Objectives {
  double f1 = 1.0;  // weighted mean infidelity over the near-resonant grid
  double f2 = 1.0;  // max off-resonant excitation over the far grid
};

struct EvalConfig {
  double near_range_khz = 170.0;
  int near_points = 11;
  double far_lo_mhz = 8.9;
  double far_hi_mhz = 10.0;
  int far_points = 5;
  double weight_control0 = 0.6;  // objective share of the |01> input
  double weight_control1 = 0.4;  // objective share of the |11> input
  dynamics::Tolerances tol{};
  int amplitude_samples = 1024;
  int workers = 0;
};

struct Evaluation {
  Objectives obj;           // (1, 1) when infeasible
  bool feasible = false;
  double violation = 0.0;   // amplitude overshoot in MHz, 0 when feasible
  double max_amplitude_mhz = 0.0;
};

// Deterministic objective evaluation of one genome.
Evaluation evaluate(const Genome& genome, const pulse::GateSpec& gate,
                    const dynamics::SystemParams& params, const EvalConfig& cfg);

struct FrontMember {
  std::vector<double> genes;
  Objectives obj;
  bool feasible = false;
  int generation = 0;
};

struct ParetoFront {
  std::vector<FrontMember> members;  // mutually non-dominated
  std::uint64_t seed = 0;
  int population = 0;
  int generations = 0;
  int dim = 0;
  bool all_infeasible = false;
  std::vector<double> hypervolume_history;  // archive HV per generation, ref (1,1)
};

// Generic two-objective NSGA-II over a box-bounded real genome. Binary
// tournament, simulated binary crossover and polynomial mutation; the
// returned front is the archive of all feasible non-dominated solutions.
// Fully deterministic for a given seed: variation uses per-generation RNG
// streams and evaluation results are slotted by index.
struct EngineConfig {
  int dim = 4;
  double lo = kGeneLo;
  double hi = kGeneHi;
  int population = 24;
  int generations = 30;
  std::uint64_t seed = 1;
  double crossover_rate = 0.9;
  double eta_crossover = 15.0;
  double eta_mutation = 20.0;
  double mutation_rate = -1.0;  // < 0 selects 1/dim
  int workers = 0;
};

using EvalFn = std::function<Evaluation(const std::vector<double>&)>;
ParetoFront nsga2_engine(const EngineConfig& cfg, const EvalFn& fn);

// PCH-pulse search for one gate; pop must be even and >= 8.
ParetoFront nsga2(const pulse::GateSpec& gate, const dynamics::SystemParams& params,
                  const EvalConfig& eval_cfg, int population, int generations,
                  std::uint64_t seed);

enum class SelectionPolicy { knee, f1_priority, f2_cap };

// knee: member nearest (normalized) to the ideal point; f1_priority: best
// f1; f2_cap: best f1 subject to f2 <= cap (EmptyFeasibleSetError otherwise).
const FrontMember& select_solution(const ParetoFront& front, SelectionPolicy policy,
                                   double f2_cap_value = 0.0);

// 2-objective hypervolume dominated w.r.t. the reference point, minimization.
double hypervolume(const std::vector<FrontMember>& members, double ref1 = 1.0,
                   double ref2 = 1.0);

// Structured-text archive round trip (byte stable for a given front).
std::string front_to_text(const ParetoFront& front);
ParetoFront front_from_text(const std::string& text);

}  // namespace pulseforge::opt

#endif  // PULSEFORGE_OPTIMIZER_HPP
