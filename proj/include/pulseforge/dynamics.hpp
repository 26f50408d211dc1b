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

#ifndef PULSEFORGE_DYNAMICS_HPP
#define PULSEFORGE_DYNAMICS_HPP

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "pulseforge/kernels.hpp"
#include "pulseforge/linalg.hpp"
#include "pulseforge/pulse.hpp"

namespace pulseforge::dynamics {

using linalg::ComplexMatrix;
using linalg::cxd;
using linalg::StateVector;

// Two-qutrit product basis, index = 3*control + target, levels ordered
// (0, 1, e):  |00> |01> |0e> |10> |11> |1e> |e0> |e1> |ee>.
namespace basis {
constexpr int dim = 9;
constexpr int index(int control, int target) { return 3 * control + target; }
constexpr std::array<int, 4> computational = {0, 1, 3, 4};
const char* label(int i);
// Maps computational index pair (c, t) in {0,1} to the 9-dim basis index.
constexpr int comp(int c, int t) { return 3 * c + t; }
}  // namespace basis

enum class Model { full, rwa };

// Physical constants of the simulated pair. Ordinary-frequency units at this
// surface (MHz / kHz / Hz per field); converted to angular rad/us internally.
struct SystemParams {
  double v_mhz = 50.0;        // dipole-dipole shift of |ee>
  double tau_us = 0.5;        // per-segment duration
  double delta_khz = 0.0;     // common detuning of both qutrits
  double gamma1_hz = 80.0;    // excited-state decay
  double gamma2_hz = 60.0;    // excited-state pure dephasing
  double gamma3_hz = 0.0;     // ground-state relaxation
  double amplitude_cap_mhz = 3.0;
  Model model = Model::full;
  bool ee_detuning = false;   // opt-in 2*Delta |ee><ee| term
};

// 9x9 Hermitian unit-trace state.
struct DensityMatrix {
  ComplexMatrix mat{basis::dim, basis::dim};

  static DensityMatrix from_pure(const StateVector& psi);

  double trace_real() const;
  double population(int i) const { return mat(i, i).real(); }
  double purity() const;  // Re tr(rho^2)
  double hermiticity_defect() const;
  double min_eigenvalue() const;
};

struct Tolerances {
  double rel = 1e-8;
  double abs = 1e-10;
};

// Hamiltonian at time t, in rad/us. Full model: drive + 2*pi*V |ee><ee| +
// detuning term on the four singly excited states. RWA model: the drive with
// its |ee> row/column removed, no V term, same detuning term.
ComplexMatrix hamiltonian_at(double t, const SystemParams& params,
                             const pulse::SegmentSchedule& schedule,
                             const pulse::PchCoefficients& coeffs);

// The three collective jump operators (decay, pure dephasing, ground-state
// relaxation), each a single operator summed over both qutrits. L3 is the
// zero matrix when gamma3 = 0.
std::vector<ComplexMatrix> jump_operators(const SystemParams& params);

// Precomputed per-segment drive structure and dissipator, shared by every
// right-hand-side evaluation of one trajectory. Immutable once built.
class LindbladContext {
 public:
  LindbladContext(const SystemParams& params, const pulse::SegmentSchedule& schedule,
                  const pulse::PchCoefficients& coeffs);

  const SystemParams& params() const { return params_; }
  const pulse::SegmentSchedule& schedule() const { return schedule_; }
  double max_step() const { return h_max_; }
  bool dissipative() const { return !jump_plans_.empty(); }

  // d(rho)/dt = -i(K rho - rho K^dag) + sum_a L_a rho L_a^dag with
  // K = H(t) - (i/2) sum_a L_a^dag L_a; segment resolved from t.
  void rhs(double t, const cxd* rho, cxd* out) const;
  void rhs_segment(int segment, double t, const cxd* rho, cxd* out) const;
  // Schroedinger version, out = -i H(t) columns; m columns of width 9.
  void rhs_unitary(int segment, double t, const cxd* psi, cxd* out, int ncols) const;

  double envelope(int segment, double t) const;

 private:
  SystemParams params_;
  pulse::SegmentSchedule schedule_;
  pulse::PchCoefficients coeffs_;
  ComplexMatrix k0_, k0_adj_;             // static part incl. -(i/2) G
  std::vector<ComplexMatrix> b_;          // unit-envelope drive per segment
  std::vector<kernels::JumpPlan> jump_plans_;
  double h_max_ = 0.0;
};

// Master-equation right-hand side at (rho, t).
ComplexMatrix lindblad_rhs(const DensityMatrix& rho, double t, const LindbladContext& ctx);

// Adaptive Dormand-Prince 4(5) integration of the master equation over
// [t0, t1], stepping segment by segment, re-symmetrizing after each accepted
// step. Throws StepSizeUnderflowError when the controller stalls.
DensityMatrix integrate(const DensityMatrix& rho0, double t0, double t1,
                        const SystemParams& params, const pulse::SegmentSchedule& schedule,
                        const pulse::PchCoefficients& coeffs, Tolerances tol = {});

// Same integrator against a caller-supplied Hamiltonian and jump list; used
// for closed-form checks where the drive is not a PCH schedule.
DensityMatrix integrate_generic(
    const DensityMatrix& rho0, double t0, double t1,
    const std::function<ComplexMatrix(double)>& hamiltonian,
    const std::vector<ComplexMatrix>& jumps, Tolerances tol = {}, double h_max = 0.0);

// Schroedinger propagation of a pure state; requires all decay rates zero.
StateVector propagate_pure(const StateVector& psi0, double t0, double t1,
                           const SystemParams& params, const pulse::SegmentSchedule& schedule,
                           const pulse::PchCoefficients& coeffs, Tolerances tol = {});

// Time-ordered propagator over [t0, t1] (identity at t0), all rates zero.
ComplexMatrix propagate_unitary(double t0, double t1, const SystemParams& params,
                                const pulse::SegmentSchedule& schedule,
                                const pulse::PchCoefficients& coeffs, Tolerances tol = {});

}  // namespace pulseforge::dynamics

#endif  // PULSEFORGE_DYNAMICS_HPP
