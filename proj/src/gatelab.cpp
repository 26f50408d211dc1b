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

#include "pulseforge/gatelab.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "pulseforge/parallel.hpp"

namespace pulseforge::gatelab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt3 = 1.7320508075688772;
// sqrt(3)*pi/2 rotation of the dark-coupled sector
const double kCosD = std::cos(kSqrt3 * kPi / 2.0);
const double kSinD = std::sin(kSqrt3 * kPi / 2.0);

using dynamics::basis::comp;
using dynamics::basis::computational;
using dynamics::basis::dim;

// {b, d, e}-ordered index on the target slot.
constexpr int bde(int control, int target_bde) { return 3 * control + target_bde; }

double computational_population(const DensityMatrix& rho) {
  double p = 0.0;
  for (int i : computational) p += rho.population(i);
  return p;
}

StateVector embed_computational(const std::array<cxd, 4>& amp) {
  StateVector psi(dim);
  for (int c = 0; c < 2; ++c)
    for (int t = 0; t < 2; ++t) psi[comp(c, t)] = amp[static_cast<std::size_t>(2 * c + t)];
  return psi;
}

std::array<cxd, 4> project_computational(const StateVector& psi) {
  std::array<cxd, 4> amp{};
  for (int c = 0; c < 2; ++c)
    for (int t = 0; t < 2; ++t) amp[static_cast<std::size_t>(2 * c + t)] = psi[comp(c, t)];
  return amp;
}

}  // namespace

BrightDarkTransform BrightDarkTransform::make(double theta, double phi) {
  BrightDarkTransform w;
  w.theta = theta;
  w.phi = phi;
  const double sh = std::sin(theta / 2.0);
  const double ch = std::cos(theta / 2.0);
  // columns (|b>, |d>, |e>)
  w.matrix(0, 0) = sh;
  w.matrix(1, 0) = -ch * std::polar(1.0, phi);
  w.matrix(0, 1) = ch * std::polar(1.0, -phi);
  w.matrix(1, 1) = sh;
  w.matrix(2, 2) = 1.0;
  return w;
}

ComplexMatrix target_unitary(const GateSpec& gate) {
  const double g2 = gate.gamma / 2.0;
  const cxd phase = std::polar(1.0, -g2);
  const double st = std::sin(gate.theta);
  const double ct = std::cos(gate.theta);

  // exp(i g2 n.sigma) = cos(g2) I + i sin(g2) n.sigma
  ComplexMatrix r(2, 2);
  const cxd is = cxd(0.0, std::sin(g2));
  r(0, 0) = std::cos(g2) + is * ct;
  r(1, 1) = std::cos(g2) - is * ct;
  r(0, 1) = is * st * std::polar(1.0, -gate.phi);
  r(1, 0) = is * st * std::polar(1.0, gate.phi);

  ComplexMatrix u(4, 4);
  u(0, 0) = 1.0;
  u(1, 1) = 1.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) u(2 + i, 2 + j) = phase * r(i, j);
  return u;
}

ComplexMatrix analytic_segment_propagator(int segment_index, const GateSpec& gate) {
  if (segment_index != 1 && segment_index != 2) {
    throw OutOfRangeError("analytic propagator exists for segments 1 and 2");
  }

  // Closed form in the {b, d, e} target basis. The pi-area rotation of the
  // {|0b>, |T>} pair gives -1 on both; the sqrt(3)pi/2 area rotates the
  // d-coupled pair; the pi/2 area fully transfers |1b> <-> |1e>. Segment 2
  // flips the drive sign and carries the geometric phase gamma.
  ComplexMatrix u(dim, dim);
  const bool second = segment_index == 2;
  const cxd eg = std::polar(1.0, gate.gamma);   // e^{+i gamma}
  const cxd egc = std::conj(eg);

  u(bde(0, 0), bde(0, 0)) = -1.0;  // |0b>
  u(bde(1, 1), bde(1, 1)) = 1.0;   // |1d> decoupled
  u(bde(2, 2), bde(2, 2)) = 1.0;   // |ee> decoupled

  // {|1b>, |1e>} sector.
  if (!second) {
    u(bde(1, 0), bde(1, 2)) = cxd(0.0, -1.0);
    u(bde(1, 2), bde(1, 0)) = cxd(0.0, -1.0);
  } else {
    u(bde(1, 0), bde(1, 2)) = cxd(0.0, 1.0) * egc;
    u(bde(1, 2), bde(1, 0)) = cxd(0.0, 1.0) * eg;
  }

  // {|0d>, |ed>} sector.
  const cxd ds = second ? cxd(0.0, kSinD) : cxd(0.0, -kSinD);
  u(bde(0, 1), bde(0, 1)) = kCosD;
  u(bde(2, 1), bde(2, 1)) = kCosD;
  u(bde(0, 1), bde(2, 1)) = ds;
  u(bde(2, 1), bde(0, 1)) = ds;

  // {|eb>, |0e>} sector, I - 2 P_T with |T> = (sqrt(3)|eb> + e^{i gamma}|0e>)/2
  // (gamma enters in segment 2 only).
  const cxd tphase = second ? eg : cxd(1.0);
  u(bde(2, 0), bde(2, 0)) = -0.5;
  u(bde(0, 2), bde(0, 2)) = 0.5;
  u(bde(2, 0), bde(0, 2)) = -kSqrt3 / 2.0 * std::conj(tphase);
  u(bde(0, 2), bde(2, 0)) = -kSqrt3 / 2.0 * tphase;

  const BrightDarkTransform w = BrightDarkTransform::make(gate.theta, gate.phi);
  const ComplexMatrix full_w = linalg::kron(ComplexMatrix::identity(3), w.matrix);
  return full_w * u * full_w.adjoint();
}

InputState InputState::computational(const std::string& label) {
  if (label.size() != 2 || (label[0] != '0' && label[0] != '1') ||
      (label[1] != '0' && label[1] != '1')) {
    throw ConfigError("computational state label must be 00, 01, 10 or 11");
  }
  InputState s;
  s.label = label;
  s.state = StateVector::basis(dim, comp(label[0] - '0', label[1] - '0'));
  return s;
}

GateResult run_gate(const GateSpec& gate, const SystemParams& params,
                    const PchCoefficients& coeffs, const StateVector& input,
                    bool with_compensation, Tolerances tol, const std::string& input_label) {
  const pulse::SegmentSchedule schedule =
      pulse::build_schedule(gate, params.tau_us, with_compensation);
  const DensityMatrix rho0 = DensityMatrix::from_pure(input);
  const DensityMatrix rho_t =
      dynamics::integrate(rho0, 0.0, schedule.total_duration(), params, schedule, coeffs, tol);

  const std::array<cxd, 4> in4 = project_computational(input);
  const ComplexMatrix u4 = target_unitary(gate);
  std::array<cxd, 4> ideal4{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) ideal4[static_cast<std::size_t>(i)] += u4(i, j) * in4[static_cast<std::size_t>(j)];
  const StateVector psi_ideal = embed_computational(ideal4);

  GateResult res;
  res.final_state = rho_t;
  res.fidelity = linalg::expectation(rho_t.mat, psi_ideal);
  res.leakage = 1.0 - computational_population(rho_t);
  res.gate = gate.name;
  res.input_label = input_label;
  res.delta_khz = params.delta_khz;
  res.v_mhz = params.v_mhz;
  return res;
}

TruthTable truth_table(const GateSpec& gate, const SystemParams& params,
                       const PchCoefficients& coeffs, bool with_compensation, Tolerances tol,
                       int workers) {
  static const char* labels[4] = {"00", "01", "10", "11"};
  TruthTable table{};
  util::parallel_for(4, workers, [&](int i) {
    const InputState in = InputState::computational(labels[i]);
    const GateResult r = run_gate(gate, params, coeffs, in.state, with_compensation, tol, in.label);
    for (int j = 0; j < 4; ++j) {
      const int c = j / 2, t = j % 2;
      table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          r.final_state.population(comp(c, t));
    }
  });
  return table;
}

DetuningSweep detuning_sweep(const GateSpec& gate, const SystemParams& params,
                             const PchCoefficients& coeffs,
                             const std::vector<InputState>& inputs,
                             const std::vector<double>& delta_grid_khz, Tolerances tol,
                             int workers) {
  DetuningSweep sweep;
  sweep.delta_khz = delta_grid_khz;
  const int ni = static_cast<int>(inputs.size());
  const int ng = static_cast<int>(delta_grid_khz.size());
  sweep.fidelity.assign(static_cast<std::size_t>(ni),
                        std::vector<double>(static_cast<std::size_t>(ng), 0.0));
  for (const auto& in : inputs) sweep.input_labels.push_back(in.label);

  util::parallel_for(ni * ng, workers, [&](int idx) {
    const int i = idx / ng;
    const int g = idx % ng;
    SystemParams p = params;
    p.delta_khz = delta_grid_khz[static_cast<std::size_t>(g)];
    try {
      const GateResult r = run_gate(gate, p, coeffs, inputs[static_cast<std::size_t>(i)].state,
                                    true, tol, inputs[static_cast<std::size_t>(i)].label);
      sweep.fidelity[static_cast<std::size_t>(i)][static_cast<std::size_t>(g)] = r.fidelity;
    } catch (const Error& e) {
      throw Error(std::string(e.what()) + " at delta_khz=" +
                  std::to_string(p.delta_khz) + " input=" +
                  inputs[static_cast<std::size_t>(i)].label);
    }
  });

  for (int i = 0; i < ni; ++i) {
    double s = 0.0;
    for (double f : sweep.fidelity[static_cast<std::size_t>(i)]) s += f;
    sweep.mean.push_back(s / ng);
  }
  return sweep;
}

OffresonantSweep offresonant_sweep(const GateSpec& gate, const SystemParams& params,
                                   const PchCoefficients& coeffs,
                                   const std::vector<InputState>& inputs,
                                   const std::vector<double>& delta_grid_mhz, Tolerances tol,
                                   int workers) {
  for (double d : delta_grid_mhz) {
    if (d < 8.5 || d > 10.0) throw OutOfRangeError("off-resonant grid must lie in [8.5, 10] MHz");
  }
  OffresonantSweep sweep;
  sweep.delta_mhz = delta_grid_mhz;
  const int ni = static_cast<int>(inputs.size());
  const int ng = static_cast<int>(delta_grid_mhz.size());
  sweep.excitation.assign(static_cast<std::size_t>(ni),
                          std::vector<double>(static_cast<std::size_t>(ng), 0.0));
  for (const auto& in : inputs) sweep.input_labels.push_back(in.label);

  util::parallel_for(ni * ng, workers, [&](int idx) {
    const int i = idx / ng;
    const int g = idx % ng;
    SystemParams p = params;
    p.delta_khz = delta_grid_mhz[static_cast<std::size_t>(g)] * 1e3;
    const auto& input = inputs[static_cast<std::size_t>(i)];
    try {
      const GateResult r = run_gate(gate, p, coeffs, input.state, true, tol, input.label);
      const double stay = linalg::expectation(r.final_state.mat, input.state);
      sweep.excitation[static_cast<std::size_t>(i)][static_cast<std::size_t>(g)] = 1.0 - stay;
    } catch (const Error& e) {
      throw Error(std::string(e.what()) + " at delta_mhz=" +
                  std::to_string(delta_grid_mhz[static_cast<std::size_t>(g)]) + " input=" +
                  input.label);
    }
  });

  for (int i = 0; i < ni; ++i) {
    double worst = 0.0;
    for (int g = 0; g < ng; ++g) {
      if (delta_grid_mhz[static_cast<std::size_t>(g)] >= 8.9 - 1e-12) {
        worst = std::max(worst, sweep.excitation[static_cast<std::size_t>(i)][static_cast<std::size_t>(g)]);
      }
    }
    sweep.max_beyond_8p9.push_back(worst);
  }
  return sweep;
}

double random_state_average(const GateSpec& gate, const SystemParams& params,
                            const PchCoefficients& coeffs, int n, std::uint64_t seed,
                            Tolerances tol, int workers) {
  if (n < 1) throw OutOfRangeError("random_state_average needs n >= 1");
  std::vector<double> fid(static_cast<std::size_t>(n), 0.0);
  util::parallel_for(n, workers, [&](int i) {
    std::mt19937_64 rng(util::derive_seed(seed, static_cast<std::uint64_t>(i)));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::array<cxd, 4> amp{};
    double norm = 0.0;
    for (auto& a : amp) {
      a = cxd(gauss(rng), gauss(rng));
      norm += std::norm(a);
    }
    norm = std::sqrt(norm);
    for (auto& a : amp) a /= norm;
    const StateVector input = embed_computational(amp);
    fid[static_cast<std::size_t>(i)] =
        run_gate(gate, params, coeffs, input, true, tol).fidelity;
  });
  double s = 0.0;
  for (double f : fid) s += f;
  return s / n;
}

InteractionSweep interaction_sweep(const GateSpec& gate, const SystemParams& params,
                                   const PchCoefficients& coeffs, const InputState& input,
                                   const std::vector<double>& v_grid_mhz, Tolerances tol,
                                   int workers) {
  for (double v : v_grid_mhz) {
    if (v <= 0.0) throw OutOfRangeError("interaction strengths must be positive");
  }
  InteractionSweep sweep;
  sweep.v_mhz = v_grid_mhz;
  sweep.fidelity.assign(v_grid_mhz.size(), 0.0);

  const pulse::SegmentSchedule schedule = pulse::build_schedule(gate, params.tau_us, true);
  const double omega_max = pulse::max_field_amplitude(schedule, coeffs, 2048);
  for (double v : v_grid_mhz) sweep.v_over_omega_max.push_back(v / omega_max);

  util::parallel_for(static_cast<int>(v_grid_mhz.size()), workers, [&](int i) {
    SystemParams p = params;
    p.v_mhz = v_grid_mhz[static_cast<std::size_t>(i)];
    try {
      sweep.fidelity[static_cast<std::size_t>(i)] =
          run_gate(gate, p, coeffs, input.state, true, tol, input.label).fidelity;
    } catch (const Error& e) {
      throw Error(std::string(e.what()) + " at v_mhz=" + std::to_string(p.v_mhz));
    }
  });
  return sweep;
}

std::vector<double> uniform_grid(double lo, double hi, int points) {
  if (points < 1) throw OutOfRangeError("grid needs at least one point");
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(points));
  if (points == 1) {
    g.push_back(0.5 * (lo + hi));
    return g;
  }
  for (int i = 0; i < points; ++i) g.push_back(lo + (hi - lo) * i / (points - 1));
  return g;
}

}  // namespace pulseforge::gatelab
