// Scratch probe used during bring-up; not part of the shipped test suite.

#include <chrono>
#include <cstdio>

#include "pulseforge/gatelab.hpp"
#include "pulseforge/kernels.hpp"

using namespace pulseforge;

int main(int argc, char** argv) {
  std::printf("kernels: %s\n", kernels::active().name);

  const auto& lib = pulse::PresetLibrary::load_default();
  const pulse::GateSpec cnot = lib.gate("CNOT");
  const pulse::GateSpec cs = lib.gate("CS");

  dynamics::SystemParams params;  // defaults: V=50, tau=0.5, gammas on

  // Analytic sanity: product of closed-form propagators vs target.
  for (const auto* g : {&cnot, &cs}) {
    const auto u1 = gatelab::analytic_segment_propagator(1, *g);
    const auto u2 = gatelab::analytic_segment_propagator(2, *g);
    std::printf("%s: |U1 unitarity|=%.2e |U2|=%.2e\n", g->name.c_str(), u1.unitarity_defect(),
                u2.unitarity_defect());
    const auto prod = u2 * u1;
    const auto tgt = gatelab::target_unitary(*g);
    double worst = 0.0;
    for (int c1 = 0; c1 < 2; ++c1)
      for (int t1 = 0; t1 < 2; ++t1)
        for (int c2 = 0; c2 < 2; ++c2)
          for (int t2 = 0; t2 < 2; ++t2) {
            const auto d = prod(dynamics::basis::comp(c1, t1), dynamics::basis::comp(c2, t2)) -
                           tgt(2 * c1 + t1, 2 * c2 + t2);
            worst = std::max(worst, std::abs(d));
          }
    std::printf("%s: max|U2*U1 - target| on comp block = %.3e\n", g->name.c_str(), worst);
  }

  // Numerical vs analytic, rwa, gamma = 0.
  {
    dynamics::SystemParams p0 = params;
    p0.model = dynamics::Model::rwa;
    p0.gamma1_hz = p0.gamma2_hz = p0.gamma3_hz = 0.0;
    const auto sched = pulse::build_schedule(cnot, p0.tau_us, false);
    const auto& coeffs = lib.coeffs("CNOT", "optimized");
    const auto u_num = dynamics::propagate_unitary(0.0, p0.tau_us, p0, sched, coeffs);
    const auto u_ana = gatelab::analytic_segment_propagator(1, cnot);
    std::printf("CNOT seg1 rwa numeric vs analytic: %.3e\n", u_num.max_abs_diff(u_ana));
    const auto u_num2 = dynamics::propagate_unitary(p0.tau_us, 2 * p0.tau_us, p0, sched, coeffs);
    const auto u_ana2 = gatelab::analytic_segment_propagator(2, cnot);
    std::printf("CNOT seg2 rwa numeric vs analytic: %.3e\n", u_num2.max_abs_diff(u_ana2));
  }

  // Timing + truth table, full model.
  {
    const auto t0 = std::chrono::steady_clock::now();
    const auto table = gatelab::truth_table(cnot, params, lib.coeffs("CNOT", "optimized"));
    const auto t1 = std::chrono::steady_clock::now();
    const double secs = std::chrono::duration<double>(t1 - t0).count();
    std::printf("CNOT truth table (%.2f s for 4 integrations):\n", secs);
    for (int i = 0; i < 4; ++i)
      std::printf("  %.6f %.6f %.6f %.6f\n", table[i][0], table[i][1], table[i][2], table[i][3]);
  }

  // Detuning means (the headline numbers).
  if (argc > 1) {
    const auto grid = gatelab::uniform_grid(-170.0, 170.0, 35);
    const std::vector<gatelab::InputState> inputs = {
        gatelab::InputState::computational("01"), gatelab::InputState::computational("11")};
    for (const auto* g : {&cnot, &cs}) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto sweep =
          gatelab::detuning_sweep(*g, params, lib.coeffs(g->name, "optimized"), inputs, grid);
      const auto t1 = std::chrono::steady_clock::now();
      std::printf("%s detuning means: |01> %.5f  |11> %.5f   (%.1f s)\n", g->name.c_str(),
                  sweep.mean[0], sweep.mean[1],
                  std::chrono::duration<double>(t1 - t0).count());
    }
    const auto& base = lib.coeffs("CNOT", "baseline");
    for (const auto* g : {&cnot, &cs}) {
      const auto sweep = gatelab::detuning_sweep(*g, params, base, inputs, grid);
      std::printf("%s baseline means: |01> %.5f  |11> %.5f\n", g->name.c_str(), sweep.mean[0],
                  sweep.mean[1]);
    }
  }
  return 0;
}
