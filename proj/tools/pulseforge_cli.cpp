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

// Config-driven experiment runner. Subcommands mirror the library surface:
// validate, waveform, truth-table, sweep-detuning, sweep-offres, sweep-v,
// random-states, optimize. Exit codes: 0 success, 2 validation findings,
// 3 config error, 4 runtime/integration failure.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pulseforge/config.hpp"
#include "pulseforge/gatelab.hpp"
#include "pulseforge/optimizer.hpp"
#include "pulseforge/textio.hpp"

namespace {

using namespace pulseforge;
using util::format_double;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitConfig = 3;
constexpr int kExitRuntime = 4;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string output;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("-c,--config", args.config_path, "config file (key = value lines)");
  cmd->add_option("-s,--set", args.overrides, "override, key=value (repeatable)");
  cmd->add_option("-o,--output", args.output, "output file (default stdout)");
}

cli::RunConfig load_config(const CommonArgs& args) {
  cli::RunConfig cfg;
  if (!args.config_path.empty()) {
    cfg = cli::parse_config_text(util::read_file(args.config_path));
  }
  for (const auto& ov : args.overrides) cli::apply_override(cfg, ov);
  if (!args.output.empty()) cfg.output = args.output;
  return cfg;
}

void emit(const cli::RunConfig& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    util::write_file(cfg.output, text);
  }
}

std::vector<gatelab::InputState> resolve_inputs(const cli::RunConfig& cfg) {
  std::vector<gatelab::InputState> inputs;
  for (const auto& label : cfg.inputs) inputs.push_back(gatelab::InputState::computational(label));
  return inputs;
}

std::vector<double> sweep_grid(const cli::RunConfig& cfg, double def_start, double def_stop,
                               int def_points) {
  if (!cfg.sweep_given) return gatelab::uniform_grid(def_start, def_stop, def_points);
  if (cfg.sweep_points < 1) throw ConfigError("sweep_points must be >= 1");
  return gatelab::uniform_grid(cfg.sweep_start, cfg.sweep_stop, cfg.sweep_points);
}

int cmd_validate(const cli::RunConfig& cfg) {
  const auto coeffs = cli::resolve_coeffs(cfg);
  const auto gate = cli::resolve_gate(cfg);
  const auto report = pulse::validate_coefficients(coeffs, cfg.params.tau_us);
  const auto schedule = pulse::build_schedule(gate, cfg.params.tau_us, cfg.compensation);
  const double amp = pulse::max_field_amplitude(schedule, coeffs, std::max(cfg.samples, 256));

  std::ostringstream out;
  out << "gate " << gate.name << "\n";
  for (std::size_t b = 0; b < report.blocks.size(); ++b) {
    const auto& blk = report.blocks[b];
    out << "block " << (b + 1) << ": r_odd=" << format_double(blk.residual_odd)
        << " r_even=" << format_double(blk.residual_even)
        << " endpoint_start=" << format_double(blk.endpoint_start)
        << " endpoint_end=" << format_double(blk.endpoint_end)
        << " area=" << format_double(blk.area_quadrature)
        << (blk.valid ? " ok" : " INVALID") << "\n";
  }
  out << "max_field_amplitude_mhz " << format_double(amp)
      << (amp <= cfg.params.amplitude_cap_mhz ? " (within cap)" : " (EXCEEDS CAP)") << "\n";
  emit(cfg, out.str());
  return report.all_valid ? kExitOk : kExitValidation;
}

int cmd_waveform(const cli::RunConfig& cfg) {
  const auto coeffs = cli::resolve_coeffs(cfg);
  const auto gate = cli::resolve_gate(cfg);
  const auto schedule = pulse::build_schedule(gate, cfg.params.tau_us, cfg.compensation);
  const double total = schedule.total_duration();
  const int n = std::max(cfg.samples, 2);
  constexpr double kTwoPi = 6.283185307179586;

  std::ostringstream out;
  out << "t_us,omega_c_re_mhz,omega_c_im_mhz,omega_0t_re_mhz,omega_0t_im_mhz,"
         "omega_1t_re_mhz,omega_1t_im_mhz\n";
  int last_segment = -1;
  for (int i = 0; i < n; ++i) {
    const double t = total * i / (n - 1);
    const auto f = pulse::fields_at(schedule, coeffs, t);
    if (f.segment != last_segment) {
      out << "# segment " << (f.segment + 1) << " start t_us="
          << format_double(schedule.segments[static_cast<std::size_t>(f.segment)].start) << "\n";
      last_segment = f.segment;
    }
    out << format_double(t);
    for (const auto& w : {f.omega_c, f.omega_0t, f.omega_1t}) {
      out << "," << format_double(w.real() / kTwoPi) << "," << format_double(w.imag() / kTwoPi);
    }
    out << "\n";
  }
  emit(cfg, out.str());
  return kExitOk;
}

int cmd_truth_table(const cli::RunConfig& cfg) {
  const auto table = gatelab::truth_table(cli::resolve_gate(cfg), cfg.params,
                                          cli::resolve_coeffs(cfg), cfg.compensation, cfg.tol,
                                          cfg.workers);
  std::ostringstream out;
  out << "input,p00,p01,p10,p11\n";
  static const char* labels[4] = {"00", "01", "10", "11"};
  for (int i = 0; i < 4; ++i) {
    out << labels[i];
    for (int j = 0; j < 4; ++j) out << "," << format_double(table[i][j]);
    out << "\n";
  }
  emit(cfg, out.str());
  return kExitOk;
}

int cmd_sweep_detuning(const cli::RunConfig& cfg) {
  const auto inputs = resolve_inputs(cfg);
  const auto grid = sweep_grid(cfg, -170.0, 170.0, 35);
  const auto sweep = gatelab::detuning_sweep(cli::resolve_gate(cfg), cfg.params,
                                             cli::resolve_coeffs(cfg), inputs, grid, cfg.tol,
                                             cfg.workers);
  std::ostringstream out;
  out << "delta_khz";
  for (const auto& l : sweep.input_labels) out << ",fidelity_" << l;
  out << "\n";
  for (std::size_t g = 0; g < grid.size(); ++g) {
    out << format_double(grid[g]);
    for (std::size_t i = 0; i < inputs.size(); ++i)
      out << "," << format_double(sweep.fidelity[i][g]);
    out << "\n";
  }
  out << "# mean";
  for (double m : sweep.mean) out << "," << format_double(m);
  out << "\n";
  emit(cfg, out.str());
  return kExitOk;
}

int cmd_sweep_offres(const cli::RunConfig& cfg) {
  const auto inputs = resolve_inputs(cfg);
  const auto grid = sweep_grid(cfg, 8.5, 10.0, 25);
  const auto sweep = gatelab::offresonant_sweep(cli::resolve_gate(cfg), cfg.params,
                                                cli::resolve_coeffs(cfg), inputs, grid, cfg.tol,
                                                cfg.workers);
  std::ostringstream out;
  out << "delta_mhz";
  for (const auto& l : sweep.input_labels) out << ",excitation_" << l;
  out << "\n";
  for (std::size_t g = 0; g < grid.size(); ++g) {
    out << format_double(grid[g]);
    for (std::size_t i = 0; i < inputs.size(); ++i)
      out << "," << format_double(sweep.excitation[i][g]);
    out << "\n";
  }
  out << "# max_beyond_8.9_mhz";
  for (double m : sweep.max_beyond_8p9) out << "," << format_double(m);
  out << "\n";
  emit(cfg, out.str());
  return kExitOk;
}

int cmd_sweep_v(const cli::RunConfig& cfg) {
  if (cfg.inputs.size() != 1) {
    throw ConfigError("sweep-v expects exactly one input state (key: inputs)");
  }
  const auto input = gatelab::InputState::computational(cfg.inputs.front());
  const auto sweep = gatelab::interaction_sweep(cli::resolve_gate(cfg), cfg.params,
                                                cli::resolve_coeffs(cfg), input, cfg.v_grid,
                                                cfg.tol, cfg.workers);
  std::ostringstream out;
  out << "v_mhz,v_over_omega_max,fidelity_" << input.label << "\n";
  for (std::size_t i = 0; i < sweep.v_mhz.size(); ++i) {
    out << format_double(sweep.v_mhz[i]) << "," << format_double(sweep.v_over_omega_max[i])
        << "," << format_double(sweep.fidelity[i]) << "\n";
  }
  emit(cfg, out.str());
  return kExitOk;
}

int cmd_random_states(const cli::RunConfig& cfg) {
  const double mean = gatelab::random_state_average(cli::resolve_gate(cfg), cfg.params,
                                                    cli::resolve_coeffs(cfg), cfg.random_states,
                                                    cfg.seed, cfg.tol, cfg.workers);
  std::ostringstream out;
  out << "n,seed,mean_fidelity\n";
  out << cfg.random_states << "," << cfg.seed << "," << format_double(mean) << "\n";
  emit(cfg, out.str());
  return kExitOk;
}

int cmd_optimize(const cli::RunConfig& cfg) {
  const auto gate = cli::resolve_gate(cfg);
  opt::EvalConfig eval_cfg;
  eval_cfg.tol = cfg.tol;
  eval_cfg.workers = cfg.workers;

  const auto front = opt::nsga2(gate, cfg.params, eval_cfg, cfg.pop, cfg.generations, cfg.seed);

  opt::SelectionPolicy policy = opt::SelectionPolicy::knee;
  double cap = 0.0;
  if (cfg.policy == "knee") {
    policy = opt::SelectionPolicy::knee;
  } else if (cfg.policy == "f1") {
    policy = opt::SelectionPolicy::f1_priority;
  } else if (cfg.policy.rfind("f2cap:", 0) == 0) {
    policy = opt::SelectionPolicy::f2_cap;
    cap = util::parse_double(cfg.policy.substr(6));
  } else {
    throw ConfigError("policy must be knee, f1, or f2cap:<value>");
  }

  const std::string archive_path = cfg.output.empty() ? "pareto_archive.txt" : cfg.output;
  util::write_file(archive_path, opt::front_to_text(front));

  std::ostringstream out;
  out << "archive " << archive_path << " members " << front.members.size()
      << (front.all_infeasible ? " (all infeasible)" : "") << "\n";

  const auto& chosen = opt::select_solution(front, policy, cap);
  opt::Genome genome;
  std::copy(chosen.genes.begin(), chosen.genes.end(), genome.genes.begin());
  out << "selected policy=" << cfg.policy << " f1=" << format_double(chosen.obj.f1)
      << " f2=" << format_double(chosen.obj.f2) << " genes";
  for (double g : chosen.genes) out << " " << format_double(g);
  out << "\n";
  out << "selected a_k";
  for (double a : opt::decode(genome).to_a8()) out << " " << format_double(a);
  out << "\n";

  // Comparison row against the unoptimized baseline set.
  const auto baseline =
      opt::encode(pulse::PresetLibrary::load_default().coeffs("ALL", "baseline"));
  opt::EvalConfig base_cfg = eval_cfg;
  const auto base_eval = opt::evaluate(baseline, gate, cfg.params, base_cfg);
  out << "baseline f1=" << format_double(base_eval.obj.f1)
      << " f2=" << format_double(base_eval.obj.f2) << " dominated_by_selected="
      << ((chosen.obj.f1 < base_eval.obj.f1 && chosen.obj.f2 < base_eval.obj.f2) ? "yes" : "no")
      << "\n";
  std::fputs(out.str().c_str(), stdout);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pulseforge: resonant controlled two-qutrit gate toolkit"};
  app.require_subcommand(1);

  struct Cmd {
    const char* name;
    const char* help;
    int (*run)(const cli::RunConfig&);
  };
  static const Cmd commands[] = {
      {"validate", "check coefficient boundary conditions, areas, amplitude", cmd_validate},
      {"waveform", "emit the drive waveforms as CSV", cmd_waveform},
      {"truth-table", "computational-basis output populations", cmd_truth_table},
      {"sweep-detuning", "fidelity vs detuning (kHz grid)", cmd_sweep_detuning},
      {"sweep-offres", "off-resonant excitation vs detuning (MHz grid)", cmd_sweep_offres},
      {"sweep-v", "fidelity vs dipole-dipole strength", cmd_sweep_v},
      {"random-states", "mean fidelity over random input states", cmd_random_states},
      {"optimize", "NSGA-II search over PCH coefficients", cmd_optimize},
  };

  std::vector<CommonArgs> args(std::size(commands));
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i].name, commands[i].help);
    add_common(sub, args[i]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  for (std::size_t i = 0; i < std::size(commands); ++i) {
    if (!app.get_subcommand(commands[i].name)->parsed()) continue;
    try {
      const cli::RunConfig cfg = load_config(args[i]);
      return commands[i].run(cfg);
    } catch (const ConfigError& e) {
      std::fprintf(stderr, "config error: %s\n", e.what());
      return kExitConfig;
    } catch (const OutOfBoundsError& e) {
      std::fprintf(stderr, "config error: %s\n", e.what());
      return kExitConfig;
    } catch (const Error& e) {
      std::fprintf(stderr, "runtime error: %s\n", e.what());
      return kExitRuntime;
    }
  }
  return kExitConfig;
}
