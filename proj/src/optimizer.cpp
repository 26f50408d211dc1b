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

#include "pulseforge/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "pulseforge/parallel.hpp"
#include "pulseforge/textio.hpp"

namespace pulseforge::opt {

namespace {

constexpr double kSbxEps = 1e-14;

struct Individual {
  std::vector<double> genes;
  Evaluation eval;
  int rank = 0;
  double crowding = 0.0;
};

// Constrained dominance: feasible beats infeasible, infeasibles compare by
// violation, feasibles compare by Pareto order.
bool dominates(const Individual& a, const Individual& b) {
  if (a.eval.feasible != b.eval.feasible) return a.eval.feasible;
  if (!a.eval.feasible) return a.eval.violation < b.eval.violation;
  const bool le = a.eval.obj.f1 <= b.eval.obj.f1 && a.eval.obj.f2 <= b.eval.obj.f2;
  const bool lt = a.eval.obj.f1 < b.eval.obj.f1 || a.eval.obj.f2 < b.eval.obj.f2;
  return le && lt;
}

std::vector<std::vector<int>> non_dominated_sort(std::vector<Individual>& pop) {
  const int n = static_cast<int>(pop.size());
  std::vector<std::vector<int>> dominated(static_cast<std::size_t>(n));
  std::vector<int> count(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<int>> fronts(1);

  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      if (p == q) continue;
      if (dominates(pop[static_cast<std::size_t>(p)], pop[static_cast<std::size_t>(q)])) {
        dominated[static_cast<std::size_t>(p)].push_back(q);
      } else if (dominates(pop[static_cast<std::size_t>(q)], pop[static_cast<std::size_t>(p)])) {
        ++count[static_cast<std::size_t>(p)];
      }
    }
    if (count[static_cast<std::size_t>(p)] == 0) {
      pop[static_cast<std::size_t>(p)].rank = 0;
      fronts[0].push_back(p);
    }
  }
  int f = 0;
  while (!fronts[static_cast<std::size_t>(f)].empty()) {
    std::vector<int> next;
    for (int p : fronts[static_cast<std::size_t>(f)]) {
      for (int q : dominated[static_cast<std::size_t>(p)]) {
        if (--count[static_cast<std::size_t>(q)] == 0) {
          pop[static_cast<std::size_t>(q)].rank = f + 1;
          next.push_back(q);
        }
      }
    }
    ++f;
    fronts.push_back(std::move(next));
  }
  if (fronts.back().empty()) fronts.pop_back();
  return fronts;
}

void assign_crowding(std::vector<Individual>& pop, const std::vector<int>& front) {
  const int n = static_cast<int>(front.size());
  for (int i : front) pop[static_cast<std::size_t>(i)].crowding = 0.0;
  if (n <= 2) {
    for (int i : front) pop[static_cast<std::size_t>(i)].crowding =
        std::numeric_limits<double>::infinity();
    return;
  }
  for (int obj = 0; obj < 2; ++obj) {
    std::vector<int> order = front;
    auto value = [&](int i) {
      const auto& o = pop[static_cast<std::size_t>(i)].eval.obj;
      return obj == 0 ? o.f1 : o.f2;
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return value(a) < value(b); });
    const double span = value(order.back()) - value(order.front());
    pop[static_cast<std::size_t>(order.front())].crowding =
        std::numeric_limits<double>::infinity();
    pop[static_cast<std::size_t>(order.back())].crowding =
        std::numeric_limits<double>::infinity();
    if (span <= 0.0) continue;
    for (int i = 1; i + 1 < n; ++i) {
      pop[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])].crowding +=
          (value(order[static_cast<std::size_t>(i + 1)]) -
           value(order[static_cast<std::size_t>(i - 1)])) /
          span;
    }
  }
}

// (better) comparison used by tournament and truncation.
bool preferred(const Individual& a, const Individual& b) {
  if (a.eval.feasible != b.eval.feasible) return a.eval.feasible;
  if (!a.eval.feasible) return a.eval.violation < b.eval.violation;
  if (a.rank != b.rank) return a.rank < b.rank;
  return a.crowding > b.crowding;
}

double rand01(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

void sbx_crossover(const EngineConfig& cfg, std::mt19937_64& rng,
                   const std::vector<double>& p1, const std::vector<double>& p2,
                   std::vector<double>& c1, std::vector<double>& c2) {
  c1 = p1;
  c2 = p2;
  if (rand01(rng) > cfg.crossover_rate) return;
  const double eta = cfg.eta_crossover;
  for (int j = 0; j < cfg.dim; ++j) {
    if (rand01(rng) > 0.5) continue;
    double y1 = p1[static_cast<std::size_t>(j)];
    double y2 = p2[static_cast<std::size_t>(j)];
    if (std::abs(y1 - y2) <= kSbxEps) continue;
    if (y1 > y2) std::swap(y1, y2);
    const double u = rand01(rng);

    auto spread = [&](double beta) {
      const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
      if (u <= 1.0 / alpha) return std::pow(u * alpha, 1.0 / (eta + 1.0));
      return std::pow(1.0 / (2.0 - u * alpha), 1.0 / (eta + 1.0));
    };
    const double bl = 1.0 + 2.0 * (y1 - cfg.lo) / (y2 - y1);
    const double bu = 1.0 + 2.0 * (cfg.hi - y2) / (y2 - y1);
    double v1 = 0.5 * ((y1 + y2) - spread(bl) * (y2 - y1));
    double v2 = 0.5 * ((y1 + y2) + spread(bu) * (y2 - y1));
    v1 = std::clamp(v1, cfg.lo, cfg.hi);
    v2 = std::clamp(v2, cfg.lo, cfg.hi);
    if (rand01(rng) <= 0.5) std::swap(v1, v2);
    c1[static_cast<std::size_t>(j)] = v1;
    c2[static_cast<std::size_t>(j)] = v2;
  }
}

void polynomial_mutation(const EngineConfig& cfg, std::mt19937_64& rng,
                         std::vector<double>& genes) {
  const double pm = cfg.mutation_rate < 0.0 ? 1.0 / cfg.dim : cfg.mutation_rate;
  const double eta = cfg.eta_mutation;
  const double range = cfg.hi - cfg.lo;
  for (int j = 0; j < cfg.dim; ++j) {
    if (rand01(rng) > pm) continue;
    double y = genes[static_cast<std::size_t>(j)];
    const double d1 = (y - cfg.lo) / range;
    const double d2 = (cfg.hi - y) / range;
    const double u = rand01(rng);
    const double mpow = 1.0 / (eta + 1.0);
    double deltaq;
    if (u <= 0.5) {
      const double xy = 1.0 - d1;
      const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(xy, eta + 1.0);
      deltaq = std::pow(val, mpow) - 1.0;
    } else {
      const double xy = 1.0 - d2;
      const double val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(xy, eta + 1.0);
      deltaq = 1.0 - std::pow(val, mpow);
    }
    y = std::clamp(y + deltaq * range, cfg.lo, cfg.hi);
    genes[static_cast<std::size_t>(j)] = y;
  }
}

bool front_dominates(const FrontMember& a, const FrontMember& b) {
  const bool le = a.obj.f1 <= b.obj.f1 && a.obj.f2 <= b.obj.f2;
  const bool lt = a.obj.f1 < b.obj.f1 || a.obj.f2 < b.obj.f2;
  return le && lt;
}

void archive_insert(std::vector<FrontMember>& archive, FrontMember candidate) {
  for (const auto& m : archive) {
    if (front_dominates(m, candidate)) return;
    if (m.genes == candidate.genes) return;
    if (m.obj.f1 == candidate.obj.f1 && m.obj.f2 == candidate.obj.f2) return;
  }
  archive.erase(std::remove_if(archive.begin(), archive.end(),
                               [&](const FrontMember& m) { return front_dominates(candidate, m); }),
                archive.end());
  archive.push_back(std::move(candidate));
}

}  // namespace

pulse::PchCoefficients decode(const Genome& genome) {
  for (double g : genome.genes) {
    if (g < kGeneLo || g > kGeneHi) throw OutOfBoundsError("gene outside [-0.6, 0.6]");
  }
  pulse::PchCoefficients coeffs;
  coeffs.blocks.resize(2);
  for (int blk = 0; blk < 2; ++blk) {
    const double a3 = genome.genes[static_cast<std::size_t>(2 * blk)];
    const double a4 = genome.genes[static_cast<std::size_t>(2 * blk + 1)];
    auto& a = coeffs.blocks[static_cast<std::size_t>(blk)].a;
    a[0] = -3.0 * a3;
    a[1] = -0.25 - 2.0 * a4;
    a[2] = a3;
    a[3] = a4;
  }
  return coeffs;
}

Genome encode(const pulse::PchCoefficients& coeffs) {
  Genome g;
  for (int blk = 0; blk < 2; ++blk) {
    const auto& a = coeffs.blocks.at(static_cast<std::size_t>(blk)).a;
    g.genes[static_cast<std::size_t>(2 * blk)] = a[2];
    g.genes[static_cast<std::size_t>(2 * blk + 1)] = a[3];
  }
  return g;
}

Evaluation evaluate(const Genome& genome, const pulse::GateSpec& gate,
                    const dynamics::SystemParams& params, const EvalConfig& cfg) {
  Evaluation ev;
  const pulse::PchCoefficients coeffs = decode(genome);
  const pulse::SegmentSchedule schedule = pulse::build_schedule(gate, params.tau_us, true);

  ev.max_amplitude_mhz = pulse::max_field_amplitude(schedule, coeffs, cfg.amplitude_samples);
  if (ev.max_amplitude_mhz > params.amplitude_cap_mhz) {
    ev.feasible = false;
    ev.violation = ev.max_amplitude_mhz - params.amplitude_cap_mhz;
    ev.obj = {1.0, 1.0};
    return ev;
  }

  const std::vector<gatelab::InputState> inputs = {gatelab::InputState::computational("01"),
                                                   gatelab::InputState::computational("11")};
  try {
    const auto near = gatelab::uniform_grid(-cfg.near_range_khz, cfg.near_range_khz,
                                            cfg.near_points);
    const auto ns = gatelab::detuning_sweep(gate, params, coeffs, inputs, near, cfg.tol,
                                            cfg.workers);
    const auto far = gatelab::uniform_grid(cfg.far_lo_mhz, cfg.far_hi_mhz, cfg.far_points);
    const auto fs = gatelab::offresonant_sweep(gate, params, coeffs, inputs, far, cfg.tol,
                                               cfg.workers);
    ev.obj.f1 = 1.0 - (cfg.weight_control0 * ns.mean[0] + cfg.weight_control1 * ns.mean[1]);
    ev.obj.f2 = std::max(fs.max_beyond_8p9[0], fs.max_beyond_8p9[1]);
    ev.feasible = true;
    ev.violation = 0.0;
  } catch (const Error&) {
    // Integration failure marks the genome infeasible.
    ev.feasible = false;
    ev.violation = std::numeric_limits<double>::infinity();
    ev.obj = {1.0, 1.0};
  }
  return ev;
}

ParetoFront nsga2_engine(const EngineConfig& cfg, const EvalFn& fn) {
  if (cfg.population < 8 || cfg.population % 2 != 0) {
    throw ConfigError("pop must be >= 8 and even");
  }
  if (cfg.generations < 1) throw ConfigError("generations must be >= 1");

  ParetoFront result;
  result.seed = cfg.seed;
  result.population = cfg.population;
  result.generations = cfg.generations;
  result.dim = cfg.dim;

  const int pop_size = cfg.population;
  std::vector<Individual> parents(static_cast<std::size_t>(pop_size));
  for (int i = 0; i < pop_size; ++i) {
    std::mt19937_64 rng(util::derive_seed(cfg.seed, 0x100000000ull + static_cast<std::uint64_t>(i)));
    auto& genes = parents[static_cast<std::size_t>(i)].genes;
    genes.resize(static_cast<std::size_t>(cfg.dim));
    for (double& g : genes) g = cfg.lo + (cfg.hi - cfg.lo) * rand01(rng);
  }

  auto evaluate_all = [&](std::vector<Individual>& group) {
    util::parallel_for(static_cast<int>(group.size()), cfg.workers, [&](int i) {
      group[static_cast<std::size_t>(i)].eval = fn(group[static_cast<std::size_t>(i)].genes);
    });
  };
  evaluate_all(parents);

  std::vector<FrontMember> archive;
  auto archive_generation = [&](const std::vector<Individual>& group, int gen) {
    for (const auto& ind : group) {
      if (!ind.eval.feasible) continue;
      archive_insert(archive, FrontMember{ind.genes, ind.eval.obj, true, gen});
    }
    result.hypervolume_history.push_back(hypervolume(archive));
  };

  {
    auto fronts = non_dominated_sort(parents);
    for (const auto& f : fronts) assign_crowding(parents, f);
    archive_generation(parents, 0);
  }

  for (int gen = 1; gen <= cfg.generations; ++gen) {
    std::vector<Individual> offspring;
    offspring.reserve(static_cast<std::size_t>(pop_size));
    for (int pair = 0; pair < pop_size / 2; ++pair) {
      std::mt19937_64 rng(util::derive_seed(
          cfg.seed, (static_cast<std::uint64_t>(gen) << 32) | static_cast<std::uint64_t>(pair)));
      auto pick = [&]() -> const Individual& {
        std::uniform_int_distribution<int> d(0, pop_size - 1);
        const Individual& a = parents[static_cast<std::size_t>(d(rng))];
        const Individual& b = parents[static_cast<std::size_t>(d(rng))];
        return preferred(a, b) ? a : b;
      };
      const Individual& p1 = pick();
      const Individual& p2 = pick();
      Individual c1, c2;
      sbx_crossover(cfg, rng, p1.genes, p2.genes, c1.genes, c2.genes);
      polynomial_mutation(cfg, rng, c1.genes);
      polynomial_mutation(cfg, rng, c2.genes);
      offspring.push_back(std::move(c1));
      offspring.push_back(std::move(c2));
    }
    evaluate_all(offspring);

    // Elitist survival over the combined population.
    std::vector<Individual> combined;
    combined.reserve(static_cast<std::size_t>(2 * pop_size));
    for (auto& p : parents) combined.push_back(std::move(p));
    for (auto& c : offspring) combined.push_back(std::move(c));
    auto fronts = non_dominated_sort(combined);
    for (const auto& f : fronts) assign_crowding(combined, f);

    std::vector<Individual> next;
    next.reserve(static_cast<std::size_t>(pop_size));
    for (const auto& f : fronts) {
      if (static_cast<int>(next.size() + f.size()) <= pop_size) {
        for (int i : f) next.push_back(combined[static_cast<std::size_t>(i)]);
      } else {
        std::vector<int> order = f;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
          return combined[static_cast<std::size_t>(a)].crowding >
                 combined[static_cast<std::size_t>(b)].crowding;
        });
        for (int i : order) {
          if (static_cast<int>(next.size()) >= pop_size) break;
          next.push_back(combined[static_cast<std::size_t>(i)]);
        }
      }
      if (static_cast<int>(next.size()) >= pop_size) break;
    }
    parents = std::move(next);
    archive_generation(parents, gen);
  }

  if (archive.empty()) {
    // Nothing feasible was ever seen; report the non-dominated infeasible set.
    result.all_infeasible = true;
    auto fronts = non_dominated_sort(parents);
    for (int i : fronts.front()) {
      const auto& ind = parents[static_cast<std::size_t>(i)];
      FrontMember m{ind.genes, ind.eval.obj, false, cfg.generations};
      if (std::none_of(result.members.begin(), result.members.end(),
                       [&](const FrontMember& x) { return x.genes == m.genes; })) {
        result.members.push_back(std::move(m));
      }
    }
  } else {
    result.members = std::move(archive);
  }

  // Stable order: by f1 then f2 then genes.
  std::sort(result.members.begin(), result.members.end(), [](const FrontMember& a,
                                                             const FrontMember& b) {
    if (a.obj.f1 != b.obj.f1) return a.obj.f1 < b.obj.f1;
    if (a.obj.f2 != b.obj.f2) return a.obj.f2 < b.obj.f2;
    return a.genes < b.genes;
  });
  return result;
}

ParetoFront nsga2(const pulse::GateSpec& gate, const dynamics::SystemParams& params,
                  const EvalConfig& eval_cfg, int population, int generations,
                  std::uint64_t seed) {
  EngineConfig cfg;
  cfg.dim = 4;
  cfg.lo = kGeneLo;
  cfg.hi = kGeneHi;
  cfg.population = population;
  cfg.generations = generations;
  cfg.seed = seed;
  cfg.workers = eval_cfg.workers;

  EvalConfig inner = eval_cfg;
  inner.workers = 1;  // parallelism lives at the population level
  const EvalFn fn = [&gate, &params, inner](const std::vector<double>& genes) {
    Genome g;
    std::copy(genes.begin(), genes.end(), g.genes.begin());
    return evaluate(g, gate, params, inner);
  };
  return nsga2_engine(cfg, fn);
}

const FrontMember& select_solution(const ParetoFront& front, SelectionPolicy policy,
                                   double f2_cap_value) {
  if (front.members.empty()) throw EmptyFeasibleSetError("empty front");

  switch (policy) {
    case SelectionPolicy::f1_priority: {
      const FrontMember* best = &front.members.front();
      for (const auto& m : front.members) {
        if (m.obj.f1 < best->obj.f1 ||
            (m.obj.f1 == best->obj.f1 && m.obj.f2 < best->obj.f2)) {
          best = &m;
        }
      }
      return *best;
    }
    case SelectionPolicy::f2_cap: {
      const FrontMember* best = nullptr;
      for (const auto& m : front.members) {
        if (m.obj.f2 > f2_cap_value) continue;
        if (best == nullptr || m.obj.f1 < best->obj.f1) best = &m;
      }
      if (best == nullptr) throw EmptyFeasibleSetError("no front member satisfies the f2 cap");
      return *best;
    }
    case SelectionPolicy::knee:
    default: {
      double lo1 = std::numeric_limits<double>::infinity(), hi1 = -lo1;
      double lo2 = lo1, hi2 = -lo1;
      for (const auto& m : front.members) {
        lo1 = std::min(lo1, m.obj.f1);
        hi1 = std::max(hi1, m.obj.f1);
        lo2 = std::min(lo2, m.obj.f2);
        hi2 = std::max(hi2, m.obj.f2);
      }
      const double s1 = hi1 > lo1 ? hi1 - lo1 : 1.0;
      const double s2 = hi2 > lo2 ? hi2 - lo2 : 1.0;
      const FrontMember* best = &front.members.front();
      double best_d = std::numeric_limits<double>::infinity();
      for (const auto& m : front.members) {
        const double d1 = (m.obj.f1 - lo1) / s1;
        const double d2 = (m.obj.f2 - lo2) / s2;
        const double d = std::sqrt(d1 * d1 + d2 * d2);
        if (d < best_d) {
          best_d = d;
          best = &m;
        }
      }
      return *best;
    }
  }
}

double hypervolume(const std::vector<FrontMember>& members, double ref1, double ref2) {
  std::vector<const FrontMember*> pts;
  for (const auto& m : members) {
    if (m.obj.f1 < ref1 && m.obj.f2 < ref2) pts.push_back(&m);
  }
  std::sort(pts.begin(), pts.end(), [](const FrontMember* a, const FrontMember* b) {
    if (a->obj.f1 != b->obj.f1) return a->obj.f1 < b->obj.f1;
    return a->obj.f2 < b->obj.f2;
  });
  double hv = 0.0;
  double prev_f2 = ref2;
  for (const auto* p : pts) {
    const double height = prev_f2 - p->obj.f2;
    if (height <= 0.0) continue;
    hv += (ref1 - p->obj.f1) * height;
    prev_f2 = p->obj.f2;
  }
  return hv;
}

std::string front_to_text(const ParetoFront& front) {
  std::ostringstream out;
  out << "# pulseforge pareto archive\n";
  out << "seed " << front.seed << "\n";
  out << "population " << front.population << "\n";
  out << "generations " << front.generations << "\n";
  out << "dim " << front.dim << "\n";
  out << "all_infeasible " << (front.all_infeasible ? 1 : 0) << "\n";
  out << "# member <generation> <feasible> <f1> <f2> <genes...> [decoded a1..a8]\n";
  for (const auto& m : front.members) {
    out << "member " << m.generation << " " << (m.feasible ? 1 : 0) << " "
        << util::format_double(m.obj.f1) << " " << util::format_double(m.obj.f2);
    for (double g : m.genes) out << " " << util::format_double(g);
    if (m.genes.size() == 4) {
      Genome g;
      std::copy(m.genes.begin(), m.genes.end(), g.genes.begin());
      for (double a : decode(g).to_a8()) out << " " << util::format_double(a);
    }
    out << "\n";
  }
  return out.str();
}

ParetoFront front_from_text(const std::string& text) {
  ParetoFront front;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "seed") {
      ls >> front.seed;
    } else if (tag == "population") {
      ls >> front.population;
    } else if (tag == "generations") {
      ls >> front.generations;
    } else if (tag == "dim") {
      ls >> front.dim;
    } else if (tag == "all_infeasible") {
      int v = 0;
      ls >> v;
      front.all_infeasible = v != 0;
    } else if (tag == "member") {
      FrontMember m;
      int feasible = 0;
      if (!(ls >> m.generation >> feasible >> m.obj.f1 >> m.obj.f2)) {
        throw ConfigError("bad archive member record");
      }
      m.feasible = feasible != 0;
      std::vector<double> rest;
      double v = 0.0;
      while (ls >> v) rest.push_back(v);
      const std::size_t dim = front.dim > 0 ? static_cast<std::size_t>(front.dim) : rest.size();
      if (rest.size() < dim) throw ConfigError("bad archive member record");
      m.genes.assign(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(dim));
      front.members.push_back(std::move(m));
    } else {
      throw ConfigError("unknown archive record '" + tag + "'");
    }
  }
  return front;
}

}  // namespace pulseforge::opt
