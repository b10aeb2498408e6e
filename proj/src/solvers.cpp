// Copyright 2026 The bilopt Authors
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

#include "bilopt/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

namespace bilopt {

namespace {

// Per-solver stream tags so the solvers draw independent streams from one
// master seed.
constexpr std::uint64_t kBcfwStreamTag = 101;
constexpr std::uint64_t kEvoStreamTag = 102;

class WallTimer {
 public:
  WallTimer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

LpSolution lp_solve(const LpSubproblem& problem) {
  const int n_groups = static_cast<int>(problem.group_sizes.size());
  if (n_groups == 0) {
    throw InvalidInputError("lp_solve needs at least one group");
  }
  int total = 0;
  for (int g = 0; g < n_groups; ++g) {
    if (problem.group_sizes[g] < 1) {
      throw InvalidInputError("empty group in lp_solve");
    }
    total += problem.group_sizes[g];
  }
  if (static_cast<int>(problem.gains.size()) != total ||
      static_cast<int>(problem.costs.size()) != total) {
    throw DimensionError("lp_solve arrays do not match group sizes");
  }
  for (double c : problem.costs) {
    if (c < 0.0) throw InvalidInputError("lp_solve costs must be nonnegative");
  }

  struct Item {
    double cost;
    double gain;
    int idx;  // flat index
  };

  // Efficiency frontier per group: drop items that cost at least as much as
  // a better one, then drop items under the concave hull so incremental
  // efficiencies strictly decrease along the frontier.
  std::vector<std::vector<Item>> frontier(n_groups);
  double min_total_cost = 0.0;
  int offset = 0;
  for (int g = 0; g < n_groups; ++g) {
    std::vector<Item> items;
    items.reserve(problem.group_sizes[g]);
    for (int i = 0; i < problem.group_sizes[g]; ++i) {
      items.push_back({problem.costs[offset + i], problem.gains[offset + i],
                       offset + i});
    }
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
      if (a.cost != b.cost) return a.cost < b.cost;
      if (a.gain != b.gain) return a.gain > b.gain;
      return a.idx < b.idx;
    });
    std::vector<Item>& hull = frontier[g];
    for (const Item& it : items) {
      if (!hull.empty() && it.gain <= hull.back().gain) continue;  // dominated
      while (hull.size() >= 2) {
        const Item& a = hull[hull.size() - 2];
        const Item& b = hull.back();
        // Pop b when the step b -> it is at least as efficient as a -> b.
        if ((it.gain - b.gain) * (b.cost - a.cost) >=
            (b.gain - a.gain) * (it.cost - b.cost)) {
          hull.pop_back();
        } else {
          break;
        }
      }
      hull.push_back(it);
    }
    min_total_cost += hull.front().cost;
    offset += problem.group_sizes[g];
  }

  if (min_total_cost > problem.budget) {
    throw InfeasibleError(
        "budget " + std::to_string(problem.budget) +
            " below minimal achievable cost " +
            std::to_string(min_total_cost),
        min_total_cost);
  }

  struct Step {
    double eff;
    double dcost;
    int group;
    int pos;  // index of the step's source item on the frontier
  };
  std::vector<Step> steps;
  for (int g = 0; g < n_groups; ++g) {
    for (std::size_t k = 0; k + 1 < frontier[g].size(); ++k) {
      const double dc = frontier[g][k + 1].cost - frontier[g][k].cost;
      const double dg = frontier[g][k + 1].gain - frontier[g][k].gain;
      steps.push_back({dg / dc, dc, g, static_cast<int>(k)});
    }
  }
  // Efficiencies strictly decrease within each group, so this order respects
  // the per-group step order.
  std::sort(steps.begin(), steps.end(), [](const Step& a, const Step& b) {
    if (a.eff != b.eff) return a.eff > b.eff;
    if (a.group != b.group) return a.group < b.group;
    return a.pos < b.pos;
  });

  std::vector<int> level(n_groups, 0);
  double remaining = problem.budget - min_total_cost;
  int frac_group = -1;
  int frac_pos = 0;
  double frac_lambda = 0.0;
  for (const Step& step : steps) {
    if (step.dcost <= remaining) {
      level[step.group] = step.pos + 1;
      remaining -= step.dcost;
    } else {
      const double lambda = remaining / step.dcost;
      if (lambda > 0.0) {
        frac_group = step.group;
        frac_pos = step.pos;
        frac_lambda = lambda;
      }
      break;  // the budget binds at this efficiency threshold
    }
  }

  LpSolution sol;
  sol.u.assign(total, 0.0);
  for (int g = 0; g < n_groups; ++g) {
    if (g == frac_group) {
      sol.u[frontier[g][frac_pos].idx] = 1.0 - frac_lambda;
      sol.u[frontier[g][frac_pos + 1].idx] = frac_lambda;
    } else {
      sol.u[frontier[g][level[g]].idx] = 1.0;
    }
  }
  sol.fractional_group = frac_group;
  for (int i = 0; i < total; ++i) {
    sol.objective += problem.gains[i] * sol.u[i];
    sol.cost += problem.costs[i] * sol.u[i];
  }
  return sol;
}

namespace {

Architecture min_latency_arch(const SearchSpaceSpec& spec,
                              const LatencyModel& lat) {
  Architecture arch;
  arch.depth.resize(spec.num_stages());
  arch.config.assign(spec.num_stages(), std::vector<int>(spec.max_depth(), 0));
  for (int s = 0; s < spec.num_stages(); ++s) {
    arch.depth[s] = spec.depth_choices(s).front();
    for (int b = 0; b < spec.max_depth(); ++b) {
      int best = 0;
      for (int c = 1; c < spec.num_configs(); ++c) {
        if (lat.block_latency[spec.alpha_index(s, b, c)] <
            lat.block_latency[spec.alpha_index(s, b, best)]) {
          best = c;
        }
      }
      arch.config[s][b] = best;
    }
  }
  return arch;
}

// Partial linear program in alpha at fixed beta: gains and costs of every
// config entry are scaled by the beta tail mass of its block.
std::vector<double> solve_alpha_block(const SearchSpaceSpec& spec,
                                      const BilinearEstimator& est,
                                      const LatencyModel& lat,
                                      const std::vector<double>& beta,
                                      double budget) {
  LpSubproblem p;
  p.budget = budget;
  p.group_sizes.assign(spec.num_stages() * spec.max_depth(),
                       spec.num_configs());
  p.gains.resize(spec.alpha_size());
  p.costs.resize(spec.alpha_size());
  for (int s = 0; s < spec.num_stages(); ++s) {
    const std::vector<double> tails = beta_tails(spec, beta, s);
    for (int b = 0; b < spec.max_depth(); ++b) {
      for (int c = 0; c < spec.num_configs(); ++c) {
        const int i = spec.alpha_index(s, b, c);
        p.gains[i] = est.config_deltas[i] * tails[b];
        p.costs[i] = lat.block_latency[i] * tails[b];
      }
    }
  }
  return lp_solve(p).u;
}

// Partial linear program in beta at fixed alpha: each depth choice carries
// the cumulative alpha-averaged delta and latency of its active blocks.
std::vector<double> solve_beta_block(const SearchSpaceSpec& spec,
                                     const BilinearEstimator& est,
                                     const LatencyModel& lat,
                                     const std::vector<double>& alpha,
                                     double budget) {
  LpSubproblem p;
  p.budget = budget;
  p.group_sizes.resize(spec.num_stages());
  for (int s = 0; s < spec.num_stages(); ++s) {
    p.group_sizes[s] = spec.beta_group_size(s);
  }
  p.gains.resize(spec.beta_size());
  p.costs.resize(spec.beta_size());
  for (int s = 0; s < spec.num_stages(); ++s) {
    std::vector<double> block_gain(spec.max_depth(), 0.0);
    std::vector<double> block_cost(spec.max_depth(), 0.0);
    for (int b = 0; b < spec.max_depth(); ++b) {
      for (int c = 0; c < spec.num_configs(); ++c) {
        const int i = spec.alpha_index(s, b, c);
        block_gain[b] += alpha[i] * est.config_deltas[i];
        block_cost[b] += alpha[i] * lat.block_latency[i];
      }
    }
    for (int pos = 0; pos < spec.beta_group_size(s); ++pos) {
      const int d = spec.depth_choices(s)[pos];
      const int j = spec.beta_index(s, pos);
      double gain = est.depth_deltas[j];
      double cost = 0.0;
      for (int b = 0; b < d; ++b) {
        gain += block_gain[b];
        cost += block_cost[b];
      }
      p.gains[j] = gain;
      p.costs[j] = cost;
    }
  }
  return lp_solve(p).u;
}

}  // namespace

BcfwResult bcfw_search(const SearchSpaceSpec& spec,
                       const BilinearEstimator& est, const LatencyModel& lat,
                       double T, const BcfwParams& params,
                       std::uint64_t seed) {
  check_shape(spec, est);
  check_shape(spec, lat);
  if (params.iterations < 0 || params.p_alpha < 0.0 || params.p_alpha > 1.0) {
    throw InvalidInputError("invalid block-coordinate parameters");
  }
  const WallTimer timer;
  const double budget = T - lat.fixed_overhead;

  const Architecture start = min_latency_arch(spec, lat);
  const double start_lat = eval_lat(spec, lat, start);
  if (start_lat > T) {
    throw InfeasibleError("budget " + std::to_string(T) +
                              " ms below minimum achievable latency " +
                              std::to_string(start_lat) + " ms",
                          start_lat);
  }

  ArchPoint z = to_point(spec, start);
  z.mode = ArchPoint::Mode::kContinuous;

  std::vector<TracePoint> trace;
  trace.reserve(params.iterations + 1);
  trace.push_back({0, eval_acc(spec, est, z), eval_lat(spec, lat, z)});

  Rng rng = Rng(seed).fork(kBcfwStreamTag);
  for (int k = 1; k <= params.iterations; ++k) {
    // The incumbent block value already satisfies the budget, so the partial
    // program can only report infeasibility when rounding noise pushes an
    // exactly binding cost across the threshold; the block then keeps its
    // current value.
    try {
      if (rng.bernoulli(params.p_alpha)) {
        z.alpha = solve_alpha_block(spec, est, lat, z.beta, budget);
      } else {
        z.beta = solve_beta_block(spec, est, lat, z.alpha, budget);
      }
    } catch (const InfeasibleError&) {
    }
    trace.push_back({k, eval_acc(spec, est, z), eval_lat(spec, lat, z)});
  }

  const RoundResult rounded = round_solution(spec, est, lat, z, T);

  BcfwResult out;
  out.zeta = z;
  out.result.arch = canonicalized(spec, rounded.arch);
  out.result.predicted_acc = eval_acc(spec, est, out.result.arch);
  out.result.latency_ms = eval_lat(spec, lat, out.result.arch);
  out.result.deviation = rounded.deviation;
  out.result.solver = "bcfw";
  out.result.seed = seed;
  out.result.trace = std::move(trace);
  out.result.wall_time_sec = timer.seconds();
  return out;
}

namespace {

struct FractionalGroup {
  bool is_alpha;
  int stage;
  int block;  // -1 for beta groups
  int hi;     // entry with the larger weight (ties: lower index)
  int lo;
  double w_hi;
  double w_lo;
};

// Scans one simplex group; appends to fracs if it mixes two entries.
// Returns the hot entry index for (near-)one-hot groups.
int scan_group(const std::vector<double>& v, int begin, int len,
               bool is_alpha, int stage, int block,
               std::vector<FractionalGroup>* fracs) {
  int nonzero[3] = {0, 0, 0};
  int count = 0;
  for (int i = 0; i < len; ++i) {
    if (v[begin + i] > kOneHotTol) {
      if (count < 3) nonzero[count] = i;
      ++count;
    }
  }
  if (count == 1) return nonzero[0];
  if (count == 2) {
    const double w0 = v[begin + nonzero[0]];
    const double w1 = v[begin + nonzero[1]];
    if (w0 >= 1.0 - kOneHotTol || w1 >= 1.0 - kOneHotTol) {
      // A negligible companion entry; treat as one-hot.
      return w0 >= w1 ? nonzero[0] : nonzero[1];
    }
    FractionalGroup f;
    f.is_alpha = is_alpha;
    f.stage = stage;
    f.block = block;
    if (w0 >= w1) {
      f.hi = nonzero[0];
      f.lo = nonzero[1];
      f.w_hi = w0;
      f.w_lo = w1;
    } else {
      f.hi = nonzero[1];
      f.lo = nonzero[0];
      f.w_hi = w1;
      f.w_lo = w0;
    }
    fracs->push_back(f);
    return f.hi;
  }
  throw InvalidInputError(
      "group has " + std::to_string(count) +
      " nonzero entries; rounding expects one-hot groups with at most one "
      "two-entry mixture per block");
}

}  // namespace

RoundResult round_solution(const SearchSpaceSpec& spec,
                           const BilinearEstimator& est,
                           const LatencyModel& lat, const ArchPoint& zeta,
                           double T) {
  check_shape(spec, est);
  check_shape(spec, lat);
  {
    const std::vector<Violation> violations = validate(
        spec, ArchPoint{zeta.alpha, zeta.beta, ArchPoint::Mode::kContinuous});
    if (!violations.empty()) {
      throw InvalidInputError("rounding input is not a simplex point: " +
                              violations.front().describe());
    }
  }

  std::vector<FractionalGroup> fracs;
  Architecture arch;
  arch.depth.resize(spec.num_stages());
  arch.config.assign(spec.num_stages(), std::vector<int>(spec.max_depth(), 0));
  int alpha_fracs = 0;
  int beta_fracs = 0;
  for (int s = 0; s < spec.num_stages(); ++s) {
    for (int b = 0; b < spec.max_depth(); ++b) {
      const std::size_t before = fracs.size();
      arch.config[s][b] =
          scan_group(zeta.alpha, spec.alpha_index(s, b, 0), spec.num_configs(),
                     true, s, b, &fracs);
      alpha_fracs += static_cast<int>(fracs.size() - before);
    }
    const std::size_t before = fracs.size();
    const int pos = scan_group(zeta.beta, spec.beta_offset(s),
                               spec.beta_group_size(s), false, s, -1, &fracs);
    beta_fracs += static_cast<int>(fracs.size() - before);
    arch.depth[s] = spec.depth_choices(s)[pos];
  }
  if (alpha_fracs > 1 || beta_fracs > 1) {
    throw InvalidInputError(
        "sparsity violated: " + std::to_string(alpha_fracs) +
        " fractional config groups and " + std::to_string(beta_fracs) +
        " fractional depth groups");
  }

  // All resolutions of the fractional groups, tried in decreasing weight
  // order so the argmax comes first.
  struct Combo {
    int pick[2];  // 0 = hi, 1 = lo, per fractional group
    double weight;
  };
  const int n = static_cast<int>(fracs.size());
  std::vector<Combo> combos;
  for (int mask = 0; mask < (1 << n); ++mask) {
    Combo combo{{0, 0}, 1.0};
    for (int i = 0; i < n; ++i) {
      combo.pick[i] = (mask >> i) & 1;
      combo.weight *= combo.pick[i] ? fracs[i].w_lo : fracs[i].w_hi;
    }
    combos.push_back(combo);
  }
  std::stable_sort(combos.begin(), combos.end(),
                   [](const Combo& a, const Combo& b) {
                     return a.weight > b.weight;
                   });

  RoundResult best;
  double best_lat = std::numeric_limits<double>::infinity();
  for (const Combo& combo : combos) {
    Architecture candidate = arch;
    for (int i = 0; i < n; ++i) {
      const FractionalGroup& f = fracs[i];
      const int entry = combo.pick[i] ? f.lo : f.hi;
      if (f.is_alpha) {
        candidate.config[f.stage][f.block] = entry;
      } else {
        candidate.depth[f.stage] = spec.depth_choices(f.stage)[entry];
      }
    }
    const double l = eval_lat(spec, lat, candidate);
    if (l <= T) {
      return {canonicalized(spec, candidate), (l - T) / T, true};
    }
    if (l < best_lat) {
      best_lat = l;
      best.arch = candidate;
    }
  }
  best.arch = canonicalized(spec, best.arch);
  best.deviation = (best_lat - T) / T;
  best.feasible = false;
  return best;
}

namespace {

struct Member {
  Architecture arch;
  double fitness;
  double latency;
};

}  // namespace

SearchResult evolutionary_search(const SearchSpaceSpec& spec,
                                 const BilinearEstimator& est,
                                 const LatencyModel& lat, double T,
                                 const EvoParams& params, std::uint64_t seed) {
  check_shape(spec, est);
  check_shape(spec, lat);
  if (params.population < 2 || params.generations < 0 ||
      params.mutation_prob < 0.0 || params.mutation_prob > 1.0 ||
      params.parent_ratio <= 0.0 || params.mutation_ratio < 0.0 ||
      params.parent_ratio + params.mutation_ratio > 1.0) {
    throw InvalidInputError("invalid evolutionary parameters");
  }
  const WallTimer timer;
  const int pop_size = params.population;
  const int n_parents = std::max(
      1, static_cast<int>(std::lround(params.parent_ratio * pop_size)));
  const int n_mutants =
      static_cast<int>(std::lround(params.mutation_ratio * pop_size));
  const long retry_budget = 10L * pop_size;

  Rng rng = Rng(seed).fork(kEvoStreamTag);

  auto evaluate = [&](const Architecture& arch) {
    return Member{arch, eval_acc(spec, est, arch), eval_lat(spec, lat, arch)};
  };

  // Initial population by rejection sampling.
  std::vector<Member> population;
  population.reserve(pop_size);
  long failures = 0;
  double min_seen = std::numeric_limits<double>::infinity();
  while (static_cast<int>(population.size()) < pop_size) {
    Member m = evaluate(sample_uniform_arch(spec, rng));
    min_seen = std::min(min_seen, m.latency);
    if (m.latency <= T) {
      population.push_back(std::move(m));
    } else if (++failures > retry_budget) {
      throw InfeasibleError(
          "could not sample a feasible population within the retry budget; "
          "smallest latency seen " +
              std::to_string(min_seen) + " ms for budget " +
              std::to_string(T) + " ms",
          min_seen);
    }
  }

  Member best = population.front();
  for (const Member& m : population) {
    if (m.fitness > best.fitness) best = m;
  }

  std::vector<TracePoint> trace;
  trace.reserve(params.generations + 1);
  trace.push_back({0, best.fitness, best.latency});

  auto mutate = [&](const Architecture& parent) {
    Architecture child = parent;
    for (int s = 0; s < spec.num_stages(); ++s) {
      for (int b = 0; b < spec.max_depth(); ++b) {
        if (rng.bernoulli(params.mutation_prob)) {
          child.config[s][b] = rng.uniform_int(spec.num_configs());
        }
      }
    }
    for (int s = 0; s < spec.num_stages(); ++s) {
      if (rng.bernoulli(params.mutation_prob)) {
        child.depth[s] =
            spec.depth_choices(s)[rng.uniform_int(spec.beta_group_size(s))];
      }
    }
    return child;
  };
  auto crossover = [&](const Architecture& a, const Architecture& b) {
    Architecture child = a;
    for (int s = 0; s < spec.num_stages(); ++s) {
      for (int bl = 0; bl < spec.max_depth(); ++bl) {
        if (rng.bernoulli(0.5)) child.config[s][bl] = b.config[s][bl];
      }
    }
    for (int s = 0; s < spec.num_stages(); ++s) {
      if (rng.bernoulli(0.5)) child.depth[s] = b.depth[s];
    }
    return child;
  };

  for (int g = 1; g <= params.generations; ++g) {
    std::stable_sort(population.begin(), population.end(),
                     [](const Member& a, const Member& b) {
                       return a.fitness > b.fitness;
                     });
    const std::vector<Member> parents(population.begin(),
                                      population.begin() + n_parents);
    std::vector<Member> next(parents);
    next.reserve(pop_size);
    failures = 0;
    // Children are drawn mutation-first, then crossover; infeasible draws
    // are rejected until the retry budget runs out, after which remaining
    // slots are filled with parent copies (parents are always feasible).
    while (static_cast<int>(next.size()) < pop_size) {
      const int slot = static_cast<int>(next.size()) - n_parents;
      if (failures > retry_budget) {
        next.push_back(parents[rng.uniform_int(n_parents)]);
        continue;
      }
      Architecture child;
      if (slot < n_mutants) {
        child = mutate(parents[rng.uniform_int(n_parents)].arch);
      } else {
        const Architecture& p1 = parents[rng.uniform_int(n_parents)].arch;
        const Architecture& p2 = parents[rng.uniform_int(n_parents)].arch;
        child = crossover(p1, p2);
      }
      Member m = evaluate(child);
      if (m.latency <= T) {
        if (m.fitness > best.fitness) best = m;
        next.push_back(std::move(m));
      } else {
        ++failures;
      }
    }
    population = std::move(next);
    trace.push_back({g, best.fitness, best.latency});
  }

  SearchResult result;
  result.arch = canonicalized(spec, best.arch);
  result.predicted_acc = best.fitness;
  result.latency_ms = best.latency;
  result.deviation = (best.latency - T) / T;
  result.solver = "evolutionary";
  result.seed = seed;
  result.trace = std::move(trace);
  result.wall_time_sec = timer.seconds();
  return result;
}

namespace {

struct StageCandidate {
  double delta;
  double latency;
  int depth;
  std::uint64_t tuple;  // configs encoded base |C|, block 0 most significant
};

Architecture decode_choice(const SearchSpaceSpec& spec,
                           const std::vector<const StageCandidate*>& chosen) {
  Architecture arch;
  arch.depth.resize(spec.num_stages());
  arch.config.assign(spec.num_stages(), std::vector<int>(spec.max_depth(), 0));
  for (int s = 0; s < spec.num_stages(); ++s) {
    arch.depth[s] = chosen[s]->depth;
    std::uint64_t t = chosen[s]->tuple;
    for (int b = chosen[s]->depth - 1; b >= 0; --b) {
      arch.config[s][b] = static_cast<int>(
          t % static_cast<std::uint64_t>(spec.num_configs()));
      t /= static_cast<std::uint64_t>(spec.num_configs());
    }
  }
  return arch;
}

// Lexicographic order matching the enumeration order of
// for_each_architecture: per stage, depth first, then configs left to right.
bool lex_less(const Architecture& a, const Architecture& b) {
  const std::size_t S = a.depth.size();
  for (std::size_t s = 0; s < S; ++s) {
    if (a.depth[s] != b.depth[s]) return a.depth[s] < b.depth[s];
    for (std::size_t bl = 0; bl < a.config[s].size(); ++bl) {
      if (a.config[s][bl] != b.config[s][bl]) {
        return a.config[s][bl] < b.config[s][bl];
      }
    }
  }
  return false;
}

}  // namespace

SearchResult exact_search(const SearchSpaceSpec& spec,
                          const BilinearEstimator& est,
                          const LatencyModel& lat, double T,
                          const ExactParams& params, std::uint64_t seed) {
  check_shape(spec, est);
  check_shape(spec, lat);
  const double count = spec.count_architectures();
  if (count > params.cap) {
    throw CapExceededError("effective architecture count " +
                               std::to_string(count) + " exceeds cap " +
                               std::to_string(params.cap),
                           count);
  }
  const WallTimer timer;
  const double budget = T - lat.fixed_overhead;
  const int S = spec.num_stages();
  const int C = spec.num_configs();

  // Stage candidates in enumeration order, then sorted by delta descending
  // (stable, so enumeration order breaks delta ties).
  std::vector<std::vector<StageCandidate>> cands(S);
  for (int s = 0; s < S; ++s) {
    for (int pos = 0; pos < spec.beta_group_size(s); ++pos) {
      const int d = spec.depth_choices(s)[pos];
      const double depth_delta = est.depth_deltas[spec.beta_index(s, pos)];
      std::uint64_t n_tuples = 1;
      for (int b = 0; b < d; ++b) n_tuples *= static_cast<std::uint64_t>(C);
      for (std::uint64_t t = 0; t < n_tuples; ++t) {
        double delta = depth_delta;
        double latency = 0.0;
        std::uint64_t rest = t;
        for (int b = d - 1; b >= 0; --b) {
          const int c = static_cast<int>(rest % C);
          rest /= C;
          const int i = spec.alpha_index(s, b, c);
          delta += est.config_deltas[i];
          latency += lat.block_latency[i];
        }
        cands[s].push_back({delta, latency, d, t});
      }
    }
    std::stable_sort(cands[s].begin(), cands[s].end(),
                     [](const StageCandidate& a, const StageCandidate& b) {
                       return a.delta > b.delta;
                     });
  }

  // Optimistic completion (best remaining delta, ignoring latency) and the
  // cheapest completion (for feasibility pruning), as suffix sums.
  std::vector<double> opt_rest(S + 1, 0.0);
  std::vector<double> min_rest(S + 1, 0.0);
  for (int s = S - 1; s >= 0; --s) {
    double min_lat = std::numeric_limits<double>::infinity();
    for (const StageCandidate& c : cands[s]) {
      min_lat = std::min(min_lat, c.latency);
    }
    opt_rest[s] = opt_rest[s + 1] + cands[s].front().delta;
    min_rest[s] = min_rest[s + 1] + min_lat;
  }

  bool found = false;
  double best_delta = -std::numeric_limits<double>::infinity();
  double best_lat = std::numeric_limits<double>::infinity();
  Architecture best_arch;
  std::vector<TracePoint> trace;
  std::vector<const StageCandidate*> chosen(S, nullptr);
  int improvements = 0;

  auto consider = [&]() {
    double delta = 0.0;
    double latency = 0.0;
    for (int s = 0; s < S; ++s) {
      delta += chosen[s]->delta;
      latency += chosen[s]->latency;
    }
    bool take = false;
    if (!found || delta > best_delta) {
      take = true;
    } else if (delta == best_delta) {
      if (latency < best_lat) {
        take = true;
      } else if (latency == best_lat) {
        Architecture arch = decode_choice(spec, chosen);
        take = lex_less(arch, best_arch);
      }
    }
    if (take) {
      found = true;
      best_delta = delta;
      best_lat = latency;
      best_arch = decode_choice(spec, chosen);
      trace.push_back({improvements++, est.base + delta,
                       latency + lat.fixed_overhead});
    }
  };

  std::function<void(int, double, double)> dfs = [&](int s, double delta,
                                                     double latency) {
    if (s == S) {
      consider();
      return;
    }
    for (const StageCandidate& cand : cands[s]) {
      const double bound = delta + cand.delta + opt_rest[s + 1];
      if (found && bound < best_delta) break;  // sorted: the rest is worse
      if (latency + cand.latency + min_rest[s + 1] > budget) continue;
      chosen[s] = &cand;
      dfs(s + 1, delta + cand.delta, latency + cand.latency);
    }
  };
  dfs(0, 0.0, 0.0);

  if (!found) {
    const double min_lat = lat.fixed_overhead + min_rest[0];
    throw InfeasibleError("budget " + std::to_string(T) +
                              " ms below minimum achievable latency " +
                              std::to_string(min_lat) + " ms",
                          min_lat);
  }

  SearchResult result;
  result.arch = best_arch;  // already canonical: only active blocks decoded
  result.predicted_acc = eval_acc(spec, est, best_arch);
  result.latency_ms = eval_lat(spec, lat, best_arch);
  result.deviation = (result.latency_ms - T) / T;
  result.solver = "exact";
  result.seed = seed;
  result.trace = std::move(trace);
  result.wall_time_sec = timer.seconds();
  return result;
}

CompareReport compare_solvers(const SearchSpaceSpec& spec,
                              const BilinearEstimator& est,
                              const LatencyModel& lat,
                              const std::vector<double>& budgets,
                              const std::vector<std::uint64_t>& seeds,
                              const BcfwParams& bcfw_params,
                              const EvoParams& evo_params,
                              const ExactParams& exact_params) {
  static const char* kSolvers[] = {"bcfw", "evolutionary", "exact"};
  CompareReport report;
  for (double T : budgets) {
    for (const char* solver : kSolvers) {
      for (std::uint64_t seed : seeds) {
        CompareCell cell;
        cell.solver = solver;
        cell.T = T;
        cell.seed = seed;
        try {
          if (cell.solver == "bcfw") {
            cell.result = bcfw_search(spec, est, lat, T, bcfw_params, seed)
                              .result;
          } else if (cell.solver == "evolutionary") {
            cell.result =
                evolutionary_search(spec, est, lat, T, evo_params, seed);
          } else {
            cell.result = exact_search(spec, est, lat, T, exact_params, seed);
          }
          cell.ok = true;
        } catch (const Error& e) {
          cell.ok = false;
          cell.error = e.what();
        }
        report.cells.push_back(std::move(cell));
      }
    }
  }

  for (double T : budgets) {
    for (const char* solver : kSolvers) {
      CompareSummary summary;
      summary.solver = solver;
      summary.T = T;
      double sum_acc = 0.0, sum_lat = 0.0, sum_wall = 0.0;
      std::vector<double> accs, lats;
      for (const CompareCell& cell : report.cells) {
        if (!cell.ok || cell.T != T || cell.solver != solver) continue;
        accs.push_back(cell.result.predicted_acc);
        lats.push_back(cell.result.latency_ms);
        sum_acc += cell.result.predicted_acc;
        sum_lat += cell.result.latency_ms;
        sum_wall += cell.result.wall_time_sec;
      }
      summary.n_ok = static_cast<int>(accs.size());
      if (summary.n_ok > 0) {
        const double n = summary.n_ok;
        summary.mean_acc = sum_acc / n;
        summary.mean_lat = sum_lat / n;
        summary.mean_wall_sec = sum_wall / n;
        double var_acc = 0.0, var_lat = 0.0;
        for (int i = 0; i < summary.n_ok; ++i) {
          var_acc += (accs[i] - summary.mean_acc) * (accs[i] - summary.mean_acc);
          var_lat += (lats[i] - summary.mean_lat) * (lats[i] - summary.mean_lat);
        }
        summary.std_acc = std::sqrt(var_acc / n);
        summary.std_lat = std::sqrt(var_lat / n);
      }
      report.summaries.push_back(std::move(summary));
    }
  }

  for (double T : budgets) {
    for (std::uint64_t seed : seeds) {
      BestOfCell best;
      best.T = T;
      best.seed = seed;
      bool any = false;
      for (const CompareCell& cell : report.cells) {
        if (!cell.ok || cell.T != T || cell.seed != seed) continue;
        if (!any || cell.result.predicted_acc > best.predicted_acc) {
          any = true;
          best.solver = cell.solver;
          best.predicted_acc = cell.result.predicted_acc;
        }
      }
      report.best_of.push_back(std::move(best));
    }
  }
  return report;
}

}  // namespace bilopt
