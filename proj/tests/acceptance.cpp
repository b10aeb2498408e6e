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
//
// Acceptance gate: every release-level claim of the library is checked here,
// one printed line per criterion.  Tolerances are pinned next to each check.

#include <sys/wait.h>
#include <unistd.h>

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bilopt/analysis.hpp"
#include "bilopt/estimator.hpp"
#include "bilopt/predictors.hpp"
#include "bilopt/search_space.hpp"
#include "bilopt/solvers.hpp"
#include "bilopt/synthetic_oracle.hpp"

using namespace bilopt;
namespace fs = std::filesystem;

namespace {

SearchSpaceSpec tiny2() {
  return SearchSpaceSpec(2, {{1, 2}, {1, 2}},
                         {{1, 2, 3, false}, {2, 6, 5, true}});
}

SearchSpaceSpec small2() {
  return SearchSpaceSpec(3, {{2, 3}, {2, 3}},
                         {{1, 2, 3, false},
                          {2, 3, 3, true},
                          {3, 3, 5, false},
                          {4, 6, 5, true}});
}

struct Instance {
  SyntheticSupernet m;
  BilinearEstimator est;
  LatencyModel lat;
  double lat_lo = 0.0;
  double lat_hi = 0.0;
};

Instance make_instance(const SearchSpaceSpec& spec, std::uint64_t seed,
                       const OracleGenParams& oracle = {}) {
  Instance inst{make_supernet(spec, oracle, seed), {}, {}, 0.0, 0.0};
  inst.est = build(spec, inst.m, {64, 10}, seed);
  inst.lat = gen_latency(spec, {}, seed);
  inst.lat_lo = std::numeric_limits<double>::infinity();
  inst.lat_hi = -inst.lat_lo;
  for_each_architecture(spec, 1e6, [&](const Architecture& a) {
    const double l = eval_lat(spec, inst.lat, a);
    inst.lat_lo = std::min(inst.lat_lo, l);
    inst.lat_hi = std::max(inst.lat_hi, l);
  });
  return inst;
}

double max_eval_err(const SearchSpaceSpec& spec, const SyntheticSupernet& m,
                    const BilinearEstimator& est) {
  double worst = 0.0;
  for_each_architecture(spec, 1e6, [&](const Architecture& a) {
    worst = std::max(
        worst, std::fabs(eval_acc(spec, est, a) - true_accuracy(spec, m, a)));
  });
  return worst;
}

double scan_best(const SearchSpaceSpec& spec, const Instance& inst, double T) {
  double best = -std::numeric_limits<double>::infinity();
  for_each_architecture(spec, 1e6, [&](const Architecture& a) {
    if (eval_lat(spec, inst.lat, a) <= T)
      best = std::max(best, eval_acc(spec, inst.est, a));
  });
  return best;
}

// Value of the partial program in alpha at fixed beta tails; -inf when the
// budget cannot be met.
double alpha_lp_value(const SearchSpaceSpec& spec, const BilinearEstimator& est,
                      const LatencyModel& lat,
                      const std::vector<std::vector<double>>& tails, double T) {
  LpSubproblem p;
  for (int s = 0; s < spec.num_stages(); ++s)
    for (int b = 0; b < spec.max_depth(); ++b) {
      p.group_sizes.push_back(spec.num_configs());
      for (int c = 0; c < spec.num_configs(); ++c) {
        const int i = spec.alpha_index(s, b, c);
        p.gains.push_back(est.config_deltas[i] * tails[s][b]);
        p.costs.push_back(lat.block_latency[i] * tails[s][b]);
      }
    }
  p.budget = T - lat.fixed_overhead;
  try {
    return lp_solve(p).objective;
  } catch (const InfeasibleError&) {
    return -std::numeric_limits<double>::infinity();
  }
}

// Continuous optimum for the two-stage, two-depth space: exhaustive grid
// over the per-stage shallow-depth weights plus local refinement.  Grid
// sampling only underestimates, which tightens the convergence check.
double continuous_opt(const SearchSpaceSpec& spec, const BilinearEstimator& est,
                      const LatencyModel& lat, double T) {
  auto value = [&](double t0, double t1) {
    const double w1[2] = {t0, t1};
    std::vector<std::vector<double>> tails(2, std::vector<double>(2));
    double depth_part = 0.0;
    for (int s = 0; s < 2; ++s) {
      tails[s][0] = 1.0;
      tails[s][1] = 1.0 - w1[s];
      depth_part += est.depth_deltas[spec.beta_index(s, 0)] * w1[s] +
                    est.depth_deltas[spec.beta_index(s, 1)] * (1.0 - w1[s]);
    }
    return est.base + depth_part + alpha_lp_value(spec, est, lat, tails, T);
  };
  double best = -std::numeric_limits<double>::infinity(), bt0 = 0.0, bt1 = 0.0;
  const int N = 200;
  for (int i = 0; i <= N; ++i)
    for (int j = 0; j <= N; ++j) {
      const double v = value(double(i) / N, double(j) / N);
      if (v > best) {
        best = v;
        bt0 = double(i) / N;
        bt1 = double(j) / N;
      }
    }
  double h = 1.0 / N;
  for (int round = 0; round < 4; ++round) {
    const double lo0 = std::max(0.0, bt0 - h), hi0 = std::min(1.0, bt0 + h);
    const double lo1 = std::max(0.0, bt1 - h), hi1 = std::min(1.0, bt1 + h);
    const int M = 40;
    for (int i = 0; i <= M; ++i)
      for (int j = 0; j <= M; ++j) {
        const double t0 = lo0 + (hi0 - lo0) * i / M;
        const double t1 = lo1 + (hi1 - lo1) * j / M;
        const double v = value(t0, t1);
        if (v > best) {
          best = v;
          bt0 = t0;
          bt1 = t1;
        }
      }
    h /= 10.0;
  }
  return best;
}

struct FracShape {
  int alpha_frac = 0;
  int beta_frac = 0;
  bool malformed = false;  // some group not 1 or 2 nonzeros
};

FracShape count_fracs(const SearchSpaceSpec& spec, const ArchPoint& zeta) {
  constexpr double kTol = 1e-9;
  FracShape out;
  for (int s = 0; s < spec.num_stages(); ++s) {
    for (int b = 0; b < spec.max_depth(); ++b) {
      int k = 0;
      for (int c = 0; c < spec.num_configs(); ++c)
        if (zeta.alpha[spec.alpha_index(s, b, c)] > kTol) ++k;
      if (k == 2) ++out.alpha_frac;
      if (k != 1 && k != 2) out.malformed = true;
    }
    int k = 0;
    for (int pos = 0; pos < spec.beta_group_size(s); ++pos)
      if (zeta.beta[spec.beta_offset(s) + pos] > kTol) ++k;
    if (k == 2) ++out.beta_frac;
    if (k != 1 && k != 2) out.malformed = true;
  }
  return out;
}

// Exhaustive reference for the relaxed multiple-choice knapsack: the optimum
// is attained at a feasible vertex or on a segment between two entries of a
// single group where the budget binds.
std::optional<double> lp_oracle(const LpSubproblem& p) {
  const int G = static_cast<int>(p.group_sizes.size());
  std::vector<int> off(G, 0);
  for (int g = 1; g < G; ++g) off[g] = off[g - 1] + p.group_sizes[g - 1];
  double min_cost = 0.0;
  for (int g = 0; g < G; ++g) {
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < p.group_sizes[g]; ++i)
      m = std::min(m, p.costs[off[g] + i]);
    min_cost += m;
  }
  if (min_cost > p.budget) return std::nullopt;

  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> pick(G, 0);
  for (;;) {
    double cost = 0.0, gain = 0.0;
    for (int g = 0; g < G; ++g) {
      cost += p.costs[off[g] + pick[g]];
      gain += p.gains[off[g] + pick[g]];
    }
    if (cost <= p.budget) {
      best = std::max(best, gain);
      for (int g = 0; g < G; ++g)
        for (int alt = 0; alt < p.group_sizes[g]; ++alt) {
          if (alt == pick[g]) continue;
          const double dc = p.costs[off[g] + alt] - p.costs[off[g] + pick[g]];
          const double dg = p.gains[off[g] + alt] - p.gains[off[g] + pick[g]];
          if (dc <= 0.0) continue;  // cheaper alternatives are other vertices
          const double lambda = std::min(1.0, (p.budget - cost) / dc);
          if (lambda > 0.0 && lambda < 1.0)
            best = std::max(best, gain + lambda * dg);
        }
    }
    int g = 0;
    while (g < G && ++pick[g] == p.group_sizes[g]) pick[g++] = 0;
    if (g == G) break;
  }
  return best;
}

// Brute-force tie-aware rank metrics used as independent references.
std::optional<double> brute_kendall(const std::vector<double>& x,
                                    const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  long long nc = 0, nd = 0, tx = 0, ty = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double a = x[i] - x[j], b = y[i] - y[j];
      if (a == 0.0 && b == 0.0) {
        ++tx;
        ++ty;
      } else if (a == 0.0) {
        ++tx;
      } else if (b == 0.0) {
        ++ty;
      } else if ((a > 0.0) == (b > 0.0)) {
        ++nc;
      } else {
        ++nd;
      }
    }
  const double n0 = 0.5 * n * (n - 1);
  const double dx = n0 - static_cast<double>(tx);
  const double dy = n0 - static_cast<double>(ty);
  if (dx <= 0.0 || dy <= 0.0) return std::nullopt;
  return (nc - nd) / (std::sqrt(dx) * std::sqrt(dy));
}

std::vector<double> mid_ranks(const std::vector<double>& v) {
  const int n = static_cast<int>(v.size());
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) {
    int below = 0, equal = 0;
    for (int j = 0; j < n; ++j) {
      if (v[j] < v[i]) ++below;
      if (v[j] == v[i]) ++equal;
    }
    r[i] = below + 0.5 * (equal + 1);
  }
  return r;
}

std::optional<double> brute_spearman(const std::vector<double>& x,
                                     const std::vector<double>& y) {
  const std::vector<double> rx = mid_ranks(x), ry = mid_ranks(y);
  const int n = static_cast<int>(x.size());
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

// ---- command-line determinism helpers ----

const fs::path& work_root() {
  static const fs::path root = [] {
    const fs::path p = fs::temp_directory_path() /
                       ("bilopt_accept_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

int run_cli(const std::string& args) {
  static const std::string bin = BILOPT_CLI_PATH;
  const std::string cmd = "\"" + bin + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool same_bytes(const fs::path& a, const fs::path& b) {
  const std::string sa = slurp(a), sb = slurp(b);
  return !sa.empty() && sa == sb;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

// ---- reporting ----

struct Gate {
  int failed = 0;
  std::chrono::steady_clock::time_point t0;

  void start() { t0 = std::chrono::steady_clock::now(); }
  void line(int id, const char* name, bool ok, const std::string& detail) {
    const double sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::printf("[%2d/12] %s  %-28s %s (%.2fs)\n", id, ok ? "PASS" : "FAIL",
                name, detail.c_str(), sec);
    std::fflush(stdout);
    if (!ok) ++failed;
  }
};

std::string fmt(const char* f, ...) {
  char buf[256];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

}  // namespace

int main() {
  Gate gate;
  const SearchSpaceSpec tiny = tiny2();
  const SearchSpaceSpec small = small2();

  // 1. Separable exactness: with no interactions and no noise the built
  // estimator reproduces the oracle on every architecture.
  gate.start();
  try {
    constexpr double kTol = 1e-9;
    const SyntheticSupernet m = make_supernet(tiny, {}, 42);
    const BilinearEstimator est = build(tiny, m, {64, 10}, 42);
    const double worst = max_eval_err(tiny, m, est);
    gate.line(1, "separable exactness", worst <= kTol,
              fmt("max |est - oracle| = %.2e (tol %.0e)", worst, kTol));
  } catch (const std::exception& e) {
    gate.line(1, "separable exactness", false, e.what());
  }

  // 2. Error scaling: the worst-case estimator error grows at most linearly
  // in the interaction strength, within factor 3 of the smallest-epsilon
  // anchor, across 10 seeds.
  gate.start();
  try {
    constexpr double kFactor = 3.0;
    const double eps[3] = {1e-3, 2e-3, 4e-3};
    bool ok = true;
    double worst_ratio = 0.0;
    for (int seed = 0; seed < 10; ++seed) {
      double err[3];
      for (int i = 0; i < 3; ++i) {
        OracleGenParams g;
        g.epsilon = eps[i];
        const SyntheticSupernet m = make_supernet(tiny, g, 100 + seed);
        const BilinearEstimator est = build(tiny, m, {64, 10}, 100 + seed);
        err[i] = max_eval_err(tiny, m, est);
      }
      if (err[0] <= 0.0) ok = false;
      const double slope = err[0] / eps[0];
      for (int i = 1; i < 3; ++i) {
        const double ratio = err[i] / (slope * eps[i]);
        worst_ratio = std::max(worst_ratio, ratio);
        if (ratio > kFactor) ok = false;
      }
    }
    gate.line(2, "linear error scaling", ok,
              fmt("worst growth ratio %.3f (limit %.1f)", worst_ratio,
                  kFactor));
  } catch (const std::exception& e) {
    gate.line(2, "linear error scaling", false, e.what());
  }

  // 3. Iterate sparsity: every final continuous iterate keeps all groups
  // one-hot except at most one per family, which mixes exactly two entries.
  gate.start();
  try {
    int violations = 0, runs = 0, with_two = 0;
    for (int inst_id = 0; inst_id < 4; ++inst_id) {
      const Instance inst = make_instance(small, 200 + inst_id);
      for (int run = 0; run < 25; ++run) {
        const double T =
            inst.lat_lo + (0.25 + 0.5 * run / 24.0) * (inst.lat_hi - inst.lat_lo);
        const BcfwResult r =
            bcfw_search(small, inst.est, inst.lat, T, {2000, 0.5}, run);
        const FracShape shape = count_fracs(small, r.zeta);
        ++runs;
        if (shape.malformed || shape.alpha_frac > 1 || shape.beta_frac > 1)
          ++violations;
        if (shape.alpha_frac + shape.beta_frac > 0) ++with_two;
      }
    }
    gate.line(3, "iterate sparsity", violations == 0 && runs == 100,
              fmt("%d/%d runs clean, %d with fractional groups", runs - violations,
                  runs, with_two));
  } catch (const std::exception& e) {
    gate.line(3, "iterate sparsity", false, e.what());
  }

  // 4. Convergence rate: the mean optimality gap against the exactly
  // computed continuous optimum decays at least as fast as 4/(k+4) of the
  // initial gap, up to Monte-Carlo noise.  The absolute slack absorbs float
  // round-off on instances whose start is already optimal.
  gate.start();
  try {
    constexpr double kAbsSlack = 1e-9;
    const double fracs[3] = {0.35, 0.5, 0.65};
    const int ks[4] = {4, 8, 16, 32};
    const int R = 200;
    int bad = 0;
    double worst_margin = -std::numeric_limits<double>::infinity();
    for (int inst_id = 0; inst_id < 20; ++inst_id) {
      const Instance inst = make_instance(tiny, 500 + inst_id);
      const double T =
          inst.lat_lo + fracs[inst_id % 3] * (inst.lat_hi - inst.lat_lo);
      const double fstar = continuous_opt(tiny, inst.est, inst.lat, T);
      std::vector<std::vector<double>> obj(5, std::vector<double>(R));
      for (int run = 0; run < R; ++run) {
        const BcfwResult r =
            bcfw_search(tiny, inst.est, inst.lat, T, {32, 0.5}, run);
        obj[0][run] = r.result.trace[0].obj;
        for (int i = 0; i < 4; ++i) obj[i + 1][run] = r.result.trace[ks[i]].obj;
      }
      const double gap0 = fstar - obj[0][0];
      for (int i = 0; i < 4; ++i) {
        double mean = 0.0;
        for (double v : obj[i + 1]) mean += v;
        mean /= R;
        double var = 0.0;
        for (double v : obj[i + 1]) var += (v - mean) * (v - mean);
        const double se = std::sqrt(var / (R - 1)) / std::sqrt(double(R));
        const double gap = fstar - mean;
        const double bound = 4.0 / (ks[i] + 4) * gap0 + 3.0 * se + kAbsSlack;
        worst_margin = std::max(worst_margin, gap - bound);
        if (gap > bound) ++bad;
      }
    }
    gate.line(4, "convergence rate", bad == 0,
              fmt("80 gap checks, %d over bound, worst margin %.2e", bad,
                  worst_margin));
  } catch (const std::exception& e) {
    gate.line(4, "convergence rate", false, e.what());
  }

  // 5. Partial program correctness: the knapsack relaxation solver matches
  // exhaustive vertex-and-edge enumeration on 1000 random instances.
  gate.start();
  try {
    constexpr double kTol = 1e-9;
    Rng rng(7777);
    int checked = 0, infeasible = 0;
    double worst = 0.0;
    bool ok = true;
    for (int t = 0; t < 1000; ++t) {
      LpSubproblem p;
      const int G = 1 + rng.uniform_int(4);
      int total = 0;
      for (int g = 0; g < G; ++g) {
        int size = 1 + rng.uniform_int(4);
        size = std::min(size, 12 - total - (G - 1 - g));
        total += size;
        p.group_sizes.push_back(size);
        for (int i = 0; i < size; ++i) {
          p.gains.push_back(rng.uniform(-1.0, 1.0));
          p.costs.push_back(rng.uniform01() < 0.2 ? 0.0
                                                  : 2.0 * rng.uniform01());
        }
      }
      double lo = 0.0, hi = 0.0;
      int off = 0;
      for (int g = 0; g < G; ++g) {
        double mn = p.costs[off], mx = p.costs[off];
        for (int i = 1; i < p.group_sizes[g]; ++i) {
          mn = std::min(mn, p.costs[off + i]);
          mx = std::max(mx, p.costs[off + i]);
        }
        lo += mn;
        hi += mx;
        off += p.group_sizes[g];
      }
      p.budget = rng.uniform01() < 0.15 ? lo - 0.1
                                        : lo + (hi - lo) * rng.uniform01();
      const std::optional<double> ref = lp_oracle(p);
      try {
        const LpSolution sol = lp_solve(p);
        if (!ref) {
          ok = false;
          continue;
        }
        worst = std::max(worst, std::fabs(sol.objective - *ref));
        if (std::fabs(sol.objective - *ref) > kTol) ok = false;
        int frac_groups = 0;
        off = 0;
        for (int g = 0; g < G; ++g) {
          int nz = 0;
          double sum = 0.0;
          for (int i = 0; i < p.group_sizes[g]; ++i) {
            if (sol.u[off + i] < 0.0) ok = false;
            if (sol.u[off + i] > 1e-12) ++nz;
            sum += sol.u[off + i];
          }
          if (std::fabs(sum - 1.0) > 1e-12) ok = false;
          if (nz > 2) ok = false;
          if (nz == 2) ++frac_groups;
          off += p.group_sizes[g];
        }
        if (frac_groups > 1) ok = false;
        ++checked;
      } catch (const InfeasibleError&) {
        if (ref) ok = false;
        ++infeasible;
      }
    }
    gate.line(5, "knapsack relaxation", ok && checked + infeasible == 1000,
              fmt("%d solved + %d infeasible, worst |dv| = %.2e (tol %.0e)",
                  checked, infeasible, worst, kTol));
  } catch (const std::exception& e) {
    gate.line(5, "knapsack relaxation", false, e.what());
  }

  // 6. Solver optimality on enumerable instances: branch and bound equals
  // the exhaustive scan everywhere; the two heuristics reach the optimum
  // within 0.5% of its delta magnitude on at least 90% of instances.
  gate.start();
  try {
    constexpr double kRelTol = 0.005;
    const double fracs[3] = {0.35, 0.5, 0.65};
    int exact_ok = 0, evo_ok = 0, bcfw_ok = 0;
    const int n_inst = 20, need = 18;
    for (int inst_id = 0; inst_id < n_inst; ++inst_id) {
      const Instance inst = make_instance(tiny, 500 + inst_id);
      const double T =
          inst.lat_lo + fracs[inst_id % 3] * (inst.lat_hi - inst.lat_lo);
      const double best = scan_best(tiny, inst, T);
      const double delta = std::fabs(best - inst.est.base);
      const SearchResult ex = exact_search(tiny, inst.est, inst.lat, T, {}, 1);
      if (std::fabs(ex.predicted_acc - best) <= 1e-9) ++exact_ok;
      const SearchResult ev = evolutionary_search(tiny, inst.est, inst.lat, T,
                                                  {}, 1000 + inst_id);
      if ((best - ev.predicted_acc) / delta <= kRelTol) ++evo_ok;
      const BcfwResult bc =
          bcfw_search(tiny, inst.est, inst.lat, T, {}, 1000 + inst_id);
      if ((best - bc.result.predicted_acc) / delta <= kRelTol) ++bcfw_ok;
    }
    gate.line(6, "solver optimality",
              exact_ok == n_inst && evo_ok >= need && bcfw_ok >= need,
              fmt("exact %d/20, evo %d/20, bcfw %d/20 (need 20/18/18)",
                  exact_ok, evo_ok, bcfw_ok));
  } catch (const std::exception& e) {
    gate.line(6, "solver optimality", false, e.what());
  }

  // 7. Budget compliance: across the benchmark grid every returned design
  // meets the budget, except rounded block-coordinate results which may
  // exceed it by at most 10%.
  gate.start();
  try {
    constexpr double kMaxDeviation = 0.10;
    const Instance inst = make_instance(small, 900);
    const std::vector<double> budgets = {
        inst.lat_lo + 0.3 * (inst.lat_hi - inst.lat_lo),
        inst.lat_lo + 0.5 * (inst.lat_hi - inst.lat_lo),
        inst.lat_lo + 0.8 * (inst.lat_hi - inst.lat_lo)};
    const CompareReport rep = compare_solvers(small, inst.est, inst.lat,
                                              budgets, {1, 2, 3, 4, 5});
    int n_ok = 0, violations = 0;
    double worst_dev = 0.0;
    for (const CompareCell& c : rep.cells) {
      if (!c.ok) continue;
      ++n_ok;
      if (c.solver == "bcfw") {
        worst_dev = std::max(worst_dev, c.result.deviation);
        if (c.result.deviation > kMaxDeviation) ++violations;
      } else if (c.result.latency_ms > c.T + 1e-9) {
        ++violations;
      }
    }
    gate.line(7, "budget compliance", n_ok == 45 && violations == 0,
              fmt("%d/45 cells ok, %d violations, worst deviation %.3f", n_ok,
                  violations, worst_dev));
  } catch (const std::exception& e) {
    gate.line(7, "budget compliance", false, e.what());
  }

  // 8. Closed-form regression: on noiseless separable data the truncated-SVD
  // fit predicts held-out targets to 1e-6 and agrees with an independent
  // pseudo-inverse solution.
  gate.start();
  try {
    constexpr double kTol = 1e-6;
    const SyntheticSupernet m = make_supernet(tiny, {}, 42);
    const RegressionDataset data = collect_dataset(tiny, m, 80, 40, 7, false);
    const FeatureMap fi = feature_index(tiny, FeatureFamily::kBilinear);
    const int F = fi.num_features(tiny);
    const int k = std::min(static_cast<int>(data.split.train.size()), F);
    const QuadraticPredictor p =
        fit_closed_form(tiny, FeatureFamily::kBilinear, data, k);
    double worst_test = 0.0;
    for (int i : data.split.test)
      worst_test = std::max(worst_test, std::fabs(predict(tiny, p, data.points[i]) -
                                                  data.targets[i]));
    const int n = static_cast<int>(data.split.train.size());
    Eigen::MatrixXd X(n, F);
    Eigen::VectorXd y(n);
    for (int r = 0; r < n; ++r) {
      const std::vector<double> f =
          featurize(tiny, fi, to_point(tiny, data.points[data.split.train[r]]));
      for (int c = 0; c < F; ++c) X(r, c) = f[c];
      y(r) = data.targets[data.split.train[r]];
    }
    const Eigen::RowVectorXd xm = X.colwise().mean();
    const double ym = y.mean();
    const Eigen::MatrixXd Xc = X.rowwise() - xm;
    const Eigen::VectorXd yc = y.array() - ym;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(Xc);
    const Eigen::VectorXd w = cod.pseudoInverse() * yc;
    const double b0 = ym - xm.dot(w);
    double worst_pinv = 0.0;
    for (int i : data.split.test) {
      const std::vector<double> f =
          featurize(tiny, fi, to_point(tiny, data.points[i]));
      double pred = b0;
      for (int c = 0; c < F; ++c) pred += w(c) * f[c];
      worst_pinv = std::max(worst_pinv,
                            std::fabs(pred - predict(tiny, p, data.points[i])));
    }
    gate.line(8, "closed-form regression",
              worst_test <= kTol && worst_pinv <= kTol,
              fmt("held-out err %.2e, vs pseudo-inverse %.2e (tol %.0e)",
                  worst_test, worst_pinv, kTol));
  } catch (const std::exception& e) {
    gate.line(8, "closed-form regression", false, e.what());
  }

  // 9. Term ablation ordering: with planted dominant depth effects the full
  // estimator ranks best, depth terms alone second, config terms alone last.
  gate.start();
  try {
    OracleGenParams g;
    g.depth_effect_scale = 1.0;
    g.config_effect_scale = 0.2;
    g.epsilon = 0.01;
    const SyntheticSupernet m = make_supernet(small, g, 1234);
    const BilinearEstimator est = build(small, m, {64, 10}, 1234);
    double kt[3];
    int i = 0;
    for (AblationMode mode : {AblationMode::kFull,
                              AblationMode::kDepthTermsOnly,
                              AblationMode::kConfigTermsOnly}) {
      const RankReport r = rank_predictor(
          small, m,
          [&, mode](const Architecture& a) {
            return eval_acc(small, ablate(est, mode), a);
          },
          400, 99, false);
      kt[i++] = r.kendall_tau;
    }
    gate.line(9, "ablation ordering", kt[0] > kt[1] && kt[1] > kt[2],
              fmt("full %.3f > depth %.3f > config %.3f", kt[0], kt[1],
                  kt[2]));
  } catch (const std::exception& e) {
    gate.line(9, "ablation ordering", false, e.what());
  }

  // 10. Transitivity bound closed form.
  gate.start();
  try {
    constexpr double kTol = 1e-4;
    const double v = transitivity_lower_bound(0.99, 0.97);
    gate.line(10, "transitivity bound", std::fabs(v - 0.9260) <= kTol,
              fmt("bound(0.99, 0.97) = %.7f (expect 0.9260 +/- %.0e)", v,
                  kTol));
  } catch (const std::exception& e) {
    gate.line(10, "transitivity bound", false, e.what());
  }

  // 11. Rank metrics vs brute force on tied lists.
  gate.start();
  try {
    constexpr double kTol = 1e-12;
    Rng rng(4242);
    int checked = 0, degenerate = 0;
    double worst = 0.0;
    bool ok = true;
    for (int t = 0; t < 100; ++t) {
      const int n = 2 + rng.uniform_int(49);
      std::vector<double> x(n), y(n);
      for (int i = 0; i < n; ++i) {
        x[i] = rng.uniform_int(6);
        y[i] = rng.uniform_int(6);
      }
      const std::optional<double> bt = brute_kendall(x, y);
      const std::optional<double> bs = brute_spearman(x, y);
      try {
        const double tau = kendall_tau(x, y);
        if (!bt || std::fabs(tau - *bt) > kTol) ok = false;
        else worst = std::max(worst, std::fabs(tau - *bt));
        ++checked;
      } catch (const UndefinedCorrelationError&) {
        if (bt) ok = false;
        ++degenerate;
      }
      try {
        const double rho = spearman_rho(x, y);
        if (!bs || std::fabs(rho - *bs) > kTol) ok = false;
        else worst = std::max(worst, std::fabs(rho - *bs));
      } catch (const UndefinedCorrelationError&) {
        if (bs) ok = false;
      }
    }
    gate.line(11, "rank metrics vs brute force", ok,
              fmt("%d lists checked (%d degenerate), worst |dv| = %.2e",
                  checked, degenerate, worst));
  } catch (const std::exception& e) {
    gate.line(11, "rank metrics vs brute force", false, e.what());
  }

  // 12. Command determinism: every subcommand rerun with the same seed
  // produces byte-identical files.
  gate.start();
  try {
    const fs::path root = work_root();
    const fs::path a = root / "a", b = root / "b";
    fs::create_directories(a);
    fs::create_directories(b);
    bool ok = true;
    int identical = 0;
    auto twice = [&](const std::string& args_a, const std::string& args_b,
                     const fs::path& out_a, const fs::path& out_b) {
      if (run_cli(args_a) != 0 || run_cli(args_b) != 0 ||
          !same_bytes(out_a, out_b)) {
        ok = false;
      } else {
        ++identical;
      }
    };
    twice("gen --preset tiny --seed 11 --out " + q(a / "g"),
          "gen --preset tiny --seed 11 --out " + q(b / "g"),
          a / "g" / "oracle.json", b / "g" / "oracle.json");
    const std::string space = q(a / "g" / "space.json");
    const std::string oracle = q(a / "g" / "oracle.json");
    const std::string latency = q(a / "g" / "latency.csv");
    const std::string est_args = "estimate --space " + space + " --oracle " +
                                 oracle +
                                 " --seed 5 --n-per-probe 32 --n-repeats 2";
    twice(est_args + " --out " + q(a / "est.json"),
          est_args + " --out " + q(b / "est.json"), a / "est.json",
          b / "est.json");
    const std::string fit_args = "fit --space " + space + " --oracle " +
                                 oracle +
                                 " --seed 5 --n 60 --n-test 30 --k-grid 1,2,4";
    twice(fit_args + " --out " + q(a / "p.json"),
          fit_args + " --out " + q(b / "p.json"), a / "p.json", b / "p.json");
    const std::string search_args =
        "search --space " + space + " --estimator " + q(a / "est.json") +
        " --latency " + latency +
        " --budget 100 --seed 1 --solver all --iterations 200"
        " --population 20 --generations 30";
    twice(search_args + " --out " + q(a / "s.json"),
          search_args + " --out " + q(b / "s.json"), a / "s.json",
          b / "s.json");
    const std::string eval_args = "eval --space " + space + " --oracle " +
                                  oracle + " --estimator " +
                                  q(a / "est.json") + " --n 80 --seed 2";
    twice(eval_args + " --out " + q(a / "r.json"),
          eval_args + " --out " + q(b / "r.json"), a / "r.json",
          b / "r.json");
    const std::string rep_args = "report --space " + space + " --estimator " +
                                 q(a / "est.json") + " --latency " + latency;
    twice(rep_args + " --out " + q(a / "i.json") + " --csv " + q(a / "i.csv"),
          rep_args + " --out " + q(b / "i.json") + " --csv " + q(b / "i.csv"),
          a / "i.json", b / "i.json");
    if (!same_bytes(a / "i.csv", b / "i.csv")) ok = false;
    gate.line(12, "command determinism", ok && identical == 6,
              fmt("%d/6 commands byte-identical on rerun", identical));
  } catch (const std::exception& e) {
    gate.line(12, "command determinism", false, e.what());
  }

  std::printf("acceptance: %d/12 criteria passed\n", 12 - gate.failed);
  return gate.failed == 0 ? 0 : 1;
}
