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

#ifndef BILOPT_SOLVERS_HPP_
#define BILOPT_SOLVERS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "bilopt/estimator.hpp"
#include "bilopt/search_space.hpp"
#include "bilopt/synthetic_oracle.hpp"

namespace bilopt {

// Linear program over a product of simplices with one budget constraint:
//
//   max sum_i gains[i] * u[i]
//   s.t. sum_i costs[i] * u[i] <= budget,  u >= 0,
//        entries of each group sum to 1.
//
// This is the LP relaxation of a multiple-choice knapsack; both partial
// maximization steps of the bilinear search reduce to it.
struct LpSubproblem {
  std::vector<int> group_sizes;
  std::vector<double> gains;  // flat, group-major
  std::vector<double> costs;  // flat, group-major, nonnegative
  double budget = 0.0;
};

// A basic optimal solution: all groups one-hot except at most one, which
// mixes exactly two entries.
struct LpSolution {
  std::vector<double> u;
  double objective = 0.0;
  double cost = 0.0;
  int fractional_group = -1;  // -1 when fully one-hot
};

// Exact solver for the relaxed multiple-choice knapsack: per-group dominance
// filtering to the concave efficiency frontier, then greedy upgrades in
// order of incremental efficiency until the budget binds.  Throws
// InfeasibleError (carrying the minimal achievable cost) when even the
// cheapest assignment exceeds the budget.
LpSolution lp_solve(const LpSubproblem& problem);

struct TracePoint {
  int iter = 0;
  double obj = 0.0;
  double lat = 0.0;
};

struct SearchResult {
  Architecture arch;
  double predicted_acc = 0.0;
  double latency_ms = 0.0;
  // Signed relative budget deviation (latency - T) / T of the returned
  // architecture; positive only when the budget could not be met.
  double deviation = 0.0;
  std::string solver;
  std::uint64_t seed = 0;
  std::vector<TracePoint> trace;
  double wall_time_sec = 0.0;  // not serialized
};

struct BcfwParams {
  int iterations = 2000;
  double p_alpha = 0.5;  // probability of updating the alpha block
};

struct BcfwResult {
  SearchResult result;
  ArchPoint zeta;  // final continuous iterate, before rounding
};

// Block-coordinate Frank-Wolfe with line search on the relaxed problem
//   max_(alpha,beta) eval_acc  s.t.  eval_lat <= T.
// Starts from the minimum-latency one-hot architecture; each iteration picks
// the alpha or beta block at random and replaces it by the exact optimum of
// the corresponding partial linear program (the line-search step size is
// always 1 for this objective).  The objective never decreases, every
// iterate is feasible, and the final point is one-hot in every group except
// at most one per block, so rounding touches at most two groups.
BcfwResult bcfw_search(const SearchSpaceSpec& spec,
                       const BilinearEstimator& est, const LatencyModel& lat,
                       double T, const BcfwParams& params, std::uint64_t seed);

struct RoundResult {
  Architecture arch;
  double deviation = 0.0;  // (latency - T) / T of the rounded architecture
  bool feasible = true;
};

// Rounds a sparse continuous point to a discrete architecture.  Each
// fractional group (at most one among the alpha groups and one among the
// beta groups, each with exactly two nonzero entries) is resolved by argmax;
// if that violates the budget the alternative entries are tried in
// decreasing weight order, and if every combination violates it the
// lowest-latency one is returned with feasible = false.  Inputs that violate
// the sparsity structure signal a solver bug and are rejected.
RoundResult round_solution(const SearchSpaceSpec& spec,
                           const BilinearEstimator& est,
                           const LatencyModel& lat, const ArchPoint& zeta,
                           double T);

struct EvoParams {
  int population = 100;
  int generations = 500;
  double mutation_prob = 0.1;   // per-group resample probability
  double parent_ratio = 0.25;   // fraction kept as parents
  double mutation_ratio = 0.5;  // fraction of offspring from mutation
};

// Regularized evolution over discrete architectures with rejection sampling
// for feasibility.  Each generation keeps the top parents by estimated
// accuracy and refills the population with mutated and crossed-over
// children; infeasible children are redrawn within a retry budget of ten
// times the population size per fill phase.
SearchResult evolutionary_search(const SearchSpaceSpec& spec,
                                 const BilinearEstimator& est,
                                 const LatencyModel& lat, double T,
                                 const EvoParams& params, std::uint64_t seed);

struct ExactParams {
  double cap = 1e6;  // refuse spaces with more effective architectures
};

// Exhaustive optimum by stage-wise branch and bound.  The bound adds each
// remaining stage's best candidate delta regardless of latency, which never
// underestimates; subtrees that cannot reach the remaining budget with their
// cheapest stage candidates are pruned.  Ties are broken towards lower
// latency, then towards the lexicographically smaller architecture in
// enumeration order.
SearchResult exact_search(const SearchSpaceSpec& spec,
                          const BilinearEstimator& est,
                          const LatencyModel& lat, double T,
                          const ExactParams& params, std::uint64_t seed);

struct CompareCell {
  std::string solver;
  double T = 0.0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  SearchResult result;
};

struct CompareSummary {
  std::string solver;
  double T = 0.0;
  int n_ok = 0;
  double mean_acc = 0.0;
  double std_acc = 0.0;
  double mean_lat = 0.0;
  double std_lat = 0.0;
  double mean_wall_sec = 0.0;  // not serialized
};

struct BestOfCell {
  double T = 0.0;
  std::uint64_t seed = 0;
  std::string solver;  // empty when every solver failed
  double predicted_acc = 0.0;
};

struct CompareReport {
  std::vector<CompareCell> cells;
  std::vector<CompareSummary> summaries;
  std::vector<BestOfCell> best_of;
};

// Runs all three solvers over the (T, seed) grid.  Per-cell errors are
// recorded in the report instead of aborting the sweep.
CompareReport compare_solvers(const SearchSpaceSpec& spec,
                              const BilinearEstimator& est,
                              const LatencyModel& lat,
                              const std::vector<double>& budgets,
                              const std::vector<std::uint64_t>& seeds,
                              const BcfwParams& bcfw_params = {},
                              const EvoParams& evo_params = {},
                              const ExactParams& exact_params = {});

}  // namespace bilopt

#endif  // BILOPT_SOLVERS_HPP_
