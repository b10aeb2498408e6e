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

#ifndef BILOPT_ESTIMATOR_HPP_
#define BILOPT_ESTIMATOR_HPP_

#include <cstdint>

#include "bilopt/search_space.hpp"
#include "bilopt/synthetic_oracle.hpp"

namespace bilopt {

// Bilinear accuracy estimator
//
//   ACC(alpha, beta) = base + sum_s sum_d beta^s_d * depth_delta^s_d
//     + sum_s sum_b sum_c alpha^s_{b,c} * config_delta^s_{b,c}
//       * sum_{d >= b+1} beta^s_d,
//
// i.e. base + q_beta' beta + alpha' Q_{alpha,beta} beta with the block-mask
// structure baked into Q.  Tables are measured by conditional probes against
// an oracle:
//
//   depth_delta^s_d    = E[Acc | d_s = d] - E[Acc]
//   config_delta^s_b_c = E[Acc | c_b = c, d_s = p(b)] - E[Acc | d_s = p(b)]
//
// with all unpinned groups uniform and p(b) the smallest allowed depth that
// activates block b.  Storing the config delta against the depth-pinned
// conditional rather than the base keeps evaluation of a one-hot point equal
// to base + sum_s depth_delta^s_{d_s} + sum_s sum_{b <= d_s}
// config_delta^s_{b,c_b}, which reproduces an additively separable oracle
// exactly; both differences are built from the same raw probes, so the probe
// budget is unchanged (one probe per decision variable plus one base probe).
struct BilinearEstimator {
  struct Meta {
    int n_per_probe = 0;  // 0 for exact-expectation builds
    int n_repeats = 1;
    std::uint64_t seed = 0;
  };

  double base = 0.0;
  std::vector<double> depth_deltas;   // beta layout, percent
  std::vector<double> config_deltas;  // alpha layout, percent
  Meta meta;
};

// Mean of n_samples noisy accuracy measurements of uniform architectures.
double estimate_base(const SearchSpaceSpec& spec, const SyntheticSupernet& m,
                     int n_samples, Rng& rng);

// Mean accuracy with stage s pinned to depth d and everything else uniform,
// minus the supplied base estimate.
double estimate_depth_delta(const SearchSpaceSpec& spec,
                            const SyntheticSupernet& m, int s, int d,
                            double base_estimate, int n_samples, Rng& rng);

// Mean accuracy with block b of stage s pinned to config c and the stage
// depth pinned to the smallest allowed depth activating b, minus the
// supplied base estimate.
double estimate_config_delta(const SearchSpaceSpec& spec,
                             const SyntheticSupernet& m, int s, int b, int c,
                             double base_estimate, int n_samples, Rng& rng);

struct BuildParams {
  int n_per_probe = 64;
  int n_repeats = 10;
};

// Measures all tables by Monte Carlo probes: one probe per decision variable
// plus one shared base probe, each averaged over n_per_probe * n_repeats
// samples.  All probes condition the same shared uniform assignments (common
// random numbers), so background terms cancel exactly out of the delta
// differences and a separable oracle is reproduced at any probe budget.
// Observation noise, when enabled, comes from a per-probe stream derived
// from (seed, probe index), so results do not depend on evaluation order.
BilinearEstimator build(const SearchSpaceSpec& spec,
                        const SyntheticSupernet& m, const BuildParams& params,
                        std::uint64_t seed);

// Builds the same tables from exact conditional expectations, enumerating
// the raw assignment space (every depth choice crossed with configs of all
// blocks, masked or not).  Intended for small spaces; throws
// CapExceededError when the raw count exceeds cap.
BilinearEstimator build_exact(const SearchSpaceSpec& spec,
                              const SyntheticSupernet& m,
                              double cap = 4194304.0);

// Estimated accuracy of a point; exact bilinear form on continuous points.
double eval_acc(const SearchSpaceSpec& spec, const BilinearEstimator& est,
                const ArchPoint& point);
double eval_acc(const SearchSpaceSpec& spec, const BilinearEstimator& est,
                const Architecture& arch);

// Latency of a point under the same masked bilinear structure plus the fixed
// overhead.
double eval_lat(const SearchSpaceSpec& spec, const LatencyModel& lat,
                const ArchPoint& point);
double eval_lat(const SearchSpaceSpec& spec, const LatencyModel& lat,
                const Architecture& arch);

enum class AblationMode {
  kFull,
  kDepthTermsOnly,   // config table zeroed (Q_{alpha,beta} = 0)
  kConfigTermsOnly,  // depth table zeroed (q_beta = 0)
};

// Copy of the estimator with the selected table zeroed.
BilinearEstimator ablate(const BilinearEstimator& est, AblationMode mode);

void check_shape(const SearchSpaceSpec& spec, const BilinearEstimator& est);

// Per-stage cumulative beta mass sum_{d >= b+1} beta^s_d for each block b.
// Shared by the accuracy and latency forms and by the solvers.
std::vector<double> beta_tails(const SearchSpaceSpec& spec,
                               const std::vector<double>& beta, int s);

}  // namespace bilopt

#endif  // BILOPT_ESTIMATOR_HPP_
