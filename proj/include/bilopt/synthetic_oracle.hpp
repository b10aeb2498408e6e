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

#ifndef BILOPT_SYNTHETIC_ORACLE_HPP_
#define BILOPT_SYNTHETIC_ORACLE_HPP_

#include <cstdint>
#include <vector>

#include "bilopt/rng.hpp"
#include "bilopt/search_space.hpp"

namespace bilopt {

// Ground-truth accuracy model standing in for a trained weight-sharing
// supernetwork.  Accuracy of a discrete architecture is
//
//   base + sum_s e[d_s] + sum_s sum_{b <= d_s} f[b, c_b]
//        + epsilon * (pairwise interaction terms among active decisions),
//
// in percent.  Depth effects e live in the beta layout, per-block config
// effects f in the alpha layout.  Interaction weights are frozen functions
// of the seed alone, so the model is exactly linear in epsilon and epsilon=0
// makes accuracy additively separable over decisions.  Observation noise of
// sample_accuracy is Gaussian with constant noise_std.
struct SyntheticSupernet {
  double base = 0.0;
  std::vector<double> depth_effects;   // beta layout, percent
  std::vector<double> config_effects;  // alpha layout, percent
  double epsilon = 0.0;
  double noise_std = 0.0;
  std::uint64_t seed = 0;

  // Upper-triangular pairwise weights over zeta indices, derived from seed;
  // empty until ensure_interactions() runs.  Entry (i < j) sits at
  // i*(2N-i-1)/2 + (j-i-1).
  std::vector<double> interactions;

  void ensure_interactions(const SearchSpaceSpec& spec);
};

// Parameters for drawing a random supernet model.  Effect magnitudes default
// to realistic validation-accuracy deltas of a few tenths of a percent.
struct OracleGenParams {
  double base = 70.0;
  double depth_effect_scale = 0.5;
  double config_effect_scale = 0.2;
  // Adds se_stage_bias * (s+1)/S to effects of configs with SE enabled, to
  // plant a stage trend for analysis benchmarks.  Off by default.
  double se_stage_bias = 0.0;
  double epsilon = 0.0;
  double noise_std = 0.0;
};

// Draws depth and config effects uniformly from zero-mean ranges scaled by
// the params, and freezes interaction weights from the seed.  Streams:
// depth effects from fork(1) in beta-layout order, config effects from
// fork(2) in alpha-layout order, interactions from fork(3) row-major over
// the upper triangle.
SyntheticSupernet make_supernet(const SearchSpaceSpec& spec,
                                const OracleGenParams& params,
                                std::uint64_t seed);

// Interaction weight table derived from the seed: u_ij * base / N with
// u_ij uniform on [-1, 1], frozen independently of epsilon.
std::vector<double> make_interaction_weights(int zeta_size, double base,
                                             std::uint64_t seed);

// Noise-free accuracy of a discrete architecture.  Configs of blocks above
// the chosen depth never contribute.
double true_accuracy(const SearchSpaceSpec& spec, const SyntheticSupernet& m,
                     const Architecture& arch);
double true_accuracy(const SearchSpaceSpec& spec, const SyntheticSupernet& m,
                     const ArchPoint& point);

// One noisy measurement: true accuracy plus Gaussian observation noise.
double sample_accuracy(const SearchSpaceSpec& spec, const SyntheticSupernet& m,
                       const Architecture& arch, Rng& rng);

// Per-block latency table plus a fixed network overhead, in milliseconds.
// Latencies live in the alpha layout and are strictly positive.
struct LatencyModel {
  std::vector<double> block_latency;  // alpha layout, ms
  double fixed_overhead = 0.0;        // ms
};

struct LatencyGenParams {
  double lo_ms = 0.5;
  double hi_ms = 6.0;
  double overhead_ms = 2.0;
};

// Draws per-block latencies log-uniformly from [lo_ms, hi_ms] such that
// within every (stage, block) they are monotone nondecreasing in expansion
// ratio and kernel size.
LatencyModel gen_latency(const SearchSpaceSpec& spec,
                         const LatencyGenParams& params, std::uint64_t seed);

// Shape checks against the spec; throw DimensionError on mismatch.
void check_shape(const SearchSpaceSpec& spec, const SyntheticSupernet& m);
void check_shape(const SearchSpaceSpec& spec, const LatencyModel& m);

}  // namespace bilopt

#endif  // BILOPT_SYNTHETIC_ORACLE_HPP_
