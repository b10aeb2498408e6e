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

#include "bilopt/synthetic_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bilopt {

namespace {

inline std::size_t pair_index(int n, int i, int j) {
  // Row-major upper triangle, i < j.
  return static_cast<std::size_t>(i) * (2 * n - i - 1) / 2 + (j - i - 1);
}

// Zeta indices active in a discrete architecture: per stage the chosen depth
// entry and the config entries of blocks up to that depth.
std::vector<int> active_indices(const SearchSpaceSpec& spec,
                                const Architecture& arch) {
  std::vector<int> active;
  for (int s = 0; s < spec.num_stages(); ++s) {
    const int pos = spec.choice_pos(s, arch.depth[s]);
    if (pos < 0) {
      throw InvalidInputError("depth " + std::to_string(arch.depth[s]) +
                              " not allowed in stage " + std::to_string(s));
    }
    active.push_back(spec.alpha_size() + spec.beta_index(s, pos));
    for (int b = 0; b < arch.depth[s]; ++b) {
      active.push_back(spec.alpha_index(s, b, arch.config[s][b]));
    }
  }
  return active;
}

}  // namespace

std::vector<double> make_interaction_weights(int zeta_size, double base,
                                             std::uint64_t seed) {
  const int n = zeta_size;
  std::vector<double> w(static_cast<std::size_t>(n) * (n - 1) / 2);
  Rng rng = Rng(seed).fork(3);
  const double scale = base / static_cast<double>(n);
  for (std::size_t p = 0; p < w.size(); ++p) {
    w[p] = rng.uniform(-1.0, 1.0) * scale;
  }
  return w;
}

void SyntheticSupernet::ensure_interactions(const SearchSpaceSpec& spec) {
  if (interactions.empty() && spec.zeta_size() > 1) {
    interactions = make_interaction_weights(spec.zeta_size(), base, seed);
  }
}

SyntheticSupernet make_supernet(const SearchSpaceSpec& spec,
                                const OracleGenParams& params,
                                std::uint64_t seed) {
  SyntheticSupernet m;
  m.base = params.base;
  m.epsilon = params.epsilon;
  m.noise_std = params.noise_std;
  m.seed = seed;
  m.depth_effects.resize(spec.beta_size());
  m.config_effects.resize(spec.alpha_size());

  Rng depth_rng = Rng(seed).fork(1);
  for (int i = 0; i < spec.beta_size(); ++i) {
    m.depth_effects[i] = depth_rng.uniform(-1.0, 1.0) *
                         params.depth_effect_scale;
  }
  Rng config_rng = Rng(seed).fork(2);
  const int S = spec.num_stages();
  for (int s = 0; s < S; ++s) {
    for (int b = 0; b < spec.max_depth(); ++b) {
      for (int c = 0; c < spec.num_configs(); ++c) {
        double f = config_rng.uniform(-1.0, 1.0) * params.config_effect_scale;
        if (spec.configs()[c].se) {
          f += params.se_stage_bias * static_cast<double>(s + 1) / S;
        }
        m.config_effects[spec.alpha_index(s, b, c)] = f;
      }
    }
  }
  if (m.epsilon != 0.0) {
    m.ensure_interactions(spec);
  }
  return m;
}

void check_shape(const SearchSpaceSpec& spec, const SyntheticSupernet& m) {
  if (static_cast<int>(m.depth_effects.size()) != spec.beta_size() ||
      static_cast<int>(m.config_effects.size()) != spec.alpha_size()) {
    throw DimensionError("supernet tables do not match spec shape");
  }
}

double true_accuracy(const SearchSpaceSpec& spec, const SyntheticSupernet& m,
                     const Architecture& arch) {
  check_shape(spec, m);
  double acc = m.base;
  for (int s = 0; s < spec.num_stages(); ++s) {
    const int pos = spec.choice_pos(s, arch.depth[s]);
    if (pos < 0) {
      throw InvalidInputError("depth " + std::to_string(arch.depth[s]) +
                              " not allowed in stage " + std::to_string(s));
    }
    acc += m.depth_effects[spec.beta_index(s, pos)];
    for (int b = 0; b < arch.depth[s]; ++b) {
      acc += m.config_effects[spec.alpha_index(s, b, arch.config[s][b])];
    }
  }
  if (m.epsilon != 0.0) {
    if (m.interactions.empty()) {
      throw InvalidInputError(
          "interaction weights missing; call ensure_interactions");
    }
    const std::vector<int> active = active_indices(spec, arch);
    double inter = 0.0;
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        const int i = std::min(active[a], active[b]);
        const int j = std::max(active[a], active[b]);
        inter += m.interactions[pair_index(spec.zeta_size(), i, j)];
      }
    }
    acc += m.epsilon * inter;
  }
  return acc;
}

double true_accuracy(const SearchSpaceSpec& spec, const SyntheticSupernet& m,
                     const ArchPoint& point) {
  return true_accuracy(spec, m, from_point(spec, point));
}

double sample_accuracy(const SearchSpaceSpec& spec, const SyntheticSupernet& m,
                       const Architecture& arch, Rng& rng) {
  return true_accuracy(spec, m, arch) + m.noise_std * rng.gaussian();
}

LatencyModel gen_latency(const SearchSpaceSpec& spec,
                         const LatencyGenParams& params, std::uint64_t seed) {
  if (params.lo_ms <= 0.0 || params.hi_ms < params.lo_ms) {
    throw InvalidInputError("latency range must satisfy 0 < lo <= hi");
  }
  if (params.overhead_ms < 0.0) {
    throw InvalidInputError("latency overhead must be nonnegative");
  }
  LatencyModel model;
  model.fixed_overhead = params.overhead_ms;
  model.block_latency.resize(spec.alpha_size());

  // Assignment order: configs sorted by (er, k, se).  Giving ascending
  // latency draws to this order makes latency monotone nondecreasing in
  // expansion ratio and kernel size within every (stage, block).
  std::vector<int> order(spec.num_configs());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const BlockConfig& ca = spec.configs()[a];
    const BlockConfig& cb = spec.configs()[b];
    return std::tie(ca.er, ca.k, ca.se, a) < std::tie(cb.er, cb.k, cb.se, b);
  });

  Rng rng(seed);
  const double log_lo = std::log(params.lo_ms);
  const double log_hi = std::log(params.hi_ms);
  std::vector<double> draws(spec.num_configs());
  for (int s = 0; s < spec.num_stages(); ++s) {
    for (int b = 0; b < spec.max_depth(); ++b) {
      for (double& d : draws) {
        d = std::exp(rng.uniform(log_lo, log_hi));
      }
      std::sort(draws.begin(), draws.end());
      for (int i = 0; i < spec.num_configs(); ++i) {
        model.block_latency[spec.alpha_index(s, b, order[i])] = draws[i];
      }
    }
  }
  return model;
}

void check_shape(const SearchSpaceSpec& spec, const LatencyModel& m) {
  if (static_cast<int>(m.block_latency.size()) != spec.alpha_size()) {
    throw DimensionError("latency table does not match spec shape");
  }
}

}  // namespace bilopt
