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

#include "bilopt/estimator.hpp"

#include <cmath>
#include <optional>

namespace bilopt {

namespace {

struct DepthPin {
  int stage;
  int depth;
};

struct ConfigPin {
  int stage;
  int block;
  int config;
};

// Uniform architecture draw with pinned groups overridden afterwards.  The
// pinned groups still consume their draw, so the stream layout matches
// sample_uniform exactly.
Architecture sample_pinned(const SearchSpaceSpec& spec, Rng& rng,
                           const std::optional<DepthPin>& depth_pin,
                           const std::optional<ConfigPin>& config_pin) {
  Architecture arch = sample_uniform_arch(spec, rng);
  if (depth_pin) {
    arch.depth[depth_pin->stage] = depth_pin->depth;
  }
  if (config_pin) {
    arch.config[config_pin->stage][config_pin->block] = config_pin->config;
  }
  return arch;
}

double probe_mean(const SearchSpaceSpec& spec, const SyntheticSupernet& m,
                  const std::optional<DepthPin>& depth_pin,
                  const std::optional<ConfigPin>& config_pin, int n_samples,
                  Rng& rng) {
  if (n_samples < 1) {
    throw InvalidInputError("probe needs at least one sample");
  }
  double sum = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    sum += sample_accuracy(spec, m,
                           sample_pinned(spec, rng, depth_pin, config_pin),
                           rng);
  }
  return sum / n_samples;
}

void check_depth_choice(const SearchSpaceSpec& spec, int s, int d) {
  if (s < 0 || s >= spec.num_stages() || spec.choice_pos(s, d) < 0) {
    throw InvalidInputError("no depth choice " + std::to_string(d) +
                            " in stage " + std::to_string(s));
  }
}

}  // namespace

double estimate_base(const SearchSpaceSpec& spec, const SyntheticSupernet& m,
                     int n_samples, Rng& rng) {
  return probe_mean(spec, m, std::nullopt, std::nullopt, n_samples, rng);
}

double estimate_depth_delta(const SearchSpaceSpec& spec,
                            const SyntheticSupernet& m, int s, int d,
                            double base_estimate, int n_samples, Rng& rng) {
  check_depth_choice(spec, s, d);
  return probe_mean(spec, m, DepthPin{s, d}, std::nullopt, n_samples, rng) -
         base_estimate;
}

double estimate_config_delta(const SearchSpaceSpec& spec,
                             const SyntheticSupernet& m, int s, int b, int c,
                             double base_estimate, int n_samples, Rng& rng) {
  if (s < 0 || s >= spec.num_stages() || b < 0 || b >= spec.max_depth() ||
      c < 0 || c >= spec.num_configs()) {
    throw InvalidInputError("config probe indices out of range");
  }
  const std::optional<int> pin = spec.pin_depth_for_block(s, b);
  if (!pin) {
    throw InvalidInputError("block " + std::to_string(b) + " of stage " +
                            std::to_string(s) + " can never be active");
  }
  return probe_mean(spec, m, DepthPin{s, *pin}, ConfigPin{s, b, c}, n_samples,
                    rng) -
         base_estimate;
}

BilinearEstimator build(const SearchSpaceSpec& spec,
                        const SyntheticSupernet& m, const BuildParams& params,
                        std::uint64_t seed) {
  check_shape(spec, m);
  if (params.n_per_probe < 1 || params.n_repeats < 1) {
    throw InvalidInputError("probe sample counts must be positive");
  }
  const int n = params.n_per_probe * params.n_repeats;
  const Rng master(seed);

  // Common random numbers: every probe conditions the same n shared uniform
  // assignments, so background terms cancel exactly out of the delta
  // differences.  On a separable oracle the built estimator reproduces the
  // truth at any probe budget; sampling error enters only through
  // interactions and observation noise.  The shared draws come from stream
  // tag 0; each probe owns a noise stream at tag 1 + probe index (0 base,
  // depth probes in beta layout, config probes in alpha layout), so results
  // do not depend on evaluation order.
  Rng draw_rng = master.fork(0);
  std::vector<Architecture> draws;
  draws.reserve(n);
  for (int i = 0; i < n; ++i) {
    draws.push_back(sample_uniform_arch(spec, draw_rng));
  }

  const bool noisy = m.noise_std > 0.0;
  auto probe = [&](int probe_idx, const std::optional<DepthPin>& depth_pin,
                   const std::optional<ConfigPin>& config_pin) {
    Rng noise_rng = master.fork(1 + static_cast<std::uint64_t>(probe_idx));
    double sum = 0.0;
    for (const Architecture& drawn : draws) {
      Architecture arch = drawn;
      if (depth_pin) arch.depth[depth_pin->stage] = depth_pin->depth;
      if (config_pin) {
        arch.config[config_pin->stage][config_pin->block] = config_pin->config;
      }
      sum += noisy ? sample_accuracy(spec, m, arch, noise_rng)
                   : true_accuracy(spec, m, arch);
    }
    return sum / n;
  };

  BilinearEstimator est;
  est.meta = {params.n_per_probe, params.n_repeats, seed};
  est.depth_deltas.assign(spec.beta_size(), 0.0);
  est.config_deltas.assign(spec.alpha_size(), 0.0);

  est.base = probe(0, std::nullopt, std::nullopt);

  std::vector<double> depth_means(spec.beta_size(), 0.0);
  for (int s = 0; s < spec.num_stages(); ++s) {
    for (int pos = 0; pos < spec.beta_group_size(s); ++pos) {
      const int j = spec.beta_index(s, pos);
      depth_means[j] =
          probe(1 + j, DepthPin{s, spec.depth_choices(s)[pos]}, std::nullopt);
      est.depth_deltas[j] = depth_means[j] - est.base;
    }
  }

  for (int s = 0; s < spec.num_stages(); ++s) {
    for (int b = 0; b < spec.max_depth(); ++b) {
      const std::optional<int> pin = spec.pin_depth_for_block(s, b);
      if (!pin) continue;  // block never active, delta stays 0
      const int ref = spec.beta_index(s, spec.choice_pos(s, *pin));
      for (int c = 0; c < spec.num_configs(); ++c) {
        const int i = spec.alpha_index(s, b, c);
        const double mean = probe(1 + spec.beta_size() + i, DepthPin{s, *pin},
                                  ConfigPin{s, b, c});
        est.config_deltas[i] = mean - depth_means[ref];
      }
    }
  }
  return est;
}

namespace {

// Visits every raw assignment: each stage takes every allowed depth and each
// block (masked or not) every config.  Conditional expectations over this
// uniform raw measure match the pinned-group samplers exactly.
void visit_raw(const SearchSpaceSpec& spec, Architecture* arch, int s, int b,
               const std::function<void(const Architecture&)>& fn) {
  if (s == spec.num_stages()) {
    fn(*arch);
    return;
  }
  if (b == spec.max_depth()) {
    for (int d : spec.depth_choices(s)) {
      arch->depth[s] = d;
      visit_raw(spec, arch, s + 1, 0, fn);
    }
    return;
  }
  for (int c = 0; c < spec.num_configs(); ++c) {
    arch->config[s][b] = c;
    visit_raw(spec, arch, s, b + 1, fn);
  }
}

}  // namespace

BilinearEstimator build_exact(const SearchSpaceSpec& spec,
                              const SyntheticSupernet& m, double cap) {
  check_shape(spec, m);
  double raw_count = 1.0;
  for (int s = 0; s < spec.num_stages(); ++s) {
    raw_count *= static_cast<double>(spec.beta_group_size(s)) *
                 std::pow(static_cast<double>(spec.num_configs()),
                          spec.max_depth());
  }
  if (raw_count > cap) {
    throw CapExceededError("raw assignment count " +
                               std::to_string(raw_count) + " exceeds cap " +
                               std::to_string(cap),
                           raw_count);
  }

  double base_sum = 0.0;
  std::uint64_t base_cnt = 0;
  std::vector<double> depth_sum(spec.beta_size(), 0.0);
  std::vector<std::uint64_t> depth_cnt(spec.beta_size(), 0);
  std::vector<double> config_sum(spec.alpha_size(), 0.0);
  std::vector<std::uint64_t> config_cnt(spec.alpha_size(), 0);

  Architecture arch;
  arch.depth.assign(spec.num_stages(), 0);
  arch.config.assign(spec.num_stages(), std::vector<int>(spec.max_depth(), 0));
  visit_raw(spec, &arch, 0, 0, [&](const Architecture& a) {
    const double acc = true_accuracy(spec, m, a);
    base_sum += acc;
    ++base_cnt;
    for (int s = 0; s < spec.num_stages(); ++s) {
      const int j = spec.beta_index(s, spec.choice_pos(s, a.depth[s]));
      depth_sum[j] += acc;
      ++depth_cnt[j];
      for (int b = 0; b < spec.max_depth(); ++b) {
        const std::optional<int> pin = spec.pin_depth_for_block(s, b);
        if (pin && a.depth[s] == *pin) {
          const int i = spec.alpha_index(s, b, a.config[s][b]);
          config_sum[i] += acc;
          ++config_cnt[i];
        }
      }
    }
  });

  BilinearEstimator est;
  est.meta = {0, 1, m.seed};
  est.base = base_sum / static_cast<double>(base_cnt);
  est.depth_deltas.assign(spec.beta_size(), 0.0);
  est.config_deltas.assign(spec.alpha_size(), 0.0);
  std::vector<double> depth_means(spec.beta_size(), 0.0);
  for (int j = 0; j < spec.beta_size(); ++j) {
    depth_means[j] = depth_sum[j] / static_cast<double>(depth_cnt[j]);
    est.depth_deltas[j] = depth_means[j] - est.base;
  }
  for (int s = 0; s < spec.num_stages(); ++s) {
    for (int b = 0; b < spec.max_depth(); ++b) {
      const std::optional<int> pin = spec.pin_depth_for_block(s, b);
      if (!pin) continue;
      const int ref = spec.beta_index(s, spec.choice_pos(s, *pin));
      for (int c = 0; c < spec.num_configs(); ++c) {
        const int i = spec.alpha_index(s, b, c);
        est.config_deltas[i] =
            config_sum[i] / static_cast<double>(config_cnt[i]) -
            depth_means[ref];
      }
    }
  }
  return est;
}

void check_shape(const SearchSpaceSpec& spec, const BilinearEstimator& est) {
  if (static_cast<int>(est.depth_deltas.size()) != spec.beta_size() ||
      static_cast<int>(est.config_deltas.size()) != spec.alpha_size()) {
    throw DimensionError("estimator tables do not match spec shape");
  }
}

std::vector<double> beta_tails(const SearchSpaceSpec& spec,
                               const std::vector<double>& beta, int s) {
  std::vector<double> tails(spec.max_depth(), 0.0);
  const auto& choices = spec.depth_choices(s);
  for (int b = 0; b < spec.max_depth(); ++b) {
    double t = 0.0;
    for (int pos = 0; pos < static_cast<int>(choices.size()); ++pos) {
      if (choices[pos] >= b + 1) t += beta[spec.beta_index(s, pos)];
    }
    tails[b] = t;
  }
  return tails;
}

namespace {

// Shared masked bilinear form: sum over stages of the per-depth linear part
// plus config entries weighted by the beta tail of their block.
double masked_form(const SearchSpaceSpec& spec,
                   const std::vector<double>& depth_table,
                   const std::vector<double>& config_table,
                   const ArchPoint& point) {
  double value = 0.0;
  for (int s = 0; s < spec.num_stages(); ++s) {
    for (int pos = 0; pos < spec.beta_group_size(s); ++pos) {
      const int j = spec.beta_index(s, pos);
      value += point.beta[j] * depth_table[j];
    }
    const std::vector<double> tails = beta_tails(spec, point.beta, s);
    for (int b = 0; b < spec.max_depth(); ++b) {
      if (tails[b] == 0.0) continue;
      for (int c = 0; c < spec.num_configs(); ++c) {
        const int i = spec.alpha_index(s, b, c);
        value += point.alpha[i] * config_table[i] * tails[b];
      }
    }
  }
  return value;
}

double masked_form(const SearchSpaceSpec& spec,
                   const std::vector<double>& depth_table,
                   const std::vector<double>& config_table,
                   const Architecture& arch) {
  double value = 0.0;
  for (int s = 0; s < spec.num_stages(); ++s) {
    const int pos = spec.choice_pos(s, arch.depth[s]);
    if (pos < 0) {
      throw InvalidInputError("depth " + std::to_string(arch.depth[s]) +
                              " not allowed in stage " + std::to_string(s));
    }
    value += depth_table[spec.beta_index(s, pos)];
    for (int b = 0; b < arch.depth[s]; ++b) {
      value += config_table[spec.alpha_index(s, b, arch.config[s][b])];
    }
  }
  return value;
}

const std::vector<double>& zero_table(const SearchSpaceSpec& spec,
                                      bool alpha_layout) {
  static thread_local std::vector<double> zeros;
  const std::size_t need = static_cast<std::size_t>(
      alpha_layout ? spec.alpha_size() : spec.beta_size());
  if (zeros.size() < need) zeros.assign(need, 0.0);
  return zeros;
}

}  // namespace

double eval_acc(const SearchSpaceSpec& spec, const BilinearEstimator& est,
                const ArchPoint& point) {
  check_shape(spec, est);
  if (static_cast<int>(point.alpha.size()) != spec.alpha_size() ||
      static_cast<int>(point.beta.size()) != spec.beta_size()) {
    throw DimensionError("point shape does not match spec");
  }
  return est.base +
         masked_form(spec, est.depth_deltas, est.config_deltas, point);
}

double eval_acc(const SearchSpaceSpec& spec, const BilinearEstimator& est,
                const Architecture& arch) {
  check_shape(spec, est);
  return est.base +
         masked_form(spec, est.depth_deltas, est.config_deltas, arch);
}

double eval_lat(const SearchSpaceSpec& spec, const LatencyModel& lat,
                const ArchPoint& point) {
  check_shape(spec, lat);
  if (static_cast<int>(point.alpha.size()) != spec.alpha_size() ||
      static_cast<int>(point.beta.size()) != spec.beta_size()) {
    throw DimensionError("point shape does not match spec");
  }
  return lat.fixed_overhead +
         masked_form(spec, zero_table(spec, false), lat.block_latency, point);
}

double eval_lat(const SearchSpaceSpec& spec, const LatencyModel& lat,
                const Architecture& arch) {
  check_shape(spec, lat);
  return lat.fixed_overhead +
         masked_form(spec, zero_table(spec, false), lat.block_latency, arch);
}

BilinearEstimator ablate(const BilinearEstimator& est, AblationMode mode) {
  BilinearEstimator out = est;
  switch (mode) {
    case AblationMode::kFull:
      break;
    case AblationMode::kDepthTermsOnly:
      out.config_deltas.assign(out.config_deltas.size(), 0.0);
      break;
    case AblationMode::kConfigTermsOnly:
      out.depth_deltas.assign(out.depth_deltas.size(), 0.0);
      break;
  }
  return out;
}

}  // namespace bilopt
