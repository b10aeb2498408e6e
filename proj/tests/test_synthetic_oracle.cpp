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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "bilopt/synthetic_oracle.hpp"

using namespace bilopt;

namespace {

SearchSpaceSpec tiny_spec(int num_stages = 1) {
  std::vector<std::vector<int>> choices(num_stages, std::vector<int>{1, 2});
  return SearchSpaceSpec(2, choices,
                         {{1, 2, 3, false}, {2, 6, 5, true}});
}

SyntheticSupernet zero_net(const SearchSpaceSpec& spec, double base = 70.0) {
  SyntheticSupernet m;
  m.base = base;
  m.depth_effects.assign(spec.beta_size(), 0.0);
  m.config_effects.assign(spec.alpha_size(), 0.0);
  return m;
}

}  // namespace

TEST_CASE("zero effects give base accuracy for every architecture") {
  const SearchSpaceSpec spec = tiny_spec(2);
  const SyntheticSupernet m = zero_net(spec);
  for_each_architecture(spec, 100.0, [&](const Architecture& arch) {
    CHECK(true_accuracy(spec, m, arch) == 70.0);
  });
}

TEST_CASE("additive sum on a hand-built model") {
  const SearchSpaceSpec spec = tiny_spec(1);
  SyntheticSupernet m = zero_net(spec);
  m.depth_effects[spec.beta_index(0, spec.choice_pos(0, 2))] = 0.5;
  m.config_effects[spec.alpha_index(0, 0, 0)] = 0.1;
  m.config_effects[spec.alpha_index(0, 1, 1)] = 0.2;

  const Architecture arch{{2}, {{0, 1}}};
  CHECK(true_accuracy(spec, m, arch) == doctest::Approx(70.8).epsilon(1e-12));
}

TEST_CASE("masked blocks never contribute") {
  const SearchSpaceSpec spec = tiny_spec(1);
  SyntheticSupernet m = zero_net(spec);
  m.config_effects[spec.alpha_index(0, 1, 1)] = 5.0;

  const Architecture shallow_a{{1}, {{0, 0}}};
  const Architecture shallow_b{{1}, {{0, 1}}};
  CHECK(true_accuracy(spec, m, shallow_a) ==
        true_accuracy(spec, m, shallow_b));
}

TEST_CASE("single-decision differences equal effect differences when eps=0") {
  const SearchSpaceSpec spec = tiny_spec(2);
  const SyntheticSupernet m = make_supernet(spec, {}, 91);
  REQUIRE(m.epsilon == 0.0);

  for_each_architecture(spec, 100.0, [&](const Architecture& arch) {
    for (int s = 0; s < spec.num_stages(); ++s) {
      for (int b = 0; b < arch.depth[s]; ++b) {
        for (int c = 0; c < spec.num_configs(); ++c) {
          Architecture other = arch;
          other.config[s][b] = c;
          const double diff =
              true_accuracy(spec, m, other) - true_accuracy(spec, m, arch);
          const double expected =
              m.config_effects[spec.alpha_index(s, b, c)] -
              m.config_effects[spec.alpha_index(s, b, arch.config[s][b])];
          CHECK(diff == doctest::Approx(expected).epsilon(1e-12));
        }
      }
    }
  });
}

TEST_CASE("interaction terms match re-derivation from the seed") {
  const SearchSpaceSpec spec = tiny_spec(2);
  OracleGenParams params;
  params.epsilon = 0.01;
  const SyntheticSupernet m = make_supernet(spec, params, 1234);

  const int n = spec.zeta_size();
  std::vector<double> weights;
  Rng rng = Rng(1234).fork(3);
  const double scale = m.base / n;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      weights.push_back(rng.uniform(-1.0, 1.0) * scale);
    }
  }
  REQUIRE(weights.size() == m.interactions.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    CHECK(weights[i] == m.interactions[i]);
  }

  // Full value check: separable part plus epsilon times the pairwise sum
  // over active zeta indices.
  auto pair_at = [&](int i, int j) {
    return weights[static_cast<std::size_t>(i) * (2 * n - i - 1) / 2 +
                   (j - i - 1)];
  };
  SyntheticSupernet separable = m;
  separable.epsilon = 0.0;
  for_each_architecture(spec, 100.0, [&](const Architecture& arch) {
    std::vector<int> active;
    for (int s = 0; s < spec.num_stages(); ++s) {
      for (int b = 0; b < arch.depth[s]; ++b) {
        active.push_back(spec.alpha_index(s, b, arch.config[s][b]));
      }
      active.push_back(spec.alpha_size() +
                       spec.beta_index(s, spec.choice_pos(s, arch.depth[s])));
    }
    std::sort(active.begin(), active.end());
    double pair_sum = 0.0;
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        pair_sum += pair_at(active[a], active[b]);
      }
    }
    const double expected =
        true_accuracy(spec, separable, arch) + m.epsilon * pair_sum;
    CHECK(true_accuracy(spec, m, arch) ==
          doctest::Approx(expected).epsilon(1e-12));
  });
}

TEST_CASE("accuracy is exactly linear in epsilon") {
  const SearchSpaceSpec spec = tiny_spec(1);
  OracleGenParams params;
  params.epsilon = 0.001;
  const SyntheticSupernet m1 = make_supernet(spec, params, 7);
  params.epsilon = 0.002;
  const SyntheticSupernet m2 = make_supernet(spec, params, 7);
  params.epsilon = 0.0;
  const SyntheticSupernet m0 = make_supernet(spec, params, 7);

  for_each_architecture(spec, 100.0, [&](const Architecture& arch) {
    const double d1 = true_accuracy(spec, m1, arch) -
                      true_accuracy(spec, m0, arch);
    const double d2 = true_accuracy(spec, m2, arch) -
                      true_accuracy(spec, m0, arch);
    CHECK(d2 == doctest::Approx(2.0 * d1).epsilon(1e-9));
  });
}

TEST_CASE("true_accuracy requires interactions when epsilon is nonzero") {
  const SearchSpaceSpec spec = tiny_spec(1);
  SyntheticSupernet m = zero_net(spec);
  m.epsilon = 0.5;
  m.seed = 3;
  const Architecture arch{{1}, {{0, 0}}};
  CHECK_THROWS_AS(true_accuracy(spec, m, arch), InvalidInputError);
  m.ensure_interactions(spec);
  CHECK_NOTHROW(true_accuracy(spec, m, arch));
}

TEST_CASE("sample_accuracy: exactness at sigma=0, CLT mean, seeded streams") {
  const SearchSpaceSpec spec = tiny_spec(1);
  SyntheticSupernet m = zero_net(spec);
  const Architecture arch{{2}, {{1, 0}}};

  Rng rng(5);
  CHECK(sample_accuracy(spec, m, arch, rng) == true_accuracy(spec, m, arch));

  m.noise_std = 0.5;
  Rng a(9), b(9);
  for (int i = 0; i < 5; ++i) {
    CHECK(sample_accuracy(spec, m, arch, a) ==
          sample_accuracy(spec, m, arch, b));
  }

  double sum = 0.0, sum_sq = 0.0;
  const int n = 10000;
  Rng noise_rng(17);
  for (int i = 0; i < n; ++i) {
    const double v = sample_accuracy(spec, m, arch, noise_rng);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean - true_accuracy(spec, m, arch)) <
        4.0 * m.noise_std / 100.0);
  CHECK(var > 0.8 * m.noise_std * m.noise_std);
  CHECK(var < 1.2 * m.noise_std * m.noise_std);
}

TEST_CASE("make_supernet scales effects and plants the SE stage trend") {
  const SearchSpaceSpec spec = tiny_spec(2);
  OracleGenParams params;
  params.depth_effect_scale = 0.5;
  params.config_effect_scale = 0.2;
  const SyntheticSupernet plain = make_supernet(spec, params, 21);
  CHECK(plain.depth_effects.size() == std::size_t(spec.beta_size()));
  CHECK(plain.config_effects.size() == std::size_t(spec.alpha_size()));
  for (double e : plain.depth_effects) CHECK(std::abs(e) <= 0.5);
  for (double f : plain.config_effects) CHECK(std::abs(f) <= 0.2);

  params.se_stage_bias = 1.0;
  const SyntheticSupernet biased = make_supernet(spec, params, 21);
  for (int s = 0; s < spec.num_stages(); ++s) {
    for (int b = 0; b < spec.max_depth(); ++b) {
      for (int c = 0; c < spec.num_configs(); ++c) {
        const int idx = spec.alpha_index(s, b, c);
        const double shift = biased.config_effects[idx] -
                             plain.config_effects[idx];
        const double expected =
            spec.configs()[c].se
                ? params.se_stage_bias * (s + 1) / spec.num_stages()
                : 0.0;
        CHECK(shift == doctest::Approx(expected).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("gen_latency: determinism, bounds, monotone in er and k") {
  const SearchSpaceSpec spec = SearchSpaceSpec::paper();
  LatencyGenParams params;
  const LatencyModel lat = gen_latency(spec, params, 33);
  const LatencyModel again = gen_latency(spec, params, 33);
  CHECK(lat.block_latency == again.block_latency);
  CHECK(lat.fixed_overhead == params.overhead_ms);

  for (double t : lat.block_latency) {
    CHECK(t >= params.lo_ms);
    CHECK(t <= params.hi_ms);
  }

  for (int s = 0; s < spec.num_stages(); ++s) {
    for (int b = 0; b < spec.max_depth(); ++b) {
      for (int c1 = 0; c1 < spec.num_configs(); ++c1) {
        for (int c2 = 0; c2 < spec.num_configs(); ++c2) {
          const BlockConfig& a = spec.configs()[c1];
          const BlockConfig& z = spec.configs()[c2];
          if (a.er <= z.er && a.k <= z.k && a.se == z.se) {
            CHECK(lat.block_latency[spec.alpha_index(s, b, c1)] <=
                  lat.block_latency[spec.alpha_index(s, b, c2)]);
          }
        }
      }
    }
  }
}

TEST_CASE("gen_latency degenerate range and validation") {
  const SearchSpaceSpec spec = tiny_spec(1);
  LatencyGenParams unit;
  unit.lo_ms = 1.0;
  unit.hi_ms = 1.0;
  unit.overhead_ms = 0.0;
  const LatencyModel lat = gen_latency(spec, unit, 2);
  for (double t : lat.block_latency) CHECK(t == 1.0);

  LatencyGenParams bad;
  bad.lo_ms = -1.0;
  CHECK_THROWS_AS(gen_latency(spec, bad, 2), InvalidInputError);
  bad.lo_ms = 3.0;
  bad.hi_ms = 2.0;
  CHECK_THROWS_AS(gen_latency(spec, bad, 2), InvalidInputError);
}

TEST_CASE("check_shape rejects mismatched tables") {
  const SearchSpaceSpec spec = tiny_spec(1);
  SyntheticSupernet m = zero_net(spec);
  m.depth_effects.pop_back();
  CHECK_THROWS_AS(check_shape(spec, m), DimensionError);

  LatencyModel lat;
  lat.block_latency.assign(spec.alpha_size() - 1, 1.0);
  CHECK_THROWS_AS(check_shape(spec, lat), DimensionError);
}
