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

#ifndef BILOPT_ANALYSIS_HPP_
#define BILOPT_ANALYSIS_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "bilopt/estimator.hpp"
#include "bilopt/search_space.hpp"
#include "bilopt/synthetic_oracle.hpp"

namespace bilopt {

// Kendall rank correlation with tie correction (tau-b), by exhaustive pair
// counting.  Throws UndefinedCorrelationError when either list is constant
// or has fewer than two entries.
double kendall_tau(const std::vector<double>& x, const std::vector<double>& y);

// Spearman rank correlation: Pearson correlation of mid-ranks, which handles
// ties exactly.  Throws UndefinedCorrelationError for constant input.
double spearman_rho(const std::vector<double>& x, const std::vector<double>& y);

// Lower bound on Cor(P, S) given Cor(P, O) = r1 and Cor(O, S) = r2:
//   r1 * r2 - sqrt((1 - r1^2) * (1 - r2^2)).
// Symmetric in its arguments; arguments outside [-1, 1] are rejected.
double transitivity_lower_bound(double r1, double r2);

struct RankReport {
  double kendall_tau = 0.0;
  double spearman_rho = 0.0;
  double mse = 0.0;
  int n = 0;
};

// Ranks a predictor against the oracle on n_test uniform architectures.
// Targets are noise-free by default; with noisy_targets they are single
// noisy measurements.
RankReport rank_predictor(
    const SearchSpaceSpec& spec, const SyntheticSupernet& m,
    const std::function<double(const Architecture&)>& predict_fn, int n_test,
    std::uint64_t seed, bool noisy_targets = false);

// Interpretable summaries read off the estimator tables, following the
// attribute subsets of the block config table.
struct AttributeAverages {
  std::optional<double> se_on_vs_off;
  std::optional<double> kernel5_vs_3;
  std::optional<double> er3_vs_2;
  std::optional<double> er6_vs_3;
};

struct DepthIncrement {
  int from_depth = 0;
  int to_depth = 0;
  double value = 0.0;
};

struct InsightReport {
  // Per stage: delta differences between consecutive allowed depths.
  std::vector<std::vector<DepthIncrement>> depth_increments;
  std::vector<AttributeAverages> per_stage;  // averaged over blocks
  std::vector<AttributeAverages> per_block;  // averaged over stages
  std::vector<double> latency_per_stage;     // mean block latency, ms
};

// An average is absent when its config subset is empty; a table whose
// attributes support none of the averages is rejected.
InsightReport insights(const SearchSpaceSpec& spec,
                       const BilinearEstimator& est, const LatencyModel& lat);

}  // namespace bilopt

#endif  // BILOPT_ANALYSIS_HPP_
