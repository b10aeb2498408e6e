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

#include "bilopt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bilopt {

namespace {

void check_lists(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw DimensionError("rank correlation needs lists of equal length");
  }
  if (x.size() < 2) {
    throw UndefinedCorrelationError(
        "rank correlation undefined for fewer than two entries");
  }
}

// Mid-ranks (average rank over ties), 1-based.
std::vector<double> mid_ranks(const std::vector<double>& v) {
  const int n = static_cast<int>(v.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  int i = 0;
  while (i < n) {
    int j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * (i + j) + 1.0;
    for (int t = i; t <= j; ++t) ranks[order[t]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double kendall_tau(const std::vector<double>& x, const std::vector<double>& y) {
  check_lists(x, y);
  const int n = static_cast<int>(x.size());
  long long concordant = 0, discordant = 0;
  long long ties_x = 0, ties_y = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0.0 && dy == 0.0) {
        ++ties_x;
        ++ties_y;
      } else if (dx == 0.0) {
        ++ties_x;
      } else if (dy == 0.0) {
        ++ties_y;
      } else if ((dx > 0.0) == (dy > 0.0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const long long n0 = static_cast<long long>(n) * (n - 1) / 2;
  const double denom = std::sqrt(static_cast<double>(n0 - ties_x)) *
                       std::sqrt(static_cast<double>(n0 - ties_y));
  if (denom == 0.0) {
    throw UndefinedCorrelationError(
        "kendall tau undefined: a list is constant");
  }
  return static_cast<double>(concordant - discordant) / denom;
}

double spearman_rho(const std::vector<double>& x,
                    const std::vector<double>& y) {
  check_lists(x, y);
  const std::vector<double> rx = mid_ranks(x);
  const std::vector<double> ry = mid_ranks(y);
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
  if (sxx == 0.0 || syy == 0.0) {
    throw UndefinedCorrelationError(
        "spearman rho undefined: a list is constant");
  }
  return sxy / std::sqrt(sxx * syy);
}

double transitivity_lower_bound(double r1, double r2) {
  if (std::abs(r1) > 1.0 || std::abs(r2) > 1.0) {
    throw InvalidInputError("correlations must lie in [-1, 1]");
  }
  return r1 * r2 - std::sqrt((1.0 - r1 * r1) * (1.0 - r2 * r2));
}

RankReport rank_predictor(
    const SearchSpaceSpec& spec, const SyntheticSupernet& m,
    const std::function<double(const Architecture&)>& predict_fn, int n_test,
    std::uint64_t seed, bool noisy_targets) {
  if (n_test < 2) {
    throw InvalidInputError("rank_predictor needs at least two test points");
  }
  Rng rng(seed);
  std::vector<double> predictions(n_test), targets(n_test);
  double mse = 0.0;
  for (int i = 0; i < n_test; ++i) {
    const Architecture arch = sample_uniform_arch(spec, rng);
    predictions[i] = predict_fn(arch);
    targets[i] = noisy_targets ? sample_accuracy(spec, m, arch, rng)
                               : true_accuracy(spec, m, arch);
    mse += (predictions[i] - targets[i]) * (predictions[i] - targets[i]);
  }
  RankReport report;
  report.kendall_tau = kendall_tau(predictions, targets);
  report.spearman_rho = spearman_rho(predictions, targets);
  report.mse = mse / n_test;
  report.n = n_test;
  return report;
}

namespace {

// Mean config delta difference between two attribute subsets for one
// (stage, block), or nothing when either subset is empty.
std::optional<double> subset_difference(const SearchSpaceSpec& spec,
                                        const std::vector<double>& table,
                                        int s, int b,
                                        const std::vector<int>& in,
                                        const std::vector<int>& out) {
  if (in.empty() || out.empty()) return std::nullopt;
  double sum_in = 0.0, sum_out = 0.0;
  for (int c : in) sum_in += table[spec.alpha_index(s, b, c)];
  for (int c : out) sum_out += table[spec.alpha_index(s, b, c)];
  return sum_in / in.size() - sum_out / out.size();
}

struct AttributeSubsets {
  std::vector<int> se_on, se_off, k5, k3, er2, er3, er6;
};

AttributeSubsets attribute_subsets(const SearchSpaceSpec& spec) {
  AttributeSubsets subsets;
  for (int c = 0; c < spec.num_configs(); ++c) {
    const BlockConfig& cfg = spec.configs()[c];
    (cfg.se ? subsets.se_on : subsets.se_off).push_back(c);
    if (cfg.k == 5) subsets.k5.push_back(c);
    if (cfg.k == 3) subsets.k3.push_back(c);
    if (cfg.er == 2) subsets.er2.push_back(c);
    if (cfg.er == 3) subsets.er3.push_back(c);
    if (cfg.er == 6) subsets.er6.push_back(c);
  }
  return subsets;
}

AttributeAverages average_over(
    const SearchSpaceSpec& spec, const std::vector<double>& table,
    const AttributeSubsets& subsets,
    const std::vector<std::pair<int, int>>& cells) {
  // Averages the per-cell subset differences over the given (stage, block)
  // cells; a difference missing in one cell is missing in all of them.
  AttributeAverages out;
  auto reduce = [&](const std::vector<int>& in, const std::vector<int>& out_set)
      -> std::optional<double> {
    double sum = 0.0;
    for (const auto& [s, b] : cells) {
      const std::optional<double> d =
          subset_difference(spec, table, s, b, in, out_set);
      if (!d) return std::nullopt;
      sum += *d;
    }
    return sum / static_cast<double>(cells.size());
  };
  out.se_on_vs_off = reduce(subsets.se_on, subsets.se_off);
  out.kernel5_vs_3 = reduce(subsets.k5, subsets.k3);
  out.er3_vs_2 = reduce(subsets.er3, subsets.er2);
  out.er6_vs_3 = reduce(subsets.er6, subsets.er3);
  return out;
}

}  // namespace

InsightReport insights(const SearchSpaceSpec& spec,
                       const BilinearEstimator& est, const LatencyModel& lat) {
  check_shape(spec, est);
  check_shape(spec, lat);
  const AttributeSubsets subsets = attribute_subsets(spec);
  const bool any_average =
      (!subsets.se_on.empty() && !subsets.se_off.empty()) ||
      (!subsets.k5.empty() && !subsets.k3.empty()) ||
      (!subsets.er3.empty() && !subsets.er2.empty()) ||
      (!subsets.er6.empty() && !subsets.er3.empty());
  if (!any_average) {
    throw InvalidInputError(
        "config table attributes support none of the insight averages");
  }

  InsightReport report;
  report.depth_increments.resize(spec.num_stages());
  for (int s = 0; s < spec.num_stages(); ++s) {
    const auto& choices = spec.depth_choices(s);
    for (int pos = 1; pos < static_cast<int>(choices.size()); ++pos) {
      report.depth_increments[s].push_back(
          {choices[pos - 1], choices[pos],
           est.depth_deltas[spec.beta_index(s, pos)] -
               est.depth_deltas[spec.beta_index(s, pos - 1)]});
    }
  }

  for (int s = 0; s < spec.num_stages(); ++s) {
    std::vector<std::pair<int, int>> cells;
    for (int b = 0; b < spec.max_depth(); ++b) cells.emplace_back(s, b);
    report.per_stage.push_back(
        average_over(spec, est.config_deltas, subsets, cells));
  }
  for (int b = 0; b < spec.max_depth(); ++b) {
    std::vector<std::pair<int, int>> cells;
    for (int s = 0; s < spec.num_stages(); ++s) cells.emplace_back(s, b);
    report.per_block.push_back(
        average_over(spec, est.config_deltas, subsets, cells));
  }

  report.latency_per_stage.resize(spec.num_stages());
  for (int s = 0; s < spec.num_stages(); ++s) {
    double sum = 0.0;
    for (int b = 0; b < spec.max_depth(); ++b) {
      for (int c = 0; c < spec.num_configs(); ++c) {
        sum += lat.block_latency[spec.alpha_index(s, b, c)];
      }
    }
    report.latency_per_stage[s] =
        sum / (spec.max_depth() * spec.num_configs());
  }
  return report;
}

}  // namespace bilopt
