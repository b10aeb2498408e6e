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

#include "bilopt/predictors.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "bilopt/analysis.hpp"

namespace bilopt {

std::string to_string(FeatureFamily family) {
  switch (family) {
    case FeatureFamily::kBilinear:
      return "bilinear";
    case FeatureFamily::kFullQuadratic:
      return "full_quadratic";
  }
  return "bilinear";
}

FeatureFamily feature_family_from_string(const std::string& name) {
  if (name == "bilinear") return FeatureFamily::kBilinear;
  if (name == "full_quadratic") return FeatureFamily::kFullQuadratic;
  throw InvalidInputError("unknown feature family: " + name);
}

FeatureMap feature_index(const SearchSpaceSpec& spec, FeatureFamily family) {
  FeatureMap map;
  map.family = family;
  const int A = spec.alpha_size();
  // Config x depth pairs the masked bilinear form can use: same stage,
  // depth at least the block number.
  for (int s = 0; s < spec.num_stages(); ++s) {
    for (int b = 0; b < spec.max_depth(); ++b) {
      for (int c = 0; c < spec.num_configs(); ++c) {
        for (int pos = 0; pos < spec.beta_group_size(s); ++pos) {
          if (spec.depth_choices(s)[pos] >= b + 1) {
            map.pairs.emplace_back(spec.alpha_index(s, b, c),
                                   A + spec.beta_index(s, pos));
          }
        }
      }
    }
  }
  if (family == FeatureFamily::kFullQuadratic) {
    // Cross-group pairs only; two entries of one simplex group are never
    // both active, so within-group products vanish on every data point.
    const int C = spec.num_configs();
    for (int i = 0; i < A; ++i) {
      for (int j = i + 1; j < A; ++j) {
        if (i / C != j / C) map.pairs.emplace_back(i, j);
      }
    }
    std::vector<int> stage_of(spec.beta_size());
    for (int s = 0; s < spec.num_stages(); ++s) {
      for (int pos = 0; pos < spec.beta_group_size(s); ++pos) {
        stage_of[spec.beta_index(s, pos)] = s;
      }
    }
    for (int i = 0; i < spec.beta_size(); ++i) {
      for (int j = i + 1; j < spec.beta_size(); ++j) {
        if (stage_of[i] != stage_of[j]) map.pairs.emplace_back(A + i, A + j);
      }
    }
  }
  return map;
}

std::vector<double> featurize(const SearchSpaceSpec& spec,
                              const FeatureMap& map, const ArchPoint& point) {
  if (static_cast<int>(point.alpha.size()) != spec.alpha_size() ||
      static_cast<int>(point.beta.size()) != spec.beta_size()) {
    throw DimensionError("point shape does not match spec");
  }
  const int A = spec.alpha_size();
  std::vector<double> row(map.num_features(spec));
  std::copy(point.alpha.begin(), point.alpha.end(), row.begin());
  std::copy(point.beta.begin(), point.beta.end(), row.begin() + A);
  for (std::size_t t = 0; t < map.pairs.size(); ++t) {
    row[spec.zeta_size() + t] = row[map.pairs[t].first] *
                                row[map.pairs[t].second];
  }
  return row;
}

double predict(const SearchSpaceSpec& spec, const QuadraticPredictor& p,
               const ArchPoint& point) {
  if (static_cast<int>(p.linear.size()) != spec.zeta_size()) {
    throw DimensionError("predictor shape does not match spec");
  }
  if (static_cast<int>(point.alpha.size()) != spec.alpha_size() ||
      static_cast<int>(point.beta.size()) != spec.beta_size()) {
    throw DimensionError("point shape does not match spec");
  }
  const int A = spec.alpha_size();
  auto zeta = [&](int i) {
    return i < A ? point.alpha[i] : point.beta[i - A];
  };
  double value = p.intercept;
  for (int i = 0; i < spec.zeta_size(); ++i) value += p.linear[i] * zeta(i);
  for (const QuadEntry& q : p.quad) value += q.v * zeta(q.i) * zeta(q.j);
  return value;
}

double predict(const SearchSpaceSpec& spec, const QuadraticPredictor& p,
               const Architecture& arch) {
  return predict(spec, p, to_point(spec, arch));
}

RegressionDataset collect_dataset(const SearchSpaceSpec& spec,
                                  const SyntheticSupernet& m, int n,
                                  int n_test, std::uint64_t seed,
                                  bool noisy_targets) {
  if (n < 2 || n_test < 0) {
    throw InvalidInputError("dataset needs n >= 2 and n_test >= 0");
  }
  Rng rng(seed);
  RegressionDataset data;
  data.points.reserve(n + n_test);
  data.targets.reserve(n + n_test);
  for (int i = 0; i < n + n_test; ++i) {
    Architecture arch = sample_uniform_arch(spec, rng);
    data.targets.push_back(noisy_targets ? sample_accuracy(spec, m, arch, rng)
                                         : true_accuracy(spec, m, arch));
    data.points.push_back(std::move(arch));
  }
  const int n_train = static_cast<int>(std::floor(0.8 * n));
  for (int i = 0; i < n_train; ++i) data.split.train.push_back(i);
  for (int i = n_train; i < n; ++i) data.split.val.push_back(i);
  for (int i = n; i < n + n_test; ++i) data.split.test.push_back(i);
  return data;
}

QuadraticPredictor fit_closed_form(const SearchSpaceSpec& spec,
                                   FeatureFamily family,
                                   const RegressionDataset& data, int k) {
  const std::vector<int>& train = data.split.train;
  const int n = static_cast<int>(train.size());
  if (n < 1) {
    throw InvalidInputError("empty training split");
  }
  if (data.points.size() != data.targets.size()) {
    throw DimensionError("dataset points and targets differ in length");
  }
  const FeatureMap map = feature_index(spec, family);
  const int p = map.num_features(spec);

  Eigen::MatrixXd X(n, p);
  Eigen::VectorXd y(n);
  for (int r = 0; r < n; ++r) {
    const std::vector<double> row =
        featurize(spec, map, to_point(spec, data.points[train[r]]));
    for (int c = 0; c < p; ++c) X(r, c) = row[c];
    y(r) = data.targets[train[r]];
  }
  const Eigen::RowVectorXd x_mean = X.colwise().mean();
  const double y_mean = y.mean();
  const Eigen::MatrixXd Xc = X.rowwise() - x_mean;
  const Eigen::VectorXd yc = y.array() - y_mean;

  const int avail = std::min(n, p);
  if (k < 1 || k > avail) {
    throw InvalidInputError("k = " + std::to_string(k) +
                            " exceeds the " + std::to_string(avail) +
                            " available singular values");
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(Xc,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double threshold = 1e-12 * sv(0);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
  for (int i = 0; i < k; ++i) {
    if (sv(i) > threshold && sv(i) > 0.0) {
      w += svd.matrixV().col(i) * (svd.matrixU().col(i).dot(yc) / sv(i));
    }
  }

  QuadraticPredictor predictor;
  predictor.family = family;
  predictor.k = k;
  predictor.intercept = y_mean - x_mean.dot(w);
  predictor.linear.assign(w.data(), w.data() + spec.zeta_size());
  predictor.quad.reserve(map.pairs.size());
  for (std::size_t t = 0; t < map.pairs.size(); ++t) {
    predictor.quad.push_back({map.pairs[t].first, map.pairs[t].second,
                              w(spec.zeta_size() + static_cast<int>(t))});
  }
  return predictor;
}

double mse_on(const SearchSpaceSpec& spec, const QuadraticPredictor& p,
              const RegressionDataset& data, const std::vector<int>& subset) {
  if (subset.empty()) {
    throw InvalidInputError("mse over an empty subset is undefined");
  }
  double sum = 0.0;
  for (int idx : subset) {
    const double d = predict(spec, p, data.points[idx]) - data.targets[idx];
    sum += d * d;
  }
  return sum / subset.size();
}

ComponentSelection select_components(const SearchSpaceSpec& spec,
                                     FeatureFamily family,
                                     const RegressionDataset& data,
                                     const std::vector<int>& k_grid) {
  if (k_grid.empty()) {
    throw InvalidInputError("component grid must be non-empty");
  }
  if (data.split.val.size() < 2) {
    throw InvalidInputError("validation split too small for rank selection");
  }
  std::vector<int> grid = k_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  ComponentSelection selection;
  double best_tau = 0.0;
  bool first = true;
  for (int k : grid) {
    const QuadraticPredictor p = fit_closed_form(spec, family, data, k);
    std::vector<double> preds, targets;
    preds.reserve(data.split.val.size());
    targets.reserve(data.split.val.size());
    for (int idx : data.split.val) {
      preds.push_back(predict(spec, p, data.points[idx]));
      targets.push_back(data.targets[idx]);
    }
    const double tau = kendall_tau(preds, targets);
    selection.scores.emplace_back(k, tau);
    // Ascending grid plus strict improvement: ties keep the smaller k.
    if (first || tau > best_tau) {
      first = false;
      best_tau = tau;
      selection.best_k = k;
    }
  }
  return selection;
}

}  // namespace bilopt
