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

#ifndef BILOPT_PREDICTORS_HPP_
#define BILOPT_PREDICTORS_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bilopt/search_space.hpp"
#include "bilopt/synthetic_oracle.hpp"

namespace bilopt {

enum class FeatureFamily {
  // Linear terms plus the cross terms the masked bilinear form can use:
  // config entry (s, b, c) times depth entry (s, d) with d >= b+1.
  kBilinear,
  // Additionally all config x config and depth x depth pairs across
  // different groups.  Pairs within one group are structurally zero on
  // one-hot data and are left out.
  kFullQuadratic,
};

std::string to_string(FeatureFamily family);
FeatureFamily feature_family_from_string(const std::string& name);

// Fixed feature order for a family: the zeta entries first, then the listed
// index pairs as products.
struct FeatureMap {
  FeatureFamily family;
  std::vector<std::pair<int, int>> pairs;  // global zeta index pairs, i < j

  int num_features(const SearchSpaceSpec& spec) const {
    return spec.zeta_size() + static_cast<int>(pairs.size());
  }
};

FeatureMap feature_index(const SearchSpaceSpec& spec, FeatureFamily family);

// Feature row of one point under the map.
std::vector<double> featurize(const SearchSpaceSpec& spec,
                              const FeatureMap& map, const ArchPoint& point);

struct QuadEntry {
  int i = 0;
  int j = 0;
  double v = 0.0;
};

// Quadratic accuracy model a' zeta + zeta' Q zeta + b with Q stored as a
// sparse list of upper-triangular entries.
struct QuadraticPredictor {
  FeatureFamily family = FeatureFamily::kBilinear;
  double intercept = 0.0;
  std::vector<double> linear;    // zeta layout
  std::vector<QuadEntry> quad;   // i < j, zeta indices
  int k = 0;                     // SVD components used by the fit
};

double predict(const SearchSpaceSpec& spec, const QuadraticPredictor& p,
               const ArchPoint& point);
double predict(const SearchSpaceSpec& spec, const QuadraticPredictor& p,
               const Architecture& arch);

// Architectures with (by default noisy) measured accuracies, plus index
// splits: the first n draws are split 80/20 into train/val and a further
// n_test draws are held out as test.
struct RegressionDataset {
  std::vector<Architecture> points;
  std::vector<double> targets;
  struct Split {
    std::vector<int> train;
    std::vector<int> val;
    std::vector<int> test;
  } split;
};

RegressionDataset collect_dataset(const SearchSpaceSpec& spec,
                                  const SyntheticSupernet& m, int n,
                                  int n_test, std::uint64_t seed,
                                  bool noisy_targets = true);

// Closed-form least squares on the train split through a k-truncated SVD of
// the centered design matrix.  Singular values below 1e-12 of the largest
// are excluded from the inversion; k above the number of available singular
// values is an error.
QuadraticPredictor fit_closed_form(const SearchSpaceSpec& spec,
                                   FeatureFamily family,
                                   const RegressionDataset& data, int k);

// Mean squared error of the predictor over the given index subset.
double mse_on(const SearchSpaceSpec& spec, const QuadraticPredictor& p,
              const RegressionDataset& data, const std::vector<int>& subset);

struct ComponentSelection {
  int best_k = 0;
  // (k, validation Kendall tau) per grid entry, in grid order.
  std::vector<std::pair<int, double>> scores;
};

// Fits every k in the grid and keeps the one with the best validation
// Kendall tau; ties go to the smaller k.
ComponentSelection select_components(const SearchSpaceSpec& spec,
                                     FeatureFamily family,
                                     const RegressionDataset& data,
                                     const std::vector<int>& k_grid);

}  // namespace bilopt

#endif  // BILOPT_PREDICTORS_HPP_
