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

#ifndef BILOPT_SEARCH_SPACE_HPP_
#define BILOPT_SEARCH_SPACE_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bilopt/common.hpp"
#include "bilopt/rng.hpp"

namespace bilopt {

// One entry of the block configuration table: expansion ratio, kernel size,
// and whether squeeze-and-excitation is enabled.
struct BlockConfig {
  int id = 0;  // external identifier, conventionally 1-based
  int er = 0;
  int k = 0;
  bool se = false;

  friend bool operator==(const BlockConfig&, const BlockConfig&) = default;
};

// Describes a staged search space: S stages of up to D blocks each, a
// per-stage list of allowed depths, and a shared block-config table C.
//
// Decision variables are laid out as one flat vector zeta = (alpha, beta):
//   alpha has S*D*|C| entries, stage-major: index(s, b, c) = (s*D + b)*|C| + c
//     with 0-based block index b (block number b+1) and config position c;
//   beta follows with one group per stage over that stage's allowed depths,
//     in ascending depth order.
// All modules share this layout; tables indexed by decision (estimator
// deltas, latencies) reuse it directly.
class SearchSpaceSpec {
 public:
  // Validates and freezes the description.  depth_choices must contain one
  // ascending duplicate-free list per stage with values in [1, max_depth];
  // configs must be non-empty with distinct ids.
  SearchSpaceSpec(int max_depth, std::vector<std::vector<int>> depth_choices,
                  std::vector<BlockConfig> configs);

  // The space used throughout the experiments: 5 stages, up to 4 blocks per
  // stage with allowed depths {2,3,4}, and the 12-entry config table over
  // er x k x se = {2,3,6} x {3,5} x {off,on}.
  static SearchSpaceSpec paper();

  int num_stages() const { return static_cast<int>(depth_choices_.size()); }
  int max_depth() const { return max_depth_; }
  int num_configs() const { return static_cast<int>(configs_.size()); }
  const std::vector<BlockConfig>& configs() const { return configs_; }
  const std::vector<int>& depth_choices(int s) const {
    return depth_choices_[s];
  }

  int alpha_size() const { return alpha_size_; }
  int beta_size() const { return beta_size_; }
  int zeta_size() const { return alpha_size_ + beta_size_; }

  int alpha_index(int s, int b, int c) const {
    return (s * max_depth_ + b) * num_configs() + c;
  }
  int beta_offset(int s) const { return beta_offsets_[s]; }
  int beta_group_size(int s) const {
    return static_cast<int>(depth_choices_[s].size());
  }
  int beta_index(int s, int choice_pos) const {
    return beta_offsets_[s] + choice_pos;
  }

  // Position of depth d in stage s's choice list, or -1 if not allowed.
  int choice_pos(int s, int d) const;

  // Largest allowed depth of stage s; blocks beyond it can never be active.
  int max_choice(int s) const { return depth_choices_[s].back(); }

  // Smallest allowed depth that activates block b (0-based), i.e. the
  // canonical depth to pin when probing that block's configs.  Empty when no
  // allowed depth reaches the block.
  std::optional<int> pin_depth_for_block(int s, int b) const;

  // Number of effective architectures, prod_s sum_d |C|^d.  Returned as a
  // double because realistic spaces overflow 64-bit integers; exact below
  // 2^53.
  double count_architectures() const;

  friend bool operator==(const SearchSpaceSpec& a, const SearchSpaceSpec& b) {
    return a.max_depth_ == b.max_depth_ &&
           a.depth_choices_ == b.depth_choices_ && a.configs_ == b.configs_;
  }

 private:
  int max_depth_;
  std::vector<std::vector<int>> depth_choices_;
  std::vector<BlockConfig> configs_;
  int alpha_size_ = 0;
  int beta_size_ = 0;
  std::vector<int> beta_offsets_;
};

// A point of the relaxed decision polytope.  Discrete points are one-hot per
// group; continuous points may spread weight within each group's simplex.
struct ArchPoint {
  enum class Mode { kDiscrete, kContinuous };

  std::vector<double> alpha;
  std::vector<double> beta;
  Mode mode = Mode::kDiscrete;

  friend bool operator==(const ArchPoint&, const ArchPoint&) = default;
};

// Compact named form of a discrete architecture: a depth per stage and a
// config position per block.  Blocks above the chosen depth are inactive;
// canonical form stores 0 for them.
struct Architecture {
  std::vector<int> depth;                // per stage, actual depth value
  std::vector<std::vector<int>> config;  // [stage][block], 0-based position

  friend bool operator==(const Architecture&, const Architecture&) = default;
};

// One constraint violation found by validate().
struct Violation {
  enum class Kind { kGroupSum, kNegativeEntry, kNotOneHot };

  Kind kind;
  int stage = 0;
  // Block index for alpha groups, -1 for beta groups.
  int block = -1;
  // |group sum - 1| for kGroupSum, the offending entry for kNegativeEntry.
  double residual = 0.0;

  std::string describe() const;
};

// Checks simplex structure of a point: nonnegative entries, per-group sums of
// one, and one-hot entries when the point is discrete.  Returns all
// violations found.  Throws DimensionError when vector sizes do not match
// the spec; a shape mismatch is a structural error, not a violation.
std::vector<Violation> validate(const SearchSpaceSpec& spec,
                                const ArchPoint& point);

// Draws a uniform discrete architecture: every group independently uniform
// over its entries.  Group order is all alpha groups stage-major, then all
// beta groups, one draw per group.
ArchPoint sample_uniform(const SearchSpaceSpec& spec, Rng& rng);
Architecture sample_uniform_arch(const SearchSpaceSpec& spec, Rng& rng);

// Per-group argmax with ties resolved to the lowest index.
ArchPoint discretize(const SearchSpaceSpec& spec, const ArchPoint& point);

// Enumerates all effective architectures (inactive blocks canonicalized to
// config 0).  Stages vary slowest-first; within a stage, depths ascend and
// config tuples are in lexicographic order with the last block fastest.
// Throws CapExceededError with the computed count when it exceeds cap.
void for_each_architecture(const SearchSpaceSpec& spec, double cap,
                           const std::function<void(const Architecture&)>& fn);
std::vector<ArchPoint> enumerate_architectures(const SearchSpaceSpec& spec,
                                               double cap);

// Conversions between the two architecture forms.
ArchPoint to_point(const SearchSpaceSpec& spec, const Architecture& arch);
Architecture from_point(const SearchSpaceSpec& spec, const ArchPoint& point);

// Canonical form: configs of inactive blocks set to 0.
Architecture canonicalized(const SearchSpaceSpec& spec,
                           const Architecture& arch);

}  // namespace bilopt

#endif  // BILOPT_SEARCH_SPACE_HPP_
