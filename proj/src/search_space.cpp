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

#include "bilopt/search_space.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace bilopt {

SearchSpaceSpec::SearchSpaceSpec(int max_depth,
                                 std::vector<std::vector<int>> depth_choices,
                                 std::vector<BlockConfig> configs)
    : max_depth_(max_depth),
      depth_choices_(std::move(depth_choices)),
      configs_(std::move(configs)) {
  if (max_depth_ < 1) {
    throw InvalidInputError("max_depth must be at least 1");
  }
  if (depth_choices_.empty()) {
    throw InvalidInputError("at least one stage is required");
  }
  if (configs_.empty()) {
    throw InvalidInputError("config table must be non-empty");
  }
  std::set<int> ids;
  for (const BlockConfig& c : configs_) {
    if (!ids.insert(c.id).second) {
      throw InvalidInputError("duplicate config id " + std::to_string(c.id));
    }
  }
  for (const auto& choices : depth_choices_) {
    if (choices.empty()) {
      throw InvalidInputError("each stage needs at least one depth choice");
    }
    for (std::size_t i = 0; i < choices.size(); ++i) {
      if (choices[i] < 1 || choices[i] > max_depth_) {
        throw InvalidInputError("depth choice out of [1, max_depth]");
      }
      if (i > 0 && choices[i] <= choices[i - 1]) {
        throw InvalidInputError("depth choices must be strictly ascending");
      }
    }
  }
  alpha_size_ = num_stages() * max_depth_ * num_configs();
  beta_offsets_.resize(depth_choices_.size());
  for (int s = 0; s < num_stages(); ++s) {
    beta_offsets_[s] = beta_size_;
    beta_size_ += static_cast<int>(depth_choices_[s].size());
  }
}

SearchSpaceSpec SearchSpaceSpec::paper() {
  std::vector<BlockConfig> configs;
  int id = 1;
  for (int er : {2, 3, 6}) {
    for (int k : {3, 5}) {
      for (bool se : {false, true}) {
        configs.push_back({id++, er, k, se});
      }
    }
  }
  return SearchSpaceSpec(4, std::vector<std::vector<int>>(5, {2, 3, 4}),
                         std::move(configs));
}

int SearchSpaceSpec::choice_pos(int s, int d) const {
  const auto& choices = depth_choices_[s];
  auto it = std::lower_bound(choices.begin(), choices.end(), d);
  if (it == choices.end() || *it != d) return -1;
  return static_cast<int>(it - choices.begin());
}

std::optional<int> SearchSpaceSpec::pin_depth_for_block(int s, int b) const {
  for (int d : depth_choices_[s]) {
    if (d >= b + 1) return d;
  }
  return std::nullopt;
}

double SearchSpaceSpec::count_architectures() const {
  double total = 1.0;
  for (int s = 0; s < num_stages(); ++s) {
    double per_stage = 0.0;
    for (int d : depth_choices_[s]) {
      per_stage += std::pow(static_cast<double>(num_configs()), d);
    }
    total *= per_stage;
  }
  return total;
}

std::string Violation::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::kGroupSum:
      os << "group sum differs from 1";
      break;
    case Kind::kNegativeEntry:
      os << "negative entry";
      break;
    case Kind::kNotOneHot:
      os << "discrete point is not one-hot";
      break;
  }
  os << " at stage " << stage;
  if (block >= 0) {
    os << " block " << block;
  } else {
    os << " depth group";
  }
  os << " (residual " << residual << ")";
  return os.str();
}

namespace {

// Checks one simplex group spanning [begin, begin+len) of v.
void check_group(const std::vector<double>& v, int begin, int len,
                 ArchPoint::Mode mode, int stage, int block,
                 std::vector<Violation>* out) {
  double sum = 0.0;
  double worst_negative = 0.0;
  bool one_hot = true;
  for (int i = 0; i < len; ++i) {
    const double x = v[begin + i];
    sum += x;
    worst_negative = std::min(worst_negative, x);
    if (std::abs(x) > kOneHotTol && std::abs(x - 1.0) > kOneHotTol) {
      one_hot = false;
    }
  }
  if (worst_negative < -kOneHotTol) {
    out->push_back({Violation::Kind::kNegativeEntry, stage, block,
                    worst_negative});
  }
  if (std::abs(sum - 1.0) > kOneHotTol) {
    out->push_back({Violation::Kind::kGroupSum, stage, block,
                    std::abs(sum - 1.0)});
  }
  if (mode == ArchPoint::Mode::kDiscrete && !one_hot) {
    out->push_back({Violation::Kind::kNotOneHot, stage, block, 0.0});
  }
}

}  // namespace

std::vector<Violation> validate(const SearchSpaceSpec& spec,
                                const ArchPoint& point) {
  if (static_cast<int>(point.alpha.size()) != spec.alpha_size() ||
      static_cast<int>(point.beta.size()) != spec.beta_size()) {
    throw DimensionError("point shape does not match spec: alpha " +
                         std::to_string(point.alpha.size()) + "/" +
                         std::to_string(spec.alpha_size()) + ", beta " +
                         std::to_string(point.beta.size()) + "/" +
                         std::to_string(spec.beta_size()));
  }
  std::vector<Violation> violations;
  for (int s = 0; s < spec.num_stages(); ++s) {
    for (int b = 0; b < spec.max_depth(); ++b) {
      check_group(point.alpha, spec.alpha_index(s, b, 0), spec.num_configs(),
                  point.mode, s, b, &violations);
    }
    check_group(point.beta, spec.beta_offset(s), spec.beta_group_size(s),
                point.mode, s, -1, &violations);
  }
  return violations;
}

Architecture sample_uniform_arch(const SearchSpaceSpec& spec, Rng& rng) {
  Architecture arch;
  arch.depth.resize(spec.num_stages());
  arch.config.assign(spec.num_stages(),
                     std::vector<int>(spec.max_depth(), 0));
  for (int s = 0; s < spec.num_stages(); ++s) {
    for (int b = 0; b < spec.max_depth(); ++b) {
      arch.config[s][b] = rng.uniform_int(spec.num_configs());
    }
  }
  for (int s = 0; s < spec.num_stages(); ++s) {
    arch.depth[s] =
        spec.depth_choices(s)[rng.uniform_int(spec.beta_group_size(s))];
  }
  return arch;
}

ArchPoint sample_uniform(const SearchSpaceSpec& spec, Rng& rng) {
  return to_point(spec, sample_uniform_arch(spec, rng));
}

ArchPoint discretize(const SearchSpaceSpec& spec, const ArchPoint& point) {
  validate(spec, point);  // shape check; constraint residuals are tolerated
  ArchPoint out;
  out.mode = ArchPoint::Mode::kDiscrete;
  out.alpha.assign(spec.alpha_size(), 0.0);
  out.beta.assign(spec.beta_size(), 0.0);
  auto argmax = [](const std::vector<double>& v, int begin, int len) {
    int best = 0;
    for (int i = 1; i < len; ++i) {
      if (v[begin + i] > v[begin + best]) best = i;
    }
    return best;
  };
  for (int s = 0; s < spec.num_stages(); ++s) {
    for (int b = 0; b < spec.max_depth(); ++b) {
      const int base = spec.alpha_index(s, b, 0);
      out.alpha[base + argmax(point.alpha, base, spec.num_configs())] = 1.0;
    }
    const int base = spec.beta_offset(s);
    out.beta[base + argmax(point.beta, base, spec.beta_group_size(s))] = 1.0;
  }
  return out;
}

namespace {

void enumerate_stage_tail(const SearchSpaceSpec& spec, Architecture* arch,
                          int s,
                          const std::function<void(const Architecture&)>& fn);

// Fills configs of stage s for blocks [b, depth) and recurses into the next
// stage once the stage is complete.
void enumerate_configs(const SearchSpaceSpec& spec, Architecture* arch, int s,
                       int b,
                       const std::function<void(const Architecture&)>& fn) {
  if (b == arch->depth[s]) {
    enumerate_stage_tail(spec, arch, s + 1, fn);
    return;
  }
  for (int c = 0; c < spec.num_configs(); ++c) {
    arch->config[s][b] = c;
    enumerate_configs(spec, arch, s, b + 1, fn);
  }
  arch->config[s][b] = 0;
}

void enumerate_stage_tail(const SearchSpaceSpec& spec, Architecture* arch,
                          int s,
                          const std::function<void(const Architecture&)>& fn) {
  if (s == spec.num_stages()) {
    fn(*arch);
    return;
  }
  for (int d : spec.depth_choices(s)) {
    arch->depth[s] = d;
    enumerate_configs(spec, arch, s, 0, fn);
  }
}

}  // namespace

void for_each_architecture(const SearchSpaceSpec& spec, double cap,
                           const std::function<void(const Architecture&)>& fn) {
  const double count = spec.count_architectures();
  if (count > cap) {
    throw CapExceededError(
        "architecture count " + std::to_string(count) +
            " exceeds cap " + std::to_string(cap),
        count);
  }
  Architecture arch;
  arch.depth.assign(spec.num_stages(), 0);
  arch.config.assign(spec.num_stages(), std::vector<int>(spec.max_depth(), 0));
  enumerate_stage_tail(spec, &arch, 0, fn);
}

std::vector<ArchPoint> enumerate_architectures(const SearchSpaceSpec& spec,
                                               double cap) {
  std::vector<ArchPoint> out;
  out.reserve(static_cast<std::size_t>(spec.count_architectures() > cap
                                           ? 0
                                           : spec.count_architectures()));
  for_each_architecture(spec, cap, [&](const Architecture& arch) {
    out.push_back(to_point(spec, arch));
  });
  return out;
}

ArchPoint to_point(const SearchSpaceSpec& spec, const Architecture& arch) {
  if (static_cast<int>(arch.depth.size()) != spec.num_stages() ||
      static_cast<int>(arch.config.size()) != spec.num_stages()) {
    throw DimensionError("architecture shape does not match spec");
  }
  ArchPoint point;
  point.mode = ArchPoint::Mode::kDiscrete;
  point.alpha.assign(spec.alpha_size(), 0.0);
  point.beta.assign(spec.beta_size(), 0.0);
  for (int s = 0; s < spec.num_stages(); ++s) {
    if (static_cast<int>(arch.config[s].size()) != spec.max_depth()) {
      throw DimensionError("architecture shape does not match spec");
    }
    const int pos = spec.choice_pos(s, arch.depth[s]);
    if (pos < 0) {
      throw InvalidInputError("depth " + std::to_string(arch.depth[s]) +
                              " not allowed in stage " + std::to_string(s));
    }
    point.beta[spec.beta_index(s, pos)] = 1.0;
    for (int b = 0; b < spec.max_depth(); ++b) {
      const int c = arch.config[s][b];
      if (c < 0 || c >= spec.num_configs()) {
        throw InvalidInputError("config position out of range");
      }
      point.alpha[spec.alpha_index(s, b, c)] = 1.0;
    }
  }
  return point;
}

Architecture from_point(const SearchSpaceSpec& spec, const ArchPoint& point) {
  if (point.mode != ArchPoint::Mode::kDiscrete) {
    throw InvalidInputError("from_point requires a discrete point");
  }
  auto violations = validate(spec, point);
  if (!violations.empty()) {
    throw InvalidInputError("point is not a valid discrete architecture: " +
                            violations.front().describe());
  }
  Architecture arch;
  arch.depth.resize(spec.num_stages());
  arch.config.assign(spec.num_stages(), std::vector<int>(spec.max_depth(), 0));
  auto hot = [](const std::vector<double>& v, int begin, int len) {
    for (int i = 0; i < len; ++i) {
      if (v[begin + i] > 0.5) return i;
    }
    return 0;
  };
  for (int s = 0; s < spec.num_stages(); ++s) {
    const int pos = hot(point.beta, spec.beta_offset(s),
                        spec.beta_group_size(s));
    arch.depth[s] = spec.depth_choices(s)[pos];
    for (int b = 0; b < spec.max_depth(); ++b) {
      arch.config[s][b] =
          hot(point.alpha, spec.alpha_index(s, b, 0), spec.num_configs());
    }
  }
  return arch;
}

Architecture canonicalized(const SearchSpaceSpec& spec,
                           const Architecture& arch) {
  Architecture out = arch;
  for (int s = 0; s < spec.num_stages(); ++s) {
    for (int b = arch.depth[s]; b < spec.max_depth(); ++b) {
      out.config[s][b] = 0;
    }
  }
  return out;
}

}  // namespace bilopt
