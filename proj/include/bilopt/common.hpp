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

#ifndef BILOPT_COMMON_HPP_
#define BILOPT_COMMON_HPP_

#include <stdexcept>
#include <string>

namespace bilopt {

// Entries closer than this to 0 or 1 are treated as exact when checking
// one-hot structure and simplex feasibility.
inline constexpr double kOneHotTol = 1e-9;

// Base class for all typed errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Shape of a point or table does not match the search-space spec.  Distinct
// from a constraint violation, which is reported as data, not thrown.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Malformed configuration or file content (parsable but invalid).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// No feasible solution under the given budget.  Carries the smallest
// achievable cost so callers can report how far off the budget is.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, double min_cost)
      : Error(what), min_cost_(min_cost) {}
  double min_cost() const { return min_cost_; }

 private:
  double min_cost_;
};

// An enumeration request exceeds the caller-supplied cap.
class CapExceededError : public Error {
 public:
  CapExceededError(const std::string& what, double count)
      : Error(what), count_(count) {}
  double count() const { return count_; }

 private:
  double count_;
};

// Rank correlation is undefined, e.g. one of the lists is constant.
class UndefinedCorrelationError : public Error {
 public:
  using Error::Error;
};

// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace bilopt

#endif  // BILOPT_COMMON_HPP_
