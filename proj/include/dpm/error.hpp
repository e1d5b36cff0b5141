// Copyright 2026 The dpm Authors.
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

#ifndef DPM_ERROR_HPP
#define DPM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace dpm {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A hypothesis of a theorem-level check does not hold for the given input.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A recursion step needs a table entry that has not been computed.
class DependencyError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Linear solve with a (numerically) vanishing coefficient.
class SingularSystemError : public std::runtime_error {
 public:
  SingularSystemError(const std::string& what, double coefficient)
      : std::runtime_error(what), coefficient_(coefficient) {}
  double coefficient() const noexcept { return coefficient_; }

 private:
  double coefficient_;
};

// Stick-breaking did not reach its tail-mass target within the stick budget.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double tail_mass)
      : std::runtime_error(what), tail_mass_(tail_mass) {}
  double tail_mass() const noexcept { return tail_mass_; }

 private:
  double tail_mass_;
};

}  // namespace dpm

#endif  // DPM_ERROR_HPP
