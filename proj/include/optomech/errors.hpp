// Copyright 2026 The optomech Authors
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

#ifndef OPTOMECH_ERRORS_HPP
#define OPTOMECH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace optomech {

/// Input outside the physical domain of a formula (non-positive mass, r > 1, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Caller violated a precondition that ties several inputs together.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Grid or transform configured in a way the algorithm cannot handle.
class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A basis or range truncation lost more probability mass than allowed.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double lost_mass)
      : std::runtime_error(what), lost_mass_(lost_mass) {}
  double lost_mass() const noexcept { return lost_mass_; }

 private:
  double lost_mass_;
};

/// Post-selection on an outcome (or window) of negligible probability.
class ConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Momentum kick too large for the position grid to represent.
class AliasingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Peak search found more than two comparable maxima.
class AmbiguityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace optomech

#endif  // OPTOMECH_ERRORS_HPP
