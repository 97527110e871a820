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

#ifndef OPTOMECH_ACCEPTANCE_HPP
#define OPTOMECH_ACCEPTANCE_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace optomech::acceptance {

inline constexpr int kCriterionCount = 13;

struct Check {
  int id = 0;
  std::string name;
  std::string target;
  std::string tolerance;
  std::string measured;
  bool pass = false;
  bool skipped = false;
  std::string note;  // skip reason or error text
};

struct Options {
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  /// Expected χ_X for the parameter-chain check. Moving it away from 1
  /// demonstrates a failing report.
  double chi_target = 1.0;
  /// Criteria to skip, with the reason reported in their place.
  std::map<int, std::string> skip;
};

/// Module whose configuration a criterion depends on (params, measurement,
/// wigner, pulse or protocol).
std::string module_of(int id);

std::string name_of(int id);

/// Runs one criterion. Exceptions thrown by the library are reported as a
/// failed check carrying the error text.
Check run_check(int id, const Options& options);

/// Runs every criterion in order; `on_check` sees each result as it lands.
std::vector<Check> run_all(const Options& options,
                           const std::function<void(const Check&)>& on_check = {});

/// One line: status, id, name, measured vs target and tolerance.
std::string format_line(const Check& check);

}  // namespace optomech::acceptance

#endif  // OPTOMECH_ACCEPTANCE_HPP
