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

// Runs every acceptance criterion and prints one line per criterion.

#include <chrono>
#include <iostream>

#include "optomech/acceptance.hpp"

int main() {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  int failures = 0;
  optomech::acceptance::run_all({}, [&](const optomech::acceptance::Check& c) {
    std::cout << optomech::acceptance::format_line(c) << std::endl;
    if (!c.pass) ++failures;
  });
  const double seconds =
      std::chrono::duration<double>(clock::now() - start).count();
  std::cout << (failures == 0 ? "all criteria pass" : "FAILED criteria: ")
            << (failures == 0 ? "" : std::to_string(failures)) << " (" << seconds
            << " s)\n";
  return failures == 0 ? 0 : 1;
}
