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

#ifndef OPTOMECH_CONSTANTS_HPP
#define OPTOMECH_CONSTANTS_HPP

#include <numbers>

/// CODATA 2018 exact/recommended values, SI units.
namespace optomech::constants {

inline constexpr double pi = std::numbers::pi;

/// ħ [J·s]
inline constexpr double hbar = 1.054571817e-34;

/// k_B [J/K] (exact)
inline constexpr double boltzmann = 1.380649e-23;

/// c [m/s] (exact)
inline constexpr double speed_of_light = 299792458.0;

}  // namespace optomech::constants

#endif  // OPTOMECH_CONSTANTS_HPP
