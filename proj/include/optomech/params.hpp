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

#ifndef OPTOMECH_PARAMS_HPP
#define OPTOMECH_PARAMS_HPP

#include <string>

#include "optomech/constants.hpp"

namespace optomech::params {

/// Raw experimental inputs, SI units throughout.
///
/// `reflectivity` is the field reflectivity of the dispersive element and is
/// only consumed by the quadratic-coupling chain.
struct SystemParams {
  double wavelength = 1064e-9;
  double mass = 40e-12;
  double omega_m = 2.0 * constants::pi * 2e3;
  double finesse = 5e4;
  double photon_number = 1.7e9;
  double cavity_length = 750e-6;
  double reflectivity = 0.99;
  double temperature = 25e-3;
  double quality_factor = 5e6;

  /// Throws DomainError naming the first offending field.
  void validate() const;
};

/// The experimentally accessible design point (unity X² measurement strength).
SystemParams table_one_inputs();

/// Everything downstream of SystemParams.
struct DerivedParams {
  double x0 = 0.0;                  // [m]
  double g_lin = 0.0;               // [rad/s]
  double kappa = 0.0;               // [rad/s]
  double g_over_kappa = 0.0;
  double kappa_over_omega_m = 0.0;
  double chi_x = 0.0;
  double omega_lin = 0.0;
  double g_sq = 0.0;                // [rad/s]
  double chi_sq = 0.0;
  double omega_sq = 0.0;
  double nbar = 0.0;
  double nbar_over_q = 0.0;
  double delta_omega_kick = 0.0;    // [rad/s]
  bool kick_exceeds_linewidth = false;
  // Set when κ/ω_M < 100: the pulse is not short against a mechanical period.
  bool pulsed_regime_warning = false;
};

DerivedParams derive(const SystemParams& p);

/// x₀ = sqrt(ħ / (2 m ω_M)).
double zero_point_extension(double mass, double omega_m);

/// g_lin = ω_L x₀ / L with ω_L = 2πc/λ.
double linear_coupling(double wavelength, double x0, double cavity_length);

/// Amplitude decay rate κ = πc / (2 L 𝓕).
double cavity_decay(double finesse, double cavity_length);

/// Optimal-pulse X² measurement strength sqrt(42 N_p) (g/κ)².
double chi_x(double photon_number, double g_lin, double kappa);

/// Mean momentum kick (5√2/3) N_p g/κ of the linear-coupling pulse.
double omega_lin(double photon_number, double g_lin, double kappa);

/// g_sq = (16π² c x₀² / (L λ²)) sqrt(2(1 - r)); zero at r = 1.
double quadratic_coupling(double wavelength, double x0, double cavity_length,
                          double reflectivity);

struct DispersiveStrengths {
  double chi_sq = 0.0;
  double omega_sq = 0.0;
};

/// chi_sq = sqrt(10 N_p) g_sq/κ, omega_sq = 3 N_p g_sq/κ.
DispersiveStrengths dispersive_strengths(double photon_number, double g_sq,
                                         double kappa);

/// χ_X / χ_sq from the base formulas. Each system supplies its own cavity
/// and oscillator; N_p and λ must match (ContractError otherwise). The
/// dispersive element's reflectivity is read from `sq`.
double strength_ratio(const SystemParams& lin, const SystemParams& sq);

/// The approximate closed form
/// (1/π)(𝓕_lin²/𝓕_sq)(x_lin²/x_sq²)/sqrt(2(1 - r)).
double strength_ratio_closed_form(const SystemParams& lin,
                                  const SystemParams& sq);

/// Bose occupation 1/(exp(ħω/k_B T) - 1); zero at T = 0.
double thermal_occupation(double temperature, double omega_m);

struct CavityShift {
  double shift = 0.0;               // Δω_Ω [rad/s]
  bool exceeds_linewidth = false;   // Δω_Ω > κ: a second pulse is off resonance
};

/// Cavity detuning √2 g_lin Ω_lin produced a quarter period after the kick.
CavityShift cavity_shift_after_kick(double g_lin, double omega_lin,
                                    double kappa);

/// Aligned text table, inputs first then derived rows. `separation` is the
/// superposition separation for the reference outcome; NaN omits the row.
std::string format_table(const SystemParams& p, const DerivedParams& d,
                         double separation);

}  // namespace optomech::params

#endif  // OPTOMECH_PARAMS_HPP
