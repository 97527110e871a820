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

#include "optomech/params.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "optomech/constants.hpp"
#include "optomech/errors.hpp"

namespace optomech::params {

namespace {

using constants::pi;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(name) + " must be positive and finite");
  }
}

void require_non_negative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(name) + " must be non-negative and finite");
  }
}

}  // namespace

void SystemParams::validate() const {
  require_positive(wavelength, "wavelength");
  require_positive(mass, "mass");
  require_positive(omega_m, "omega_m");
  require_positive(finesse, "finesse");
  require_positive(photon_number, "photon_number");
  require_positive(cavity_length, "cavity_length");
  require_positive(temperature, "temperature");
  require_positive(quality_factor, "quality_factor");
  if (!(reflectivity >= 0.0 && reflectivity < 1.0)) {
    throw DomainError("reflectivity must lie in [0, 1)");
  }
}

SystemParams table_one_inputs() { return SystemParams{}; }

double zero_point_extension(double mass, double omega_m) {
  require_positive(mass, "mass");
  require_positive(omega_m, "omega_m");
  return std::sqrt(constants::hbar / (2.0 * mass * omega_m));
}

double linear_coupling(double wavelength, double x0, double cavity_length) {
  require_positive(wavelength, "wavelength");
  require_positive(x0, "x0");
  require_positive(cavity_length, "cavity_length");
  const double omega_laser = 2.0 * pi * constants::speed_of_light / wavelength;
  return omega_laser * x0 / cavity_length;
}

double cavity_decay(double finesse, double cavity_length) {
  require_positive(finesse, "finesse");
  require_positive(cavity_length, "cavity_length");
  return pi * constants::speed_of_light / (2.0 * cavity_length * finesse);
}

double chi_x(double photon_number, double g_lin, double kappa) {
  require_non_negative(photon_number, "photon_number");
  require_non_negative(g_lin, "g_lin");
  require_positive(kappa, "kappa");
  const double ratio = g_lin / kappa;
  return std::sqrt(42.0 * photon_number) * ratio * ratio;
}

double omega_lin(double photon_number, double g_lin, double kappa) {
  require_non_negative(photon_number, "photon_number");
  require_non_negative(g_lin, "g_lin");
  require_positive(kappa, "kappa");
  return (5.0 * std::sqrt(2.0) / 3.0) * photon_number * g_lin / kappa;
}

double quadratic_coupling(double wavelength, double x0, double cavity_length,
                          double reflectivity) {
  require_positive(wavelength, "wavelength");
  require_positive(x0, "x0");
  require_positive(cavity_length, "cavity_length");
  if (!(reflectivity >= 0.0) || reflectivity > 1.0) {
    throw DomainError("reflectivity must lie in [0, 1]");
  }
  if (reflectivity == 1.0) return 0.0;
  const double prefactor = 16.0 * pi * pi * constants::speed_of_light * x0 * x0 /
                           (cavity_length * wavelength * wavelength);
  return prefactor * std::sqrt(2.0 * (1.0 - reflectivity));
}

DispersiveStrengths dispersive_strengths(double photon_number, double g_sq,
                                         double kappa) {
  require_non_negative(photon_number, "photon_number");
  require_non_negative(g_sq, "g_sq");
  require_positive(kappa, "kappa");
  return {std::sqrt(10.0 * photon_number) * g_sq / kappa,
          3.0 * photon_number * g_sq / kappa};
}

namespace {

void require_comparable(const SystemParams& lin, const SystemParams& sq) {
  lin.validate();
  sq.validate();
  if (lin.photon_number != sq.photon_number) {
    throw ContractError("strength ratio needs identical photon numbers");
  }
  if (lin.wavelength != sq.wavelength) {
    throw ContractError("strength ratio needs identical wavelengths");
  }
}

}  // namespace

double strength_ratio(const SystemParams& lin, const SystemParams& sq) {
  require_comparable(lin, sq);
  const double x_lin = zero_point_extension(lin.mass, lin.omega_m);
  const double kappa_lin = cavity_decay(lin.finesse, lin.cavity_length);
  const double g_lin = linear_coupling(lin.wavelength, x_lin, lin.cavity_length);
  const double chi_lin = chi_x(lin.photon_number, g_lin, kappa_lin);

  const double x_sq = zero_point_extension(sq.mass, sq.omega_m);
  const double kappa_sq = cavity_decay(sq.finesse, sq.cavity_length);
  const double g_sq = quadratic_coupling(sq.wavelength, x_sq, sq.cavity_length,
                                         sq.reflectivity);
  const double chi_sq =
      dispersive_strengths(sq.photon_number, g_sq, kappa_sq).chi_sq;
  return chi_lin / chi_sq;
}

double strength_ratio_closed_form(const SystemParams& lin,
                                  const SystemParams& sq) {
  require_comparable(lin, sq);
  const double x_lin = zero_point_extension(lin.mass, lin.omega_m);
  const double x_sq = zero_point_extension(sq.mass, sq.omega_m);
  return (1.0 / pi) * (lin.finesse * lin.finesse / sq.finesse) *
         (x_lin * x_lin) / (x_sq * x_sq) /
         std::sqrt(2.0 * (1.0 - sq.reflectivity));
}

double thermal_occupation(double temperature, double omega_m) {
  require_non_negative(temperature, "temperature");
  require_positive(omega_m, "omega_m");
  if (temperature == 0.0) return 0.0;
  const double x =
      constants::hbar * omega_m / (constants::boltzmann * temperature);
  return 1.0 / std::expm1(x);
}

CavityShift cavity_shift_after_kick(double g_lin, double omega_lin,
                                    double kappa) {
  require_non_negative(g_lin, "g_lin");
  require_non_negative(omega_lin, "omega_lin");
  require_positive(kappa, "kappa");
  const double shift = std::sqrt(2.0) * g_lin * omega_lin;
  return {shift, shift > kappa};
}

DerivedParams derive(const SystemParams& p) {
  p.validate();
  DerivedParams d;
  d.x0 = zero_point_extension(p.mass, p.omega_m);
  d.g_lin = linear_coupling(p.wavelength, d.x0, p.cavity_length);
  d.kappa = cavity_decay(p.finesse, p.cavity_length);
  d.g_over_kappa = d.g_lin / d.kappa;
  d.kappa_over_omega_m = d.kappa / p.omega_m;
  d.pulsed_regime_warning = d.kappa_over_omega_m < 100.0;
  d.chi_x = chi_x(p.photon_number, d.g_lin, d.kappa);
  d.omega_lin = omega_lin(p.photon_number, d.g_lin, d.kappa);
  d.g_sq = quadratic_coupling(p.wavelength, d.x0, p.cavity_length,
                              p.reflectivity);
  const auto disp = dispersive_strengths(p.photon_number, d.g_sq, d.kappa);
  d.chi_sq = disp.chi_sq;
  d.omega_sq = disp.omega_sq;
  d.nbar = thermal_occupation(p.temperature, p.omega_m);
  d.nbar_over_q = d.nbar / p.quality_factor;
  const auto shift = cavity_shift_after_kick(d.g_lin, d.omega_lin, d.kappa);
  d.delta_omega_kick = shift.shift;
  d.kick_exceeds_linewidth = shift.exceeds_linewidth;
  return d;
}

std::string format_table(const SystemParams& p, const DerivedParams& d,
                         double separation) {
  std::ostringstream out;
  const auto row = [&out](const std::string& label, const std::string& symbol,
                          double value, const std::string& unit) {
    out << std::left << std::setw(34) << label << std::setw(14) << symbol
        << std::right << std::setw(14) << std::setprecision(4) << value;
    if (!unit.empty()) out << "  [" << unit << "]";
    out << '\n';
  };
  const std::string rule(72, '=');
  out << rule << '\n';
  row("Optical wavelength:", "lambda", p.wavelength * 1e9, "nm");
  row("Mechanical effective mass:", "m", p.mass * 1e12, "ng");
  row("Mechanical eigenfrequency:", "omega_M/2pi", p.omega_m / (2 * pi) * 1e-3,
      "kHz");
  row("Cavity finesse:", "F", p.finesse, "");
  row("Photon number per pulse:", "N_p", p.photon_number, "");
  out << std::string(72, '-') << '\n';
  row("Cavity length:", "L", p.cavity_length * 1e6, "um");
  row("Mechanical ground-state size:", "x0", d.x0 * 1e15, "fm");
  row("Optomechanical coupling:", "g_lin/2pi", d.g_lin / (2 * pi) * 1e-3, "kHz");
  row("Single photon strength:", "g_lin/kappa", d.g_over_kappa, "");
  row("Quadratic pos. meas. strength:", "chi_X", d.chi_x, "");
  if (!std::isnan(separation)) {
    row("Separation (nbar=0, dQ_X=1.5):", "delta", separation, "");
  }
  out << std::string(72, '-') << '\n';
  row("Cavity decay rate:", "kappa/2pi", d.kappa / (2 * pi) * 1e-6, "MHz");
  row("Pulsed regime ratio:", "kappa/omega_M", d.kappa_over_omega_m, "");
  row("Mean momentum kick:", "Omega_lin", d.omega_lin, "");
  row("Cavity shift after kick:", "dw_Omega/kappa",
      d.delta_omega_kick / d.kappa, "");
  row("Dispersive coupling (r):", "g_sq/2pi", d.g_sq / (2 * pi), "Hz");
  row("Dispersive strength:", "chi_sq", d.chi_sq, "");
  row("Dispersive kick:", "Omega_sq", d.omega_sq, "");
  row("Thermal occupation:", "nbar", d.nbar, "");
  row("Rethermalization per period:", "nbar/Q", d.nbar_over_q, "");
  out << rule << '\n';
  if (d.pulsed_regime_warning) {
    out << "warning: kappa/omega_M < 100, pulses are not short against the "
           "mechanical period\n";
  }
  if (d.kick_exceeds_linewidth) {
    out << "note: cavity shift after the kick exceeds kappa; a second pulse "
           "must follow after half a period\n";
  }
  return out.str();
}

}  // namespace optomech::params
