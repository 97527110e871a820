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

#ifndef OPTOMECH_PULSE_HPP
#define OPTOMECH_PULSE_HPP

#include <cstddef>
#include <vector>

namespace optomech::pulse {

/// Uniform time samples t_k = t_start + k dt, k < n. Times are physical
/// (seconds when κ is in rad/s); the pulse centre sits at t = 0.
struct TimeAxis {
  double t_start = 0.0;
  double dt = 0.0;
  std::size_t n = 0;

  double t(std::size_t k) const { return t_start + static_cast<double>(k) * dt; }
  double t_end() const { return t(n - 1); }
};

/// [-10/κ, +40/κ) with n points. The end point is excluded so t = 0 is never
/// sampled exactly (the Lorentzian envelope is log-singular there).
TimeAxis make_time_axis(double kappa, std::size_t n = 1u << 17,
                        double before = 10.0, double after = 40.0);

/// Real input envelope α_in(t) with ∫α_in² dt = 1.
struct PulseEnvelope {
  TimeAxis axis;
  std::vector<double> samples;
  // Factor applied to the analytic samples to enforce unit time-domain norm.
  double scale_factor = 1.0;
};

/// Intracavity mode functions of successive order in g X_M / κ.
struct ModeFunctions {
  TimeAxis axis;
  std::vector<double> alpha0;
  std::vector<double> alpha1;
  std::vector<double> alpha2;
};

/// Amplitude spectrum sqrt(8κ⁵/(3π)) (κ² + ω²)^(-3/2); its square integrates
/// to one over ω.
double optimal_sq_amplitude(double kappa, double omega);

/// Amplitude spectrum sqrt(κ/π) (κ² + ω²)^(-1/2) (Lorentzian power spectrum).
double lorentzian_amplitude(double kappa, double omega);

/// Time-domain pulse for the optimal X² spectrum, via the closed-form inverse
/// transform (1/√2π)∫dω e^{iωt} α(ω) ∝ |t| K₁(κ|t|). Throws TruncationError if
/// the axis covers less than 10/κ on either side of the centre.
PulseEnvelope optimal_sq_spectrum(double kappa, const TimeAxis& axis);

/// Lorentzian-spectrum pulse, ∝ K₀(κ|t|) in time.
PulseEnvelope lorentzian_spectrum(double kappa, const TimeAxis& axis);

/// Wraps arbitrary samples, rescaling them to unit norm.
PulseEnvelope envelope_from_samples(const TimeAxis& axis,
                                    std::vector<double> samples);

/// Trapezoid ∫ f² dt.
double norm_squared(const TimeAxis& axis, const std::vector<double>& f);

/// ∫ t² α² dt (pulse centred at t = 0).
double second_moment(const PulseEnvelope& pulse);

/// Integrates α₀' = -κα₀ + √(2κ) α_in, α₁' = -κα₁ + √2 κ α₀,
/// α₂' = -κα₂ + √2 κ α₁ from rest with classical RK4 on steps of 2 dt, using
/// the sample at t + dt as the midpoint. Output lives on every second sample.
/// Throws IntegrationError when κ·step > 1e-3 or the output blows up.
ModeFunctions cascade_integrate(const PulseEnvelope& pulse, double kappa);

/// Final-time magnitude of each mode function relative to its peak.
double worst_tail_ratio(const ModeFunctions& modes);

/// χ_X = 2 sqrt(2κ N_p) (g/κ)² ‖α₂‖ for a local oscillator matched to α₂.
double numeric_chi_x(const ModeFunctions& modes, double photon_number,
                     double g_lin, double kappa);

/// Ω_lin = √2 g N_p ∫α₀² dt.
double numeric_momentum_kick(const ModeFunctions& modes, double photon_number,
                             double g_lin);

/// Numeric vs closed-form strengths for one pulse shape.
struct PulseVerification {
  double chi_numeric = 0.0;
  double chi_closed_form = 0.0;
  double kick_numeric = 0.0;
  double kick_closed_form = 0.0;
  double alpha0_norm2 = 0.0;  // ∫α₀² dt, in units of 1/κ
  double alpha2_norm2 = 0.0;  // ∫α₂² dt, in units of 1/κ
  double scale_factor = 1.0;
  double tail_ratio = 0.0;

  double chi_relative_error() const;
  double kick_relative_error() const;
};

PulseVerification verify_pulse(const PulseEnvelope& pulse, double kappa,
                               double photon_number, double g_lin);

}  // namespace optomech::pulse

#endif  // OPTOMECH_PULSE_HPP
