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

#include "optomech/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "optomech/constants.hpp"
#include "optomech/errors.hpp"
#include "optomech/params.hpp"

namespace optomech::pulse {

namespace {

using constants::pi;

constexpr double kMinHalfSpan = 10.0;  // in units of 1/κ
constexpr double kMaxStep = 1e-3;      // κ · RK4 step

void require_kappa(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw DomainError("kappa must be positive");
  }
}

void require_span(double kappa, const TimeAxis& axis) {
  if (axis.n < 3) throw ConfigurationError("time axis needs at least 3 samples");
  // One sample of slack on each side for grids that exclude their endpoint.
  const double before = -axis.t_start * kappa;
  const double after = (axis.t_end() + axis.dt) * kappa;
  if (before < kMinHalfSpan - 1e-9 || after < kMinHalfSpan - 1e-9) {
    std::ostringstream msg;
    msg << "time axis covers [" << -before << ", " << after
        << "]/kappa; at least 10/kappa is needed on each side";
    throw TruncationError(msg.str(), 0.0);
  }
}

PulseEnvelope normalize(const TimeAxis& axis, std::vector<double> samples) {
  const double norm2 = norm_squared(axis, samples);
  if (!(norm2 > 0.0)) throw DomainError("pulse envelope has zero norm");
  const double scale = 1.0 / std::sqrt(norm2);
  for (double& v : samples) v *= scale;
  return {axis, std::move(samples), scale};
}

}  // namespace

TimeAxis make_time_axis(double kappa, std::size_t n, double before,
                        double after) {
  require_kappa(kappa);
  if (n < 3) throw ConfigurationError("time axis needs at least 3 samples");
  const double span = (before + after) / kappa;
  return {-before / kappa, span / static_cast<double>(n), n};
}

double optimal_sq_amplitude(double kappa, double omega) {
  require_kappa(kappa);
  const double s = kappa * kappa + omega * omega;
  return std::sqrt(8.0 * std::pow(kappa, 5) / (3.0 * pi)) * std::pow(s, -1.5);
}

double lorentzian_amplitude(double kappa, double omega) {
  require_kappa(kappa);
  return std::sqrt(kappa / pi) / std::sqrt(kappa * kappa + omega * omega);
}

PulseEnvelope optimal_sq_spectrum(double kappa, const TimeAxis& axis) {
  require_kappa(kappa);
  require_span(kappa, axis);
  // ∫cos(ωt)(κ²+ω²)^(-3/2) dω = 2|t| K₁(κ|t|)/κ, → 2/κ² at t = 0.
  const double amp = std::sqrt(8.0 * std::pow(kappa, 5) / (3.0 * pi));
  const double pref = amp / std::sqrt(2.0 * pi);
  std::vector<double> samples(axis.n);
  for (std::size_t k = 0; k < axis.n; ++k) {
    const double at = std::abs(axis.t(k));
    const double z = kappa * at;
    const double shape = z < 1e-12 ? 2.0 / (kappa * kappa)
                                   : 2.0 * at * std::cyl_bessel_k(1.0, z) / kappa;
    samples[k] = pref * shape;
  }
  return normalize(axis, std::move(samples));
}

PulseEnvelope lorentzian_spectrum(double kappa, const TimeAxis& axis) {
  require_kappa(kappa);
  require_span(kappa, axis);
  // ∫cos(ωt)(κ²+ω²)^(-1/2) dω = 2 K₀(κ|t|).
  const double pref = std::sqrt(kappa / pi) / std::sqrt(2.0 * pi);
  std::vector<double> samples(axis.n);
  for (std::size_t k = 0; k < axis.n; ++k) {
    const double z = kappa * std::abs(axis.t(k));
    if (z < 1e-300) {
      throw ConfigurationError("Lorentzian pulse is singular at t = 0");
    }
    samples[k] = pref * 2.0 * std::cyl_bessel_k(0.0, z);
  }
  return normalize(axis, std::move(samples));
}

PulseEnvelope envelope_from_samples(const TimeAxis& axis,
                                    std::vector<double> samples) {
  if (samples.size() != axis.n) {
    throw ConfigurationError("sample count does not match the time axis");
  }
  return normalize(axis, std::move(samples));
}

double norm_squared(const TimeAxis& axis, const std::vector<double>& f) {
  double total = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double w = (k == 0 || k + 1 == f.size()) ? 0.5 : 1.0;
    total += w * f[k] * f[k];
  }
  return total * axis.dt;
}

double second_moment(const PulseEnvelope& pulse) {
  double total = 0.0;
  for (std::size_t k = 0; k < pulse.samples.size(); ++k) {
    const double t = pulse.axis.t(k);
    total += t * t * pulse.samples[k] * pulse.samples[k];
  }
  return total * pulse.axis.dt;
}

ModeFunctions cascade_integrate(const PulseEnvelope& pulse, double kappa) {
  require_kappa(kappa);
  const auto& axis = pulse.axis;
  const double h = 2.0 * axis.dt;
  if (kappa * h > kMaxStep * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "RK4 step kappa*h = " << kappa * h << " exceeds " << kMaxStep;
    throw IntegrationError(msg.str());
  }
  const std::size_t steps = (axis.n - 1) / 2;
  const double drive = std::sqrt(2.0 * kappa);
  const double couple = std::sqrt(2.0) * kappa;

  struct State {
    double a0, a1, a2;
  };
  const auto rhs = [&](const State& y, double f) {
    return State{-kappa * y.a0 + drive * f, -kappa * y.a1 + couple * y.a0,
                 -kappa * y.a2 + couple * y.a1};
  };
  const auto axpy = [](const State& y, double s, const State& k) {
    return State{y.a0 + s * k.a0, y.a1 + s * k.a1, y.a2 + s * k.a2};
  };

  ModeFunctions modes;
  modes.axis = {axis.t_start, h, steps + 1};
  modes.alpha0.resize(steps + 1);
  modes.alpha1.resize(steps + 1);
  modes.alpha2.resize(steps + 1);

  State y{0.0, 0.0, 0.0};
  modes.alpha0[0] = modes.alpha1[0] = modes.alpha2[0] = 0.0;
  for (std::size_t s = 0; s < steps; ++s) {
    const double f0 = pulse.samples[2 * s];
    const double fm = pulse.samples[2 * s + 1];
    const double f1 = pulse.samples[2 * s + 2];
    const State k1 = rhs(y, f0);
    const State k2 = rhs(axpy(y, 0.5 * h, k1), fm);
    const State k3 = rhs(axpy(y, 0.5 * h, k2), fm);
    const State k4 = rhs(axpy(y, h, k3), f1);
    y.a0 += h / 6.0 * (k1.a0 + 2.0 * k2.a0 + 2.0 * k3.a0 + k4.a0);
    y.a1 += h / 6.0 * (k1.a1 + 2.0 * k2.a1 + 2.0 * k3.a1 + k4.a1);
    y.a2 += h / 6.0 * (k1.a2 + 2.0 * k2.a2 + 2.0 * k3.a2 + k4.a2);
    if (!std::isfinite(y.a0) || !std::isfinite(y.a1) || !std::isfinite(y.a2)) {
      throw IntegrationError("cascade integration diverged");
    }
    modes.alpha0[s + 1] = y.a0;
    modes.alpha1[s + 1] = y.a1;
    modes.alpha2[s + 1] = y.a2;
  }
  return modes;
}

double worst_tail_ratio(const ModeFunctions& modes) {
  double worst = 0.0;
  for (const auto* f : {&modes.alpha0, &modes.alpha1, &modes.alpha2}) {
    double peak = 0.0;
    for (double v : *f) peak = std::max(peak, std::abs(v));
    if (peak > 0.0) worst = std::max(worst, std::abs(f->back()) / peak);
  }
  return worst;
}

double numeric_chi_x(const ModeFunctions& modes, double photon_number,
                     double g_lin, double kappa) {
  require_kappa(kappa);
  const double ratio = g_lin / kappa;
  const double lo_overlap = std::sqrt(norm_squared(modes.axis, modes.alpha2));
  return 2.0 * std::sqrt(2.0 * kappa * photon_number) * ratio * ratio * lo_overlap;
}

double numeric_momentum_kick(const ModeFunctions& modes, double photon_number,
                             double g_lin) {
  return std::sqrt(2.0) * g_lin * photon_number *
         norm_squared(modes.axis, modes.alpha0);
}

double PulseVerification::chi_relative_error() const {
  return std::abs(chi_numeric - chi_closed_form) / chi_closed_form;
}

double PulseVerification::kick_relative_error() const {
  return std::abs(kick_numeric - kick_closed_form) / kick_closed_form;
}

PulseVerification verify_pulse(const PulseEnvelope& pulse, double kappa,
                               double photon_number, double g_lin) {
  const ModeFunctions modes = cascade_integrate(pulse, kappa);
  PulseVerification v;
  v.chi_numeric = numeric_chi_x(modes, photon_number, g_lin, kappa);
  v.chi_closed_form = params::chi_x(photon_number, g_lin, kappa);
  v.kick_numeric = numeric_momentum_kick(modes, photon_number, g_lin);
  v.kick_closed_form = params::omega_lin(photon_number, g_lin, kappa);
  v.alpha0_norm2 = norm_squared(modes.axis, modes.alpha0) * kappa;
  v.alpha2_norm2 = norm_squared(modes.axis, modes.alpha2) * kappa;
  v.scale_factor = pulse.scale_factor;
  v.tail_ratio = worst_tail_ratio(modes);
  return v;
}

}  // namespace optomech::pulse
