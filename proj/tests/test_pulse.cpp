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

#include <cmath>
#include <functional>
#include <random>

#include <doctest.h>

#include "optomech/errors.hpp"
#include "optomech/params.hpp"
#include "optomech/pulse.hpp"

using namespace optomech;
using namespace optomech::pulse;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kKappa = 1.0;

// ∫ f(ω) dω over the whole line: midpoint rule in u with ω = tan(u).
double integrate_line(const std::function<double(double)>& f) {
  const int n = 400000;
  const double h = kPi / n;
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    const double u = -kPi / 2.0 + (k + 0.5) * h;
    const double w = std::tan(u);
    total += f(w) * (1.0 + w * w) * h;
  }
  return total;
}

// Frequency-domain oracle for the cascade: each stage multiplies the spectrum
// by √(2κ)/(κ + iω) or √2κ/(κ + iω).
double alpha_norm_oracle(const std::function<double(double)>& amplitude, int order) {
  return integrate_line([&](double w) {
    const double s = kKappa * kKappa + w * w;
    double gain = 2.0 * kKappa / s;
    for (int k = 0; k < order; ++k) gain *= 2.0 * kKappa * kKappa / s;
    const double a = amplitude(w);
    return gain * a * a;
  });
}

}  // namespace

TEST_CASE("spectra are unit normalised") {
  CHECK(integrate_line([](double w) { return std::pow(optimal_sq_amplitude(kKappa, w), 2); }) ==
        doctest::Approx(1.0).epsilon(1e-8));
  CHECK(integrate_line([](double w) { return std::pow(lorentzian_amplitude(kKappa, w), 2); }) ==
        doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(optimal_sq_amplitude(0.0, 1.0), DomainError);
}

TEST_CASE("time-domain envelopes agree with the analytic transform") {
  const auto axis = make_time_axis(kKappa);
  CHECK(kKappa * 2.0 * axis.dt <= 1e-3);
  const auto opt = optimal_sq_spectrum(kKappa, axis);
  CHECK(opt.scale_factor == doctest::Approx(1.0).epsilon(1e-4));
  const auto lor = lorentzian_spectrum(kKappa, axis);
  CHECK(lor.scale_factor == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(norm_squared(axis, opt.samples) == doctest::Approx(1.0).epsilon(1e-12));
  // The Lorentzian pulse is the more compact of the two in time.
  CHECK(second_moment(lor) < second_moment(opt));
}

TEST_CASE("cascade norms match the frequency-domain oracle") {
  const auto axis = make_time_axis(kKappa);
  const auto opt = cascade_integrate(optimal_sq_spectrum(kKappa, axis), kKappa);
  const auto lor = cascade_integrate(lorentzian_spectrum(kKappa, axis), kKappa);
  const auto opt_amp = [](double w) { return optimal_sq_amplitude(kKappa, w); };
  const auto lor_amp = [](double w) { return lorentzian_amplitude(kKappa, w); };
  CHECK(norm_squared(opt.axis, opt.alpha0) ==
        doctest::Approx(alpha_norm_oracle(opt_amp, 0)).epsilon(1e-5));
  CHECK(norm_squared(opt.axis, opt.alpha1) ==
        doctest::Approx(alpha_norm_oracle(opt_amp, 1)).epsilon(1e-5));
  CHECK(norm_squared(opt.axis, opt.alpha2) ==
        doctest::Approx(alpha_norm_oracle(opt_amp, 2)).epsilon(1e-5));
  CHECK(norm_squared(lor.axis, lor.alpha2) ==
        doctest::Approx(alpha_norm_oracle(lor_amp, 2)).epsilon(1e-3));
  // Hand values: κ∫α₀² = 5/3 and κ∫α₂² = 21/4 for the optimal pulse.
  CHECK(norm_squared(opt.axis, opt.alpha0) == doctest::Approx(5.0 / 3.0).epsilon(1e-5));
  CHECK(norm_squared(opt.axis, opt.alpha2) == doctest::Approx(21.0 / 4.0).epsilon(1e-5));
  CHECK(worst_tail_ratio(opt) < 1e-6);
}

TEST_CASE("numeric strengths reproduce the closed forms") {
  const auto p = params::table_one_inputs();
  const auto d = params::derive(p);
  const auto axis = make_time_axis(d.kappa);
  const auto v = verify_pulse(optimal_sq_spectrum(d.kappa, axis), d.kappa, p.photon_number, d.g_lin);
  const double gk = d.g_lin / d.kappa;
  CHECK(v.chi_numeric == doctest::Approx(std::sqrt(42.0 * p.photon_number) * gk * gk).epsilon(5e-3));
  CHECK(v.kick_numeric == doctest::Approx(5.0 * std::sqrt(2.0) / 3.0 * p.photon_number * gk).epsilon(5e-3));
  CHECK(v.chi_relative_error() < 5e-3);
  CHECK(v.kick_relative_error() < 5e-3);
  const auto lor = verify_pulse(lorentzian_spectrum(d.kappa, axis), d.kappa, p.photon_number, d.g_lin);
  CHECK(lor.chi_numeric < v.chi_numeric);
}

TEST_CASE("the readout overlap is bounded for any envelope") {
  // |transfer|² = 8κ⁵/(κ²+ω²)³ never exceeds 8/κ, so κ∫α₂² ≤ 8.
  const auto axis = make_time_axis(kKappa);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> samples(axis.n);
    const double c1 = 10.0 * u(rng), w1 = 0.2 + 5.0 * u(rng);
    const double c2 = 10.0 * u(rng), w2 = 0.2 + 5.0 * u(rng);
    const double mix = u(rng);
    for (std::size_t k = 0; k < axis.n; ++k) {
      const double t = axis.t(k);
      samples[k] = std::exp(-std::pow((t - c1) / w1, 2)) + mix * std::exp(-std::pow((t - c2) / w2, 2));
    }
    auto modes = cascade_integrate(envelope_from_samples(axis, samples), kKappa);
    const double overlap = norm_squared(modes.axis, modes.alpha2) * kKappa;
    CHECK(overlap <= 8.0);
    CHECK(overlap > 0.0);
  }
}

TEST_CASE("configuration errors") {
  const TimeAxis short_axis{-2.0, 1e-4, 100000};
  CHECK_THROWS_AS(optimal_sq_spectrum(kKappa, short_axis), TruncationError);
  const auto coarse = make_time_axis(kKappa, 4096);
  const auto env = optimal_sq_spectrum(kKappa, coarse);
  CHECK_THROWS_AS(cascade_integrate(env, kKappa), IntegrationError);
  CHECK_THROWS_AS(envelope_from_samples(coarse, std::vector<double>(10, 1.0)), ConfigurationError);
  CHECK_THROWS_AS(envelope_from_samples(coarse, std::vector<double>(coarse.n, 0.0)), DomainError);
}
