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

#ifndef OPTOMECH_MEASUREMENT_HPP
#define OPTOMECH_MEASUREMENT_HPP

#include <cstddef>
#include <random>
#include <vector>

#include "optomech/states.hpp"

namespace optomech {

/// One application of the pulsed amplitude-quadrature measurement.
///
/// `outcome` is the offset homodyne result ΔQ_X = Q_X⁽⁰⁾ - Q_X, so ΔQ_X > 0
/// selects |x| ≈ sqrt(ΔQ_X / χ).
struct LinearPulseMeasurement {
  double chi = 1.0;
  double omega_kick = 0.0;
  double outcome = 0.0;
};

/// Phase-quadrature readout of the dispersive X² coupling. Note the sign:
/// outcome Q_P ≈ -χ_sq x², so negative outcomes select large |x|.
struct DispersiveMeasurement {
  double chi_sq = 1.0;
  double omega_sq = 0.0;
  double outcome = 0.0;
  double x_in = 0.0;
};

/// Post-selection window center ± width/2, in outcome units.
struct OutcomeWindow {
  double center = 0.0;
  double width = 0.0;

  double lower() const { return center - 0.5 * width; }
  double upper() const { return center + 0.5 * width; }
  bool contains(double q) const { return q >= lower() && q <= upper(); }
};

/// Υ_X(x_i) = π^(-1/4) e^{iΩx} exp(-(ΔQ - χx²)²/2) on every grid point.
ComplexVector upsilon_x_diagonal(const QuadratureGrid& grid,
                                 const LinearPulseMeasurement& meas);

/// Υ_sq(x_i) = π^(-1/4) e^{-iΩ_sq x_in x} exp(-(Q_P + χ_sq x²)²/2).
ComplexVector upsilon_sq_diagonal(const QuadratureGrid& grid,
                                  const DispersiveMeasurement& meas);

/// Sampled outcome density P(q) on a uniform q grid.
struct OutcomePdf {
  std::vector<double> q;
  std::vector<double> density;

  double dq() const { return q.size() > 1 ? q[1] - q[0] : 0.0; }
  /// Trapezoid ∫P dq.
  double integral() const;
  /// Trapezoid ∫q P dq.
  double mean() const;
  /// Trapezoid ∫(q - mean)^k P dq.
  double central_moment(int k) const;
};

struct OutcomeRange {
  double q_min = 0.0;
  double q_max = 0.0;
};

/// [-6, χ x_max² + 6]: shot noise plus the deterministic span of χx².
OutcomeRange default_outcome_range(const QuadratureGrid& grid, double chi);

inline constexpr std::size_t kDefaultOutcomePoints = 2048;

/// P(q) = Σ_i ρ_ii dx π^(-1/2) exp(-(q - χx_i²)²). Independent of the kick.
/// Throws TruncationError when more than 1e-4 of the mass falls outside the
/// range.
OutcomePdf outcome_pdf(const DensityMatrixGrid& state, double chi,
                       std::size_t n_outcomes, OutcomeRange range);
OutcomePdf outcome_pdf(const DensityMatrixGrid& state, double chi);

/// P(outcome) for an exact outcome: Σ_i |Υ(x_i)|² ρ_ii dx.
double outcome_density(const DensityMatrixGrid& state, double chi,
                       double outcome);

/// Conditional state for an exact outcome. Throws ConditioningError when the
/// outcome density is below 1e-12.
DensityMatrixGrid condition_exact(const DensityMatrixGrid& state,
                                  const LinearPulseMeasurement& meas);

/// Same for the dispersive operator.
DensityMatrixGrid condition_dispersive(const DensityMatrixGrid& state,
                                       const DispersiveMeasurement& meas);

struct WindowedState {
  DensityMatrixGrid state;
  double probability = 0.0;
};

/// Outcome-window average ∫_w dq Υ(q) ρ Υ†(q) / P(w) in closed form:
/// ρ(x,x′) e^{iΩ(x-x′)} e^{-(u-v)²/4} [erf(b - m) - erf(a - m)]/2 with
/// u = χx², v = χx′², m = (u+v)/2.
WindowedState condition_window(const DensityMatrixGrid& state, double chi,
                               double omega_kick, const OutcomeWindow& window);

/// Composite-Simpson quadrature of the same integral over `n_points` (odd,
/// >= 3) outcome samples. Slow reference path.
WindowedState condition_window_quadrature(const DensityMatrixGrid& state,
                                          double chi, double omega_kick,
                                          const OutcomeWindow& window,
                                          std::size_t n_points = 201);

/// Outcome-blind state ρ(x,x′) e^{iΩ(x-x′)} exp(-χ²(x² - x′²)²/4).
DensityMatrixGrid uncondition(const DensityMatrixGrid& state, double chi,
                              double omega_kick);

/// Reference path for uncondition: trapezoid over a wide outcome grid of
/// spacing `dq`.
DensityMatrixGrid uncondition_quadrature(const DensityMatrixGrid& state,
                                         double chi, double omega_kick,
                                         double dq = 0.05);

/// Draws outcomes distributed exactly as outcome_pdf: a grid point by inverse
/// CDF of the diagonal, then χx² plus N(0, 1/2) shot noise.
class OutcomeSampler {
 public:
  OutcomeSampler(const DensityMatrixGrid& state, double chi);

  double operator()(std::mt19937_64& rng) const;
  /// Position only, before the shot noise.
  double sample_position(std::mt19937_64& rng) const;

 private:
  QuadratureGrid grid_;
  std::vector<double> cdf_;
  double chi_;
};

double sample_outcome(const DensityMatrixGrid& state, double chi,
                      std::mt19937_64& rng);

}  // namespace optomech

#endif  // OPTOMECH_MEASUREMENT_HPP
