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

#ifndef OPTOMECH_WIGNER_HPP
#define OPTOMECH_WIGNER_HPP

#include <optional>
#include <utility>
#include <vector>

#include "optomech/states.hpp"

namespace optomech {

/// W(x_i, p_j) on a rectangular phase-space grid; rows index x, columns p.
/// Both axes are uniform and ascending.
struct WignerGrid {
  RealVector x_axis;
  RealVector p_axis;
  RealMatrix w;
  double imag_residue = 0.0;  // max |Im W| discarded by the transform

  double dx() const { return x_axis(1) - x_axis(0); }
  double dp() const { return p_axis(1) - p_axis(0); }
  double integral() const { return w.sum() * dx() * dp(); }
  /// ∫W dp at each x.
  RealVector position_marginal() const { return w.rowwise().sum() * dp(); }
  /// W at an arbitrary point by bicubic (Catmull-Rom) interpolation, zero
  /// outside the grid.
  double at(double x, double p) const;
};

/// W(x,p) = (1/π) ∫dy e^{-2ipy} ρ(x+y, x-y), evaluated per grid row by an FFT
/// over the antidiagonal. The momentum axis is k_m = π m / (n dx),
/// m ∈ [-n/2, n/2). Throws ConfigurationError unless n is a power of two.
WignerGrid wigner_transform(const DensityMatrixGrid& state);

struct Negativity {
  double min_value = 0.0;
  double negative_volume = 0.0;  // ∫∫ max(-W, 0)
};

Negativity negativity(const WignerGrid& wg);

/// Deviations of the three Wigner identities for a state/transform pair.
struct WignerIdentities {
  double normalization = 0.0;  // |∫∫W - 1|
  double marginal = 0.0;       // max_x |∫W dp - ρ(x,x)|
  double purity = 0.0;         // |2π ∫∫W² - Tr ρ²|
  bool bounded = true;         // |W| <= 1/π (+ 1e-6)
};

WignerIdentities check_identities(const DensityMatrixGrid& state,
                                  const WignerGrid& wg);

struct SeparationReport {
  std::optional<double> delta;
  std::pair<double, double> peak_positions{0.0, 0.0};
  std::optional<double> physical_separation;  // [m], when x0 is known
  bool degenerate = false;
};

/// Peak separation sqrt(4 ΔQ χ - 1/σ²)/χ for a Gaussian input of position
/// variance σ². Degenerate (single peak) when 4 ΔQ χ <= 1/σ².
SeparationReport separation_formula(double sigma2, double chi, double outcome);

/// Distance between the two maxima of ρ(x,x), refined by a parabola through
/// the three grid points around each. Maxima below 5% of the global maximum
/// are ignored. Throws AmbiguityError for more than two surviving maxima.
SeparationReport measure_separation(const DensityMatrixGrid& state);

/// √2 x₀ δ: the quadrature-to-metres conversion.
double physical_separation(double delta, double x0);

struct SampledDensity {
  RealVector x;
  RealVector density;

  double integral() const;
  double mean() const;
  double variance() const;
};

/// Pr(s) = ∫ W(s cosθ - t sinθ, s sinθ + t cosθ) dt, sampled on `s_axis`.
SampledDensity rotated_marginal(const WignerGrid& wg, double theta,
                                const RealVector& s_axis);
/// Sampled on the Wigner grid's own x axis.
SampledDensity rotated_marginal(const WignerGrid& wg, double theta);

}  // namespace optomech

#endif  // OPTOMECH_WIGNER_HPP
