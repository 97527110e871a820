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

#ifndef OPTOMECH_STATES_HPP
#define OPTOMECH_STATES_HPP

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace optomech {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Uniform, symmetric grid of the dimensionless position quadrature X_M.
///
/// x_i = -x_max + i dx, dx = 2 x_max / (n - 1). The point count must be a
/// power of two so the Wigner transform can run on radix-2 FFTs.
class QuadratureGrid {
 public:
  QuadratureGrid(double x_max, std::size_t n_points);

  /// [-8, 8] with 512 points.
  static QuadratureGrid standard() { return {8.0, 512}; }

  double x_min() const { return -x_max_; }
  double x_max() const { return x_max_; }
  std::size_t size() const { return n_; }
  double dx() const { return dx_; }
  double x(std::size_t i) const { return -x_max_ + static_cast<double>(i) * dx_; }
  RealVector points() const;

  /// Narrower than ±5: Gaussian truncation dominates the error budget.
  bool is_narrow() const { return x_max_ < 5.0; }

  bool operator==(const QuadratureGrid&) const = default;

 private:
  double x_max_;
  std::size_t n_;
  double dx_;
};

/// Result of checking the density-matrix invariants.
struct InvariantReport {
  double hermiticity = 0.0;     // max|ρ - ρ†| / max|ρ|
  double trace_error = 0.0;     // |Tr ρ - 1|
  double min_eigenvalue = 0.0;  // of the grid-measure operator ρ dx
  bool ok = false;
};

/// Mechanical state ρ(x_i, x_j) on a QuadratureGrid.
///
/// The operator represented is ρ̂ = Σ_ij |x_i⟩ ρ_ij dx² ⟨x_j| with ⟨x_i|x_j⟩ =
/// δ_ij / dx, so Tr ρ̂ = Σ_i ρ_ii dx. Values are immutable after construction.
class DensityMatrixGrid {
 public:
  DensityMatrixGrid(QuadratureGrid grid, ComplexMatrix rho,
                    std::vector<std::string> warnings = {});

  const QuadratureGrid& grid() const { return grid_; }
  const ComplexMatrix& rho() const { return rho_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  Complex operator()(std::size_t i, std::size_t j) const { return rho_(i, j); }

  double trace() const;
  /// Tr ρ² = Σ_ij |ρ_ij|² dx².
  double purity() const;
  /// Real position density ρ(x_i, x_i).
  RealVector diagonal() const;

  /// Same state rescaled to unit trace.
  DensityMatrixGrid normalized() const;

  /// `with_spectrum` adds an O(n³) eigen-decomposition for positivity.
  InvariantReport check(bool with_spectrum = true) const;

 private:
  QuadratureGrid grid_;
  ComplexMatrix rho_;
  std::vector<std::string> warnings_;
};

/// Mechanical state in the number basis of b†b.
class DensityMatrixFock {
 public:
  explicit DensityMatrixFock(ComplexMatrix rho);

  std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
  const ComplexMatrix& rho() const { return rho_; }

  double trace() const;
  double purity() const;
  /// Σ_{n ≥ dim-2} ρ_nn: mass sitting at the truncation edge.
  double tail_mass() const;
  InvariantReport check() const;

 private:
  ComplexMatrix rho_;
};

enum class GaussianKind { ground, thermal, momentum_squeezed, position_squeezed };

/// Axis-aligned Gaussian state description.
struct GaussianSpec {
  GaussianKind kind = GaussianKind::ground;
  double nbar = 0.0;  // thermal only
  double r = 0.0;     // squeezing parameter
  double mean_x = 0.0;
  double mean_p = 0.0;

  double variance_x() const;
  double variance_p() const;
};

DensityMatrixGrid make_gaussian(const QuadratureGrid& grid,
                                const GaussianSpec& spec);
DensityMatrixGrid make_ground(const QuadratureGrid& grid);
DensityMatrixGrid make_thermal(const QuadratureGrid& grid, double nbar);
/// `kind` must be one of the two squeezed kinds.
DensityMatrixGrid make_squeezed(const QuadratureGrid& grid, double r,
                                GaussianKind kind);

/// Unnormalised kernel of an axis-aligned Gaussian state at (x, x′):
/// (2π V_x)^(-1/2) exp(-(x̄ - μ_x)²/(2 V_x) - V_p ξ²/2 + i μ_p ξ),
/// with x̄ = (x + x′)/2 and ξ = x - x′.
Complex gaussian_kernel(const GaussianSpec& spec, double x, double xp);

/// Harmonic-oscillator eigenfunctions ⟨x|n⟩, rows = points, cols = n.
RealMatrix hermite_functions(const RealVector& x, std::size_t dim);

/// Default Fock truncation for basis changes and rotations.
inline constexpr std::size_t kDefaultFockDim = 128;

/// Throws TruncationError when the number-state tail exceeds 1e-6.
DensityMatrixFock grid_to_fock(const DensityMatrixGrid& state,
                               std::size_t dim = kDefaultFockDim);
DensityMatrixGrid fock_to_grid(const DensityMatrixFock& state,
                               const QuadratureGrid& grid);

struct Moments {
  double mean_x = 0.0;
  double mean_p = 0.0;
  double var_x = 0.0;
  double var_p = 0.0;
};

/// Momentum moments use the diagonal of the Fourier-transformed kernel.
Moments moments(const DensityMatrixGrid& state);

/// Momentum-space density on the FFT frequency grid k_m = 2π m / (n dx),
/// m in [-n/2, n/2), normalised to unit sum × dk.
struct MomentumDensity {
  RealVector p;
  RealVector density;
};
MomentumDensity momentum_density(const DensityMatrixGrid& state);

}  // namespace optomech

#endif  // OPTOMECH_STATES_HPP
