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

#include "optomech/states.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/FFT>

#include "optomech/constants.hpp"
#include "optomech/errors.hpp"

namespace optomech {

namespace {

constexpr double kHermiticityTol = 1e-10;
constexpr double kTraceTol = 1e-8;
constexpr double kPositivityTol = 1e-8;
constexpr double kFockTailTol = 1e-6;

double max_abs(const ComplexMatrix& m) {
  return m.cwiseAbs().maxCoeff();
}

InvariantReport make_report(const ComplexMatrix& rho, double trace,
                            double measure, bool with_spectrum,
                            double trace_tol = kTraceTol) {
  InvariantReport report;
  const double scale = std::max(max_abs(rho), 1e-300);
  report.hermiticity = max_abs(rho - rho.adjoint()) / scale;
  report.trace_error = std::abs(trace - 1.0);
  if (with_spectrum) {
    const ComplexMatrix herm = 0.5 * (rho + rho.adjoint()) * measure;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(
        herm, Eigen::EigenvaluesOnly);
    report.min_eigenvalue = solver.eigenvalues().minCoeff();
  }
  report.ok = report.hermiticity < kHermiticityTol &&
              report.trace_error < trace_tol &&
              report.min_eigenvalue >= -kPositivityTol;
  return report;
}

}  // namespace

QuadratureGrid::QuadratureGrid(double x_max, std::size_t n_points)
    : x_max_(x_max), n_(n_points), dx_(0.0) {
  if (!(x_max > 0.0) || !std::isfinite(x_max)) {
    throw ConfigurationError("grid half-width must be positive");
  }
  if (n_points < 4 || !std::has_single_bit(n_points)) {
    throw ConfigurationError("grid point count must be a power of two >= 4");
  }
  dx_ = 2.0 * x_max / static_cast<double>(n_points - 1);
}

RealVector QuadratureGrid::points() const {
  RealVector xs(static_cast<Eigen::Index>(n_));
  for (std::size_t i = 0; i < n_; ++i) xs(static_cast<Eigen::Index>(i)) = x(i);
  return xs;
}

DensityMatrixGrid::DensityMatrixGrid(QuadratureGrid grid, ComplexMatrix rho,
                                     std::vector<std::string> warnings)
    : grid_(grid), rho_(std::move(rho)), warnings_(std::move(warnings)) {
  const auto n = static_cast<Eigen::Index>(grid_.size());
  if (rho_.rows() != n || rho_.cols() != n) {
    throw ConfigurationError("density matrix shape does not match its grid");
  }
  if (grid_.is_narrow()) {
    warnings_.emplace_back(
        "grid narrower than +-5: Gaussian truncation error dominates");
  }
}

double DensityMatrixGrid::trace() const {
  return rho_.diagonal().real().sum() * grid_.dx();
}

double DensityMatrixGrid::purity() const {
  const double dx = grid_.dx();
  return rho_.cwiseAbs2().sum() * dx * dx;
}

RealVector DensityMatrixGrid::diagonal() const {
  return rho_.diagonal().real();
}

DensityMatrixGrid DensityMatrixGrid::normalized() const {
  const double tr = trace();
  if (!(tr > 0.0)) {
    throw ConditioningError("cannot normalise a state with non-positive trace");
  }
  return DensityMatrixGrid(grid_, rho_ / tr, warnings_);
}

InvariantReport DensityMatrixGrid::check(bool with_spectrum) const {
  return make_report(rho_, trace(), grid_.dx(), with_spectrum);
}

DensityMatrixFock::DensityMatrixFock(ComplexMatrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() < 2) {
    throw ConfigurationError("Fock density matrix must be square, dim >= 2");
  }
}

double DensityMatrixFock::trace() const { return rho_.diagonal().real().sum(); }

double DensityMatrixFock::purity() const { return rho_.cwiseAbs2().sum(); }

double DensityMatrixFock::tail_mass() const {
  const auto d = rho_.rows();
  return rho_(d - 2, d - 2).real() + rho_(d - 1, d - 1).real();
}

InvariantReport DensityMatrixFock::check() const {
  // A truncated Fock matrix may miss up to the projection tolerance.
  auto report = make_report(rho_, trace(), 1.0, true, kFockTailTol);
  report.ok = report.ok && tail_mass() < kFockTailTol;
  return report;
}

double GaussianSpec::variance_x() const {
  switch (kind) {
    case GaussianKind::ground: return 0.5;
    case GaussianKind::thermal: return 0.5 * (1.0 + 2.0 * nbar);
    case GaussianKind::momentum_squeezed: return 0.5 * std::exp(2.0 * r);
    case GaussianKind::position_squeezed: return 0.5 * std::exp(-2.0 * r);
  }
  return 0.5;
}

double GaussianSpec::variance_p() const {
  switch (kind) {
    case GaussianKind::ground: return 0.5;
    case GaussianKind::thermal: return 0.5 * (1.0 + 2.0 * nbar);
    case GaussianKind::momentum_squeezed: return 0.5 * std::exp(-2.0 * r);
    case GaussianKind::position_squeezed: return 0.5 * std::exp(2.0 * r);
  }
  return 0.5;
}

Complex gaussian_kernel(const GaussianSpec& spec, double x, double xp) {
  const double vx = spec.variance_x();
  const double vp = spec.variance_p();
  const double centre = 0.5 * (x + xp) - spec.mean_x;
  const double xi = x - xp;
  const double magnitude =
      std::exp(-centre * centre / (2.0 * vx) - 0.5 * vp * xi * xi) /
      std::sqrt(2.0 * constants::pi * vx);
  return std::polar(magnitude, spec.mean_p * xi);
}

DensityMatrixGrid make_gaussian(const QuadratureGrid& grid,
                                const GaussianSpec& spec) {
  if (!(spec.nbar >= 0.0)) throw DomainError("nbar must be non-negative");
  if (!(spec.r >= 0.0)) throw DomainError("squeezing parameter must be >= 0");
  const auto n = static_cast<Eigen::Index>(grid.size());
  ComplexMatrix rho(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double xp = grid.x(static_cast<std::size_t>(j));
    for (Eigen::Index i = 0; i < n; ++i) {
      rho(i, j) = gaussian_kernel(spec, grid.x(static_cast<std::size_t>(i)), xp);
    }
  }
  // Renormalise away the tail mass that falls outside the grid.
  return DensityMatrixGrid(grid, std::move(rho)).normalized();
}

DensityMatrixGrid make_ground(const QuadratureGrid& grid) {
  return make_gaussian(grid, GaussianSpec{});
}

DensityMatrixGrid make_thermal(const QuadratureGrid& grid, double nbar) {
  GaussianSpec spec;
  spec.kind = GaussianKind::thermal;
  spec.nbar = nbar;
  return make_gaussian(grid, spec);
}

DensityMatrixGrid make_squeezed(const QuadratureGrid& grid, double r,
                                GaussianKind kind) {
  if (kind != GaussianKind::momentum_squeezed &&
      kind != GaussianKind::position_squeezed) {
    throw ContractError("make_squeezed needs a squeezed GaussianKind");
  }
  GaussianSpec spec;
  spec.kind = kind;
  spec.r = r;
  return make_gaussian(grid, spec);
}

RealMatrix hermite_functions(const RealVector& x, std::size_t dim) {
  const auto n_points = x.size();
  const auto d = static_cast<Eigen::Index>(dim);
  RealMatrix psi(n_points, d);
  const double norm0 = std::pow(constants::pi, -0.25);
  for (Eigen::Index i = 0; i < n_points; ++i) {
    const double xi = x(i);
    double prev = 0.0;
    double cur = norm0 * std::exp(-0.5 * xi * xi);
    psi(i, 0) = cur;
    for (Eigen::Index k = 1; k < d; ++k) {
      const double kk = static_cast<double>(k);
      const double next =
          std::sqrt(2.0 / kk) * xi * cur - std::sqrt((kk - 1.0) / kk) * prev;
      prev = cur;
      cur = next;
      psi(i, k) = cur;
    }
  }
  return psi;
}

DensityMatrixFock grid_to_fock(const DensityMatrixGrid& state,
                               std::size_t dim) {
  const auto& grid = state.grid();
  const RealMatrix psi = hermite_functions(grid.points(), dim);
  const double dx = grid.dx();
  const ComplexMatrix psic = psi.cast<Complex>();
  ComplexMatrix rho = psic.transpose() * state.rho() * psic * (dx * dx);
  DensityMatrixFock fock(std::move(rho));
  const double lost = std::abs(state.trace() - fock.trace());
  const double tail = fock.tail_mass();
  if (tail >= kFockTailTol || lost >= kFockTailTol) {
    std::ostringstream msg;
    msg << "Fock truncation at dim " << dim << " loses mass: edge tail "
        << tail << ", trace deficit " << lost;
    throw TruncationError(msg.str(), std::max(tail, lost));
  }
  return fock;
}

DensityMatrixGrid fock_to_grid(const DensityMatrixFock& state,
                               const QuadratureGrid& grid) {
  const RealMatrix psi = hermite_functions(grid.points(), state.dim());
  const ComplexMatrix psic = psi.cast<Complex>();
  ComplexMatrix rho = psic * state.rho() * psic.transpose();
  return DensityMatrixGrid(grid, std::move(rho));
}

MomentumDensity momentum_density(const DensityMatrixGrid& state) {
  const auto& grid = state.grid();
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::FFT<double> fft;
  std::vector<Complex> in(static_cast<std::size_t>(n));
  std::vector<Complex> out;

  // A = F ρ (transform every column), then C = F A†; diag(F ρ F†) = conj(diag C).
  ComplexMatrix a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) in[static_cast<std::size_t>(i)] = state.rho()(i, j);
    fft.fwd(out, in);
    for (Eigen::Index i = 0; i < n; ++i) a(i, j) = out[static_cast<std::size_t>(i)];
  }
  RealVector diag(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    // Column m of A† is the conjugated row m of A; keep entry m of its FFT.
    for (Eigen::Index j = 0; j < n; ++j) in[static_cast<std::size_t>(j)] = std::conj(a(m, j));
    fft.fwd(out, in);
    diag(m) = out[static_cast<std::size_t>(m)].real();
  }

  const double dk = 2.0 * constants::pi / (static_cast<double>(n) * grid.dx());
  MomentumDensity result;
  result.p.resize(n);
  result.density.resize(n);
  const Eigen::Index half = n / 2;
  for (Eigen::Index s = 0; s < n; ++s) {
    const Eigen::Index m = s - half;               // signed frequency index
    const Eigen::Index slot = (m + n) % n;         // FFT output slot
    result.p(s) = static_cast<double>(m) * dk;
    result.density(s) = diag(slot);
  }
  const double total = result.density.sum() * dk;
  result.density /= total;
  return result;
}

Moments moments(const DensityMatrixGrid& state) {
  const auto& grid = state.grid();
  const RealVector xs = grid.points();
  const RealVector diag = state.diagonal();
  const double mass = diag.sum();
  Moments m;
  m.mean_x = xs.dot(diag) / mass;
  m.var_x = (xs.array() - m.mean_x).square().matrix().dot(diag) / mass;

  const auto mom = momentum_density(state);
  const double pmass = mom.density.sum();
  m.mean_p = mom.p.dot(mom.density) / pmass;
  m.var_p = (mom.p.array() - m.mean_p).square().matrix().dot(mom.density) / pmass;
  return m;
}

}  // namespace optomech
