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

#include "optomech/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "optomech/constants.hpp"
#include "optomech/errors.hpp"

namespace optomech {

namespace {

constexpr double kMinOutcomeProbability = 1e-12;
constexpr double kMaxClippedMass = 1e-4;

const double kQuarterRootPi = std::pow(constants::pi, -0.25);
const double kInvSqrtPi = 1.0 / std::sqrt(constants::pi);

void require_chi(double chi) {
  if (!(chi >= 0.0) || !std::isfinite(chi)) {
    throw DomainError("measurement strength must be non-negative");
  }
}

// ρ(x,x′) scaled by a(x) conj(a(x′)).
ComplexMatrix sandwich(const ComplexMatrix& rho, const ComplexVector& a) {
  return a.asDiagonal() * rho * a.conjugate().asDiagonal();
}

// e^{iΩ(x - x′)} ∘ ρ.
ComplexVector kick_phase(const QuadratureGrid& grid, double omega) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  ComplexVector phase(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    phase(i) = std::polar(1.0, omega * grid.x(static_cast<std::size_t>(i)));
  }
  return phase;
}

}  // namespace

ComplexVector upsilon_x_diagonal(const QuadratureGrid& grid,
                                 const LinearPulseMeasurement& meas) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  ComplexVector ups(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = grid.x(static_cast<std::size_t>(i));
    const double arg = meas.outcome - meas.chi * x * x;
    ups(i) = std::polar(kQuarterRootPi * std::exp(-0.5 * arg * arg),
                        meas.omega_kick * x);
  }
  return ups;
}

ComplexVector upsilon_sq_diagonal(const QuadratureGrid& grid,
                                  const DispersiveMeasurement& meas) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  ComplexVector ups(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = grid.x(static_cast<std::size_t>(i));
    const double arg = meas.outcome + meas.chi_sq * x * x;
    ups(i) = std::polar(kQuarterRootPi * std::exp(-0.5 * arg * arg),
                        -meas.omega_sq * meas.x_in * x);
  }
  return ups;
}

double OutcomePdf::integral() const {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < q.size(); ++k) {
    total += 0.5 * (density[k] + density[k + 1]);
  }
  return total * dq();
}

double OutcomePdf::mean() const {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < q.size(); ++k) {
    total += 0.5 * (q[k] * density[k] + q[k + 1] * density[k + 1]);
  }
  return total * dq();
}

double OutcomePdf::central_moment(int order) const {
  const double mu = mean();
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < q.size(); ++k) {
    total += 0.5 * (std::pow(q[k] - mu, order) * density[k] +
                    std::pow(q[k + 1] - mu, order) * density[k + 1]);
  }
  return total * dq();
}

OutcomeRange default_outcome_range(const QuadratureGrid& grid, double chi) {
  return {-6.0, chi * grid.x_max() * grid.x_max() + 6.0};
}

OutcomePdf outcome_pdf(const DensityMatrixGrid& state, double chi,
                       std::size_t n_outcomes, OutcomeRange range) {
  require_chi(chi);
  if (n_outcomes < 2 || !(range.q_max > range.q_min)) {
    throw ConfigurationError("outcome grid needs >= 2 points and q_max > q_min");
  }
  const auto& grid = state.grid();
  const RealVector diag = state.diagonal();
  const double dx = grid.dx();
  const auto n = static_cast<std::size_t>(diag.size());

  double clipped = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = chi * grid.x(i) * grid.x(i);
    const double w = diag(static_cast<Eigen::Index>(i)) * dx;
    clipped += w * 0.5 *
               (std::erfc(range.q_max - u) + std::erfc(u - range.q_min));
  }
  if (clipped > kMaxClippedMass) {
    std::ostringstream msg;
    msg << "outcome range [" << range.q_min << ", " << range.q_max
        << "] clips " << clipped << " of the probability mass";
    throw TruncationError(msg.str(), clipped);
  }

  OutcomePdf pdf;
  pdf.q.resize(n_outcomes);
  pdf.density.assign(n_outcomes, 0.0);
  const double dq =
      (range.q_max - range.q_min) / static_cast<double>(n_outcomes - 1);
  for (std::size_t k = 0; k < n_outcomes; ++k) {
    pdf.q[k] = range.q_min + static_cast<double>(k) * dq;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double u = chi * grid.x(i) * grid.x(i);
    const double w = diag(static_cast<Eigen::Index>(i)) * dx * kInvSqrtPi;
    for (std::size_t k = 0; k < n_outcomes; ++k) {
      const double d = pdf.q[k] - u;
      pdf.density[k] += w * std::exp(-d * d);
    }
  }
  return pdf;
}

OutcomePdf outcome_pdf(const DensityMatrixGrid& state, double chi) {
  return outcome_pdf(state, chi, kDefaultOutcomePoints,
                     default_outcome_range(state.grid(), chi));
}

double outcome_density(const DensityMatrixGrid& state, double chi,
                       double outcome) {
  require_chi(chi);
  const auto& grid = state.grid();
  const RealVector diag = state.diagonal();
  double p = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = outcome - chi * grid.x(i) * grid.x(i);
    p += diag(static_cast<Eigen::Index>(i)) * std::exp(-d * d);
  }
  return p * grid.dx() * kInvSqrtPi;
}

namespace {

DensityMatrixGrid condition_with(const DensityMatrixGrid& state,
                                 const ComplexVector& ups) {
  ComplexMatrix out = sandwich(state.rho(), ups);
  const double p = out.diagonal().real().sum() * state.grid().dx();
  if (!(p > kMinOutcomeProbability)) {
    std::ostringstream msg;
    msg << "outcome density " << p << " is negligible; cannot condition";
    throw ConditioningError(msg.str());
  }
  out /= p;
  return DensityMatrixGrid(state.grid(), std::move(out), state.warnings());
}

}  // namespace

DensityMatrixGrid condition_exact(const DensityMatrixGrid& state,
                                  const LinearPulseMeasurement& meas) {
  require_chi(meas.chi);
  return condition_with(state, upsilon_x_diagonal(state.grid(), meas));
}

DensityMatrixGrid condition_dispersive(const DensityMatrixGrid& state,
                                       const DispersiveMeasurement& meas) {
  require_chi(meas.chi_sq);
  return condition_with(state, upsilon_sq_diagonal(state.grid(), meas));
}

namespace {

WindowedState finish_window(const DensityMatrixGrid& state, ComplexMatrix out) {
  const double p = out.diagonal().real().sum() * state.grid().dx();
  if (!(p > kMinOutcomeProbability)) {
    std::ostringstream msg;
    msg << "window probability " << p << " is negligible; cannot condition";
    throw ConditioningError(msg.str());
  }
  out /= p;
  return {DensityMatrixGrid(state.grid(), std::move(out), state.warnings()), p};
}

void require_window(const OutcomeWindow& window) {
  if (!(window.width > 0.0)) {
    throw DomainError("outcome window width must be positive");
  }
}

}  // namespace

WindowedState condition_window(const DensityMatrixGrid& state, double chi,
                               double omega_kick, const OutcomeWindow& window) {
  require_chi(chi);
  require_window(window);
  const auto& grid = state.grid();
  const auto n = static_cast<Eigen::Index>(grid.size());
  const ComplexVector phase = kick_phase(grid, omega_kick);
  const double a = window.lower();
  const double b = window.upper();

  ComplexMatrix out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double xj = grid.x(static_cast<std::size_t>(j));
    const double v = chi * xj * xj;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double xi = grid.x(static_cast<std::size_t>(i));
      const double u = chi * xi * xi;
      const double m = 0.5 * (u + v);
      const double diff = u - v;
      const double g = std::exp(-0.25 * diff * diff) * 0.5 *
                       (std::erf(b - m) - std::erf(a - m));
      out(i, j) = state.rho()(i, j) * g * phase(i) * std::conj(phase(j));
    }
  }
  return finish_window(state, std::move(out));
}

WindowedState condition_window_quadrature(const DensityMatrixGrid& state,
                                          double chi, double omega_kick,
                                          const OutcomeWindow& window,
                                          std::size_t n_points) {
  require_chi(chi);
  require_window(window);
  if (n_points < 3 || n_points % 2 == 0) {
    throw ConfigurationError("Simpson quadrature needs an odd count >= 3");
  }
  const auto& grid = state.grid();
  const auto n = static_cast<Eigen::Index>(grid.size());
  const auto k_count = static_cast<Eigen::Index>(n_points);
  const double h = window.width / static_cast<double>(n_points - 1);

  // Rows are sqrt(w_k) Υ(q_k, x); the summed kernel is A† A transposed.
  ComplexMatrix a(k_count, n);
  for (Eigen::Index k = 0; k < k_count; ++k) {
    const double q = window.lower() + static_cast<double>(k) * h;
    double weight = (k == 0 || k == k_count - 1) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    weight *= h / 3.0;
    const ComplexVector ups =
        upsilon_x_diagonal(grid, {chi, omega_kick, q});
    a.row(k) = std::sqrt(weight) * ups.transpose();
  }
  const ComplexMatrix kernel = (a.adjoint() * a).transpose();
  ComplexMatrix out = state.rho().cwiseProduct(kernel);
  return finish_window(state, std::move(out));
}

DensityMatrixGrid uncondition(const DensityMatrixGrid& state, double chi,
                              double omega_kick) {
  require_chi(chi);
  const auto& grid = state.grid();
  const auto n = static_cast<Eigen::Index>(grid.size());
  const ComplexVector phase = kick_phase(grid, omega_kick);
  ComplexMatrix out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double xj = grid.x(static_cast<std::size_t>(j));
    for (Eigen::Index i = 0; i < n; ++i) {
      const double xi = grid.x(static_cast<std::size_t>(i));
      const double d = chi * (xi * xi - xj * xj);
      out(i, j) = state.rho()(i, j) * std::exp(-0.25 * d * d) * phase(i) *
                  std::conj(phase(j));
    }
  }
  return DensityMatrixGrid(grid, std::move(out), state.warnings());
}

DensityMatrixGrid uncondition_quadrature(const DensityMatrixGrid& state,
                                         double chi, double omega_kick,
                                         double dq) {
  require_chi(chi);
  if (!(dq > 0.0)) throw ConfigurationError("outcome spacing must be positive");
  const auto& grid = state.grid();
  const auto n = static_cast<Eigen::Index>(grid.size());
  const double q_min = -10.0;
  const double q_max = chi * grid.x_max() * grid.x_max() + 10.0;
  const auto k_count =
      static_cast<Eigen::Index>(std::ceil((q_max - q_min) / dq)) + 1;

  ComplexMatrix a(k_count, n);
  const double root_w = std::sqrt(dq);
  for (Eigen::Index k = 0; k < k_count; ++k) {
    const double q = q_min + static_cast<double>(k) * dq;
    const ComplexVector ups = upsilon_x_diagonal(grid, {chi, omega_kick, q});
    // Both ends sit deep in the Gaussian tails, so plain Riemann weights
    // equal the trapezoid rule to machine precision.
    a.row(k) = root_w * ups.transpose();
  }
  const ComplexMatrix kernel = (a.adjoint() * a).transpose();
  return DensityMatrixGrid(grid, state.rho().cwiseProduct(kernel),
                           state.warnings());
}

OutcomeSampler::OutcomeSampler(const DensityMatrixGrid& state, double chi)
    : grid_(state.grid()), chi_(chi) {
  require_chi(chi);
  const RealVector diag = state.diagonal();
  cdf_.resize(static_cast<std::size_t>(diag.size()));
  double running = 0.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    running += std::max(diag(i), 0.0);
    cdf_[static_cast<std::size_t>(i)] = running;
  }
  for (double& c : cdf_) c /= running;
}

double OutcomeSampler::sample_position(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double u = uniform(rng);
  const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  const auto idx = static_cast<std::size_t>(
      std::min<std::ptrdiff_t>(it - cdf_.begin(),
                               static_cast<std::ptrdiff_t>(cdf_.size()) - 1));
  return grid_.x(idx);
}

double OutcomeSampler::operator()(std::mt19937_64& rng) const {
  const double x = sample_position(rng);
  std::normal_distribution<double> noise(0.0, std::sqrt(0.5));
  return chi_ * x * x + noise(rng);
}

double sample_outcome(const DensityMatrixGrid& state, double chi,
                      std::mt19937_64& rng) {
  return OutcomeSampler(state, chi)(rng);
}

}  // namespace optomech
