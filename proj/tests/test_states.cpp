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
#include <random>
#include <vector>

#include <doctest.h>

#include "optomech/errors.hpp"
#include "optomech/states.hpp"

using namespace optomech;

namespace {

constexpr double kPi = 3.14159265358979323846;

GaussianSpec thermal(double nbar) {
  GaussianSpec s;
  s.kind = GaussianKind::thermal;
  s.nbar = nbar;
  return s;
}

GaussianSpec squeezed(double r, GaussianKind kind = GaussianKind::momentum_squeezed) {
  GaussianSpec s;
  s.kind = kind;
  s.r = r;
  return s;
}

// Hermite functions from the stable recurrence, kept local to the test.
std::vector<std::vector<double>> hermite_table(const QuadratureGrid& g, int count) {
  std::vector<std::vector<double>> psi(count, std::vector<double>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.x(i);
    psi[0][i] = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
    psi[1][i] = std::sqrt(2.0) * x * psi[0][i];
    for (int n = 1; n + 1 < count; ++n) {
      psi[n + 1][i] = std::sqrt(2.0 / (n + 1)) * x * psi[n][i] -
                      std::sqrt(static_cast<double>(n) / (n + 1)) * psi[n - 1][i];
    }
  }
  return psi;
}

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("grid construction") {
  const auto g = QuadratureGrid::standard();
  CHECK(g.size() == 512);
  CHECK(g.dx() == doctest::Approx(16.0 / 511.0));
  CHECK(g.x(0) == -8.0);
  CHECK(g.x(511) == doctest::Approx(8.0));
  CHECK_THROWS_AS(QuadratureGrid(8.0, 500), ConfigurationError);
  CHECK_THROWS_AS(QuadratureGrid(-1.0, 512), std::invalid_argument);
}

TEST_CASE("ground, thermal and squeezed moments") {
  const auto g = QuadratureGrid::standard();
  const auto ground = make_ground(g);
  CHECK(ground.trace() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ground.purity() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(moments(ground).var_x == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(moments(ground).var_p == doctest::Approx(0.5).epsilon(1e-8));

  const auto th = make_thermal(QuadratureGrid(16.0, 1024), 2.0);
  CHECK(moments(th).var_x == doctest::Approx(2.5).epsilon(1e-10));
  CHECK(th.purity() == doctest::Approx(0.2).epsilon(1e-8));

  const auto sq = make_gaussian(g, squeezed(0.5));
  CHECK(moments(sq).var_x == doctest::Approx(std::exp(1.0) / 2.0).epsilon(1e-8));
  CHECK(moments(sq).var_p == doctest::Approx(std::exp(-1.0) / 2.0).epsilon(1e-8));
  const auto xs = make_gaussian(g, squeezed(0.5, GaussianKind::position_squeezed));
  CHECK(moments(xs).var_x == doctest::Approx(std::exp(-1.0) / 2.0).epsilon(1e-8));
}

TEST_CASE("thermal kernel equals the Fock-basis sum") {
  const auto g = QuadratureGrid::standard();
  const auto psi = hermite_table(g, 120);
  const double nbar = 2.0;
  const auto spec = thermal(nbar);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); i += 3) {
    for (std::size_t k = 0; k < g.size(); k += 5) {
      double sum = 0.0;
      for (int n = 0; n < 120; ++n) {
        sum += std::pow(nbar, n) / std::pow(nbar + 1.0, n + 1) * psi[n][i] * psi[n][k];
      }
      worst = std::max(worst, std::abs(gaussian_kernel(spec, g.x(i), g.x(k)) - sum));
    }
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("random Gaussian states satisfy the invariants") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto g = QuadratureGrid::standard();
  for (int trial = 0; trial < 12; ++trial) {
    GaussianSpec s;
    s.kind = static_cast<GaussianKind>(trial % 4);
    s.nbar = 1.5 * unit(rng);
    s.r = 0.6 * unit(rng);
    s.mean_x = unit(rng) - 0.5;
    s.mean_p = 2.0 * unit(rng) - 1.0;
    const auto state = make_gaussian(g, s);
    const auto report = state.check();
    CHECK(report.ok);
    CHECK(report.trace_error < 1e-12);
    const double expected = 1.0 / (2.0 * std::sqrt(s.variance_x() * s.variance_p()));
    CHECK(state.purity() == doctest::Approx(expected).epsilon(1e-6));
    const auto m = moments(state);
    CHECK(m.mean_x == doctest::Approx(s.mean_x).epsilon(1e-8));
    CHECK(m.mean_p == doctest::Approx(s.mean_p).epsilon(1e-6));
  }
}

TEST_CASE("grid to Fock to grid round trip") {
  const auto g = QuadratureGrid::standard();
  for (const auto& spec : {GaussianSpec{}, thermal(2.0), squeezed(0.5)}) {
    const auto state = make_gaussian(g, spec);
    const auto fock = grid_to_fock(state);
    CHECK(fock.check().ok);
    CHECK(max_abs(fock_to_grid(fock, g).rho() - state.rho()) < 1e-6);
  }
  const auto ground = grid_to_fock(make_ground(g));
  CHECK(std::abs(ground.rho()(0, 0) - 1.0) < 1e-10);
  CHECK(ground.tail_mass() < 1e-12);
}

TEST_CASE("Fock truncation is reported") {
  const auto state = make_thermal(QuadratureGrid(24.0, 1024), 10.0);
  try {
    grid_to_fock(state, 16);
    FAIL("expected a truncation error");
  } catch (const TruncationError& e) {
    CHECK(e.lost_mass() > 1e-6);
  }
}

TEST_CASE("narrow grids warn") {
  const auto narrow = make_ground(QuadratureGrid(4.0, 256));
  CHECK_FALSE(narrow.warnings().empty());
  CHECK(make_ground(QuadratureGrid::standard()).warnings().empty());
}

TEST_CASE("invariant checks flag broken matrices") {
  const auto g = QuadratureGrid::standard();
  ComplexMatrix rho = make_ground(g).rho();
  rho(3, 7) += Complex(0.0, 0.1);
  CHECK_FALSE(DensityMatrixGrid(g, rho).check().ok);
  CHECK_FALSE(DensityMatrixGrid(g, 2.0 * make_ground(g).rho()).check().ok);
  CHECK_THROWS_AS(DensityMatrixGrid(g, ComplexMatrix::Zero(3, 3)), ConfigurationError);
  CHECK_THROWS_AS(make_thermal(g, -1.0), DomainError);
}

TEST_CASE("momentum density of a displaced state") {
  GaussianSpec s;
  s.mean_p = 1.7;
  const auto state = make_gaussian(QuadratureGrid::standard(), s);
  const auto md = momentum_density(state);
  const double dp = md.p(1) - md.p(0);
  double total = 0.0;
  double mean = 0.0;
  for (Eigen::Index k = 0; k < md.p.size(); ++k) {
    total += md.density(k) * dp;
    mean += md.p(k) * md.density(k) * dp;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(mean == doctest::Approx(1.7).epsilon(1e-6));
}
