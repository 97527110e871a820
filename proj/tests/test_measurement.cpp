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

#include <doctest.h>

#include "optomech/errors.hpp"
#include "optomech/measurement.hpp"
#include "optomech/wigner.hpp"

using namespace optomech;

namespace {

constexpr double kPi = 3.14159265358979323846;

DensityMatrixGrid squeezed_state(const QuadratureGrid& g, double r) {
  GaussianSpec s;
  s.kind = GaussianKind::momentum_squeezed;
  s.r = r;
  return make_gaussian(g, s);
}

// Window probability by direct quadrature of the position density against the
// Gaussian outcome kernel: Σ_i ρ_ii dx ∫_window N(q; χx_i², 1/2) dq.
double window_probability_oracle(const DensityMatrixGrid& s, double chi,
                                 const OutcomeWindow& w) {
  const auto d = s.diagonal();
  double total = 0.0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const double m = chi * std::pow(s.grid().x(static_cast<std::size_t>(i)), 2);
    total += d(i) * s.grid().dx() * 0.5 *
             (std::erf(w.upper() - m) - std::erf(w.lower() - m));
  }
  return total;
}

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("measurement operator resolves the identity") {
  const auto g = QuadratureGrid::standard();
  // Σ_q |Υ(q)|² dq → 1 at every x.
  const double dq = 0.01;
  for (std::size_t i = 0; i < g.size(); i += 37) {
    double total = 0.0;
    for (double q = -8.0; q < 80.0; q += dq) {
      const auto u = upsilon_x_diagonal(g, {1.0, 0.3, q});
      total += std::norm(u(static_cast<Eigen::Index>(i))) * dq;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("outcome pdf moments") {
  const auto g = QuadratureGrid::standard();
  const auto ground = make_ground(g);
  for (double chi : {0.0, 0.5, 1.0, 2.0}) {
    const auto pdf = outcome_pdf(ground, chi);
    CHECK(pdf.integral() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(pdf.mean() == doctest::Approx(0.5 * chi).epsilon(1e-9));
    // Var Q = 1/2 + χ² Var(X²) with Var(X²) = 2 (1/2)² for the vacuum.
    CHECK(pdf.central_moment(2) == doctest::Approx(0.5 + 0.5 * chi * chi).epsilon(1e-8));
  }
  CHECK(outcome_density(ground, 0.0, 0.0) == doctest::Approx(1.0 / std::sqrt(kPi)));
  CHECK_THROWS_AS(outcome_pdf(ground, 1.0, 256, {-2.0, 3.0}), TruncationError);
  CHECK_THROWS_AS(outcome_pdf(ground, -1.0), DomainError);
}

TEST_CASE("reference window probabilities") {
  const auto g = QuadratureGrid::standard();
  const auto ground = condition_window(make_ground(g), 1.0, 0.0, {1.5, 0.8});
  const auto thermal = condition_window(make_thermal(g, 2.0), 1.0, 0.0, {1.5, 0.8});
  const auto squeezed = condition_window(squeezed_state(g, 0.5), 1.0, 0.0, {6.4, 0.8});
  CHECK(std::abs(ground.probability - 0.149) <= 0.003);
  CHECK(std::abs(thermal.probability - 0.145) <= 0.003);
  CHECK(std::abs(squeezed.probability - 0.011) <= 0.002);
  // The opposite squeezing orientation cannot produce the reference yield.
  GaussianSpec inverse;
  inverse.kind = GaussianKind::position_squeezed;
  inverse.r = 0.5;
  CHECK(condition_window(make_gaussian(g, inverse), 1.0, 0.0, {6.4, 0.8}).probability < 1e-4);
}

TEST_CASE("window probability against an independent erf sum") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto g = QuadratureGrid::standard();
  for (int trial = 0; trial < 10; ++trial) {
    const auto state = trial % 2 ? make_thermal(g, 1.5 * u(rng)) : squeezed_state(g, 0.6 * u(rng));
    const double chi = 0.2 + 1.8 * u(rng);
    const OutcomeWindow w{4.0 * u(rng), 0.2 + 1.5 * u(rng)};
    const auto closed = condition_window(state, chi, 0.0, w);
    CHECK(closed.probability ==
          doctest::Approx(window_probability_oracle(state, chi, w)).epsilon(1e-12));
    CHECK(closed.state.trace() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(closed.state.check(false).hermiticity < 1e-12);
  }
}

TEST_CASE("closed-form maps equal their quadrature oracles") {
  const auto g = QuadratureGrid::standard();
  const std::pair<DensityMatrixGrid, OutcomeWindow> cases[] = {
      {make_ground(g), {1.5, 0.8}},
      {make_thermal(g, 2.0), {1.5, 0.8}},
      {squeezed_state(g, 0.5), {6.4, 0.8}}};
  for (const auto& [state, window] : cases) {
    const auto a = condition_window(state, 1.0, 0.7, window);
    const auto b = condition_window_quadrature(state, 1.0, 0.7, window);
    CHECK(max_abs(a.state.rho() - b.state.rho()) < 1e-8);
    CHECK(a.probability == doctest::Approx(b.probability).epsilon(1e-9));
    CHECK(max_abs(uncondition(state, 1.0, 0.7).rho() -
                  uncondition_quadrature(state, 1.0, 0.7).rho()) < 1e-8);
  }
}

TEST_CASE("unconditional map keeps positions and adds the kick") {
  const auto g = QuadratureGrid::standard();
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 6; ++trial) {
    const auto state = make_thermal(g, u(rng));
    const double omega = 4.0 * u(rng) - 2.0;
    const auto out = uncondition(state, 0.5 + u(rng), omega);
    CHECK(out.trace() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((out.diagonal() - state.diagonal()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(moments(out).mean_p == doctest::Approx(moments(state).mean_p + omega).epsilon(1e-6));
    CHECK(out.purity() <= state.purity() + 1e-12);
  }
}

TEST_CASE("exact conditioning gives the predicted separation") {
  const auto g = QuadratureGrid(8.0, 1024);
  const auto state = condition_exact(make_ground(g), {1.0, 0.0, 1.5});
  CHECK(state.trace() == doctest::Approx(1.0).epsilon(1e-12));
  const auto report = measure_separation(state);
  REQUIRE(report.delta);
  // Population peaks at x = ±1 for these values.
  CHECK(*report.delta == doctest::Approx(2.0).epsilon(1e-3));
  CHECK_THROWS_AS(condition_exact(make_ground(g), {1.0, 0.0, -40.0}), ConditioningError);
  CHECK_THROWS_AS(condition_window(make_ground(g), 1.0, 0.0, {-40.0, 0.1}), ConditioningError);
}

TEST_CASE("zero strength leaves the state unchanged up to the kick") {
  const auto g = QuadratureGrid::standard();
  const auto state = make_thermal(g, 0.7);
  const auto out = condition_exact(state, {0.0, 0.0, 0.3});
  CHECK(max_abs(out.rho() - state.rho()) < 1e-12);
}

TEST_CASE("dispersive conditioning") {
  const auto g = QuadratureGrid::standard();
  const auto state = condition_dispersive(make_ground(g), {1.0, 0.2, 1.5, 0.0});
  CHECK(state.trace() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(state.check().ok);
  const auto d = upsilon_sq_diagonal(g, {1.0, 0.0, 1.5, 0.0});
  CHECK(d.size() == static_cast<Eigen::Index>(g.size()));
}

TEST_CASE("sampler reproduces the outcome pdf") {
  const auto g = QuadratureGrid::standard();
  const auto state = make_thermal(g, 1.0);
  const OutcomeSampler sampler(state, 1.0);
  std::mt19937_64 rng(42);
  const int n = 200000;
  double mean = 0.0;
  int inside = 0;
  const OutcomeWindow w{1.5, 0.8};
  for (int k = 0; k < n; ++k) {
    const double q = sampler(rng);
    mean += q;
    inside += w.contains(q);
  }
  mean /= n;
  const auto pdf = outcome_pdf(state, 1.0);
  const double sd = std::sqrt(pdf.central_moment(2) / n);
  CHECK(std::abs(mean - pdf.mean()) < 4.0 * sd);
  const double p = condition_window(state, 1.0, 0.0, w).probability;
  CHECK(std::abs(static_cast<double>(inside) / n - p) < 4.0 * std::sqrt(p * (1 - p) / n));
}
