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
#include "optomech/protocol.hpp"

using namespace optomech;
using namespace optomech::protocol;

namespace {

constexpr double kPi = 3.14159265358979323846;

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

DensityMatrixGrid displaced(const QuadratureGrid& g, double mx, double mp) {
  GaussianSpec s;
  s.kind = GaussianKind::thermal;
  s.nbar = 0.3;
  s.mean_x = mx;
  s.mean_p = mp;
  return make_gaussian(g, s);
}

}  // namespace

TEST_CASE("free evolution") {
  const auto g = QuadratureGrid::standard();
  const auto vacuum = make_ground(g);
  CHECK(max_abs(free_evolve(vacuum, 0.7).rho() - vacuum.rho()) < 1e-9);

  const auto state = displaced(g, 0.8, -0.4);
  const auto flipped = free_evolve(state, kPi);
  CHECK(moments(flipped).mean_x == doctest::Approx(-0.8).epsilon(1e-10));
  CHECK(moments(flipped).mean_p == doctest::Approx(0.4).epsilon(1e-8));
  // Index reversal agrees with the Fock-basis phase map.
  const auto via_fock = fock_to_grid(free_evolve(grid_to_fock(state), kPi), g);
  CHECK(max_abs(flipped.rho() - via_fock.rho()) < 1e-6);

  // (X, P) → (X cosθ + P sinθ, ...): a kicked vacuum moves to ⟨X⟩ = Ω.
  const auto kicked = momentum_kick(vacuum, 2.0);
  const auto quarter = free_evolve(kicked, kPi / 2.0);
  CHECK(moments(quarter).mean_x == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(std::abs(moments(quarter).mean_p) < 1e-6);
  CHECK(quarter.trace() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(quarter.purity() == doctest::Approx(1.0).epsilon(1e-6));

  const auto fock = grid_to_fock(state);
  const auto turned = free_evolve(fock, 1.234);
  CHECK(turned.trace() == doctest::Approx(fock.trace()).epsilon(1e-14));
  CHECK(turned.purity() == doctest::Approx(fock.purity()).epsilon(1e-12));
}

TEST_CASE("momentum kicks") {
  const auto g = QuadratureGrid::standard();
  const auto vacuum = make_ground(g);
  CHECK(max_abs(momentum_kick(vacuum, 0.0).rho() - vacuum.rho()) == 0.0);
  const auto kicked = momentum_kick(vacuum, 3.0);
  CHECK(std::abs(moments(kicked).mean_p - 3.0) < 1e-6);
  CHECK((kicked.diagonal() - vacuum.diagonal()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(max_abs(momentum_kick(kicked, -3.0).rho() - vacuum.rho()) < 1e-12);
  CHECK_THROWS_AS(momentum_kick(vacuum, 1.1 * kPi / g.dx()), AliasingError);
}

TEST_CASE("equal kicks around a half period cancel on any input") {
  const auto g = QuadratureGrid::standard();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 6; ++trial) {
    const auto state = displaced(g, u(rng), u(rng));
    const double omega = 4.0 * u(rng);
    const auto out = momentum_kick(free_evolve(momentum_kick(state, omega), kPi), omega);
    CHECK(moments(out).mean_p == doctest::Approx(-moments(state).mean_p).epsilon(1e-8));
  }
}

TEST_CASE("two-pulse preparation") {
  const auto g = QuadratureGrid::standard();
  const auto vacuum = make_ground(g);
  const auto wide = two_pulse_prepare(vacuum, 1.0, 5.0, {{1.5, 3.0}, {1.5, 3.0}});
  CHECK(std::abs(moments(wide.state).mean_p) < 1e-6);
  CHECK(wide.probability > 0.0);
  CHECK(wide.probability < 1.0);

  const auto kin = two_pulse_prepare(vacuum, 0.0, 2.0, {{0.0, 1.0}, {0.0, 1.0}});
  CHECK(kin.state.purity() == doctest::Approx(1.0).epsilon(1e-8));

  const auto single = condition_exact(vacuum, {1.0, 0.0, 1.5});
  const auto twice = two_pulse_prepare_exact(vacuum, 1.0, 0.0, {1.5, 1.5});
  const double one_min = negativity(wigner_transform(single)).min_value;
  const double two_min = negativity(wigner_transform(twice.state)).min_value;
  CHECK(std::abs(two_min) > std::abs(one_min));
  CHECK(twice.probability ==
        doctest::Approx(outcome_density(vacuum, 1.0, 1.5) *
                        outcome_density(free_evolve(single, kPi), 1.0, 1.5)));
  CHECK_THROWS_AS(two_pulse_prepare(vacuum, 1.0, 200.0, {{1.5, 1.0}, {1.5, 1.0}}), AliasingError);
}

TEST_CASE("run streams are reproducible and distinct") {
  auto a = run_stream(1, 0);
  auto b = run_stream(1, 0);
  auto c = run_stream(1, 1);
  auto d = run_stream(2, 0);
  const auto first = a();
  CHECK(first == b());
  CHECK(first != c());
  CHECK(first != d());
}

TEST_CASE("Monte Carlo ensemble") {
  ProtocolConfig config;
  config.n_runs = 4000;
  config.seed = 12;
  const auto one = run_protocol(config);
  config.threads = 4;
  const auto four = run_protocol(config);
  REQUIRE(one.average_state);
  REQUIRE(four.average_state);
  CHECK(one.n_accepted == four.n_accepted);
  CHECK(max_abs(one.average_state->rho() - four.average_state->rho()) == 0.0);
  for (std::size_t i = 0; i < one.records.size(); ++i) {
    CHECK(one.records[i].outcomes == four.records[i].outcomes);
  }

  const auto g = QuadratureGrid::standard();
  const auto windowed = condition_window(make_ground(g), 1.0, 0.0, config.window);
  const double p = windowed.probability;
  CHECK(std::abs(one.acceptance_rate - p) <= 3.0 * std::sqrt(p * (1 - p) / 4000.0));
  CHECK(one.acceptance_stderr == doctest::Approx(std::sqrt(one.acceptance_rate *
                                                           (1 - one.acceptance_rate) / 4000.0)));
  CHECK(trace_distance(*one.average_state, windowed.state) <
        3.0 / std::sqrt(static_cast<double>(one.n_accepted)));
  REQUIRE(one.wigner_negativity);
  CHECK(one.wigner_negativity->min_value < -1e-3);
}

TEST_CASE("ensemble edge cases") {
  ProtocolConfig config;
  config.n_runs = 1;
  config.seed = 99;
  const auto a = run_protocol(config);
  const auto b = run_protocol(config);
  REQUIRE(a.records.size() == 1);
  CHECK(a.records[0].outcomes == b.records[0].outcomes);

  config.n_runs = 50;
  config.window = {-30.0, 0.5};
  const auto empty = run_protocol(config);
  CHECK(empty.n_accepted == 0);
  CHECK_FALSE(empty.average_state);
  CHECK_FALSE(empty.warnings.empty());

  config.n_runs = 0;
  CHECK_THROWS_AS(run_protocol(config), ContractError);
  config.n_runs = 10;
  config.tomography_angles = {0.0, 4.0};
  CHECK_THROWS_AS(config.validate(), ContractError);

  ProtocolConfig two;
  two.two_pulse = true;
  two.window = {1.5, 2.0};
  two.n_runs = 200;
  std::size_t seen = 0;
  const auto summary = run_protocol(two, [&](std::size_t i, const RunRecord& r) {
    CHECK(i == seen++);
    CHECK(r.outcomes.size() <= 2);
  });
  CHECK(seen == 200);
  CHECK(summary.n_accepted > 0);
}

TEST_CASE("trace distance") {
  const auto g = QuadratureGrid::standard();
  const auto vacuum = make_ground(g);
  CHECK(trace_distance(vacuum, vacuum) < 1e-12);
  ComplexMatrix rho = ComplexMatrix::Zero(8, 8);
  rho(1, 1) = 1.0;
  const auto one = fock_to_grid(DensityMatrixFock(rho), g);
  CHECK(trace_distance(vacuum, one) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(trace_distance(vacuum, make_ground(QuadratureGrid(8.0, 256))), ContractError);
}

TEST_CASE("blurred marginal equals the analytic convolution") {
  GaussianSpec spec;
  spec.kind = GaussianKind::thermal;
  spec.nbar = 0.6;
  const auto fock = grid_to_fock(make_gaussian(QuadratureGrid::standard(), spec));
  const double chi_p = 4.0;
  const double var = spec.variance_x() + 0.5 / (chi_p * chi_p);
  const RealVector s = RealVector::LinSpaced(81, -4.0, 4.0);
  const RealVector m = blurred_marginal(fock, 0.0, chi_p, s);
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    const double expected = std::exp(-s(k) * s(k) / (2.0 * var)) / std::sqrt(2.0 * kPi * var);
    CHECK(m(k) == doctest::Approx(expected).epsilon(1e-8));
  }
}

TEST_CASE("tomography") {
  const auto g = QuadratureGrid::standard();
  TomographySettings settings;
  settings.angles = uniform_angles(16);
  settings.exact_marginals = true;
  std::mt19937_64 rng(4);
  GaussianSpec sq;
  sq.kind = GaussianKind::momentum_squeezed;
  sq.r = 0.5;
  GaussianSpec th;
  th.kind = GaussianKind::thermal;
  th.nbar = 1.0;
  for (const auto& spec : {GaussianSpec{}, sq, th}) {
    const auto r = tomography(make_gaussian(g, spec), settings, rng);
    CHECK(r.correlation >= 0.99);
    CHECK(r.blur_variance == doctest::Approx(0.005));
  }

  settings.exact_marginals = false;
  settings.samples_per_angle = 100000;
  const auto sampled = tomography(make_ground(g), settings, rng);
  CHECK(sampled.correlation >= 0.98);
  CHECK(sampled.warnings.empty());

  settings.angles = uniform_angles(4);
  settings.samples_per_angle = 2000;
  const auto sparse = tomography(make_ground(g), settings, rng);
  CHECK_FALSE(sparse.warnings.empty());

  settings.chi_p = 0.0;
  CHECK_THROWS_AS(tomography(make_ground(g), settings, rng), DomainError);
}
