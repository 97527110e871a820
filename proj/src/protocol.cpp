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

#include "optomech/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include <unsupported/Eigen/FFT>

#include "optomech/constants.hpp"
#include "optomech/errors.hpp"

namespace optomech::protocol {

namespace {

using constants::pi;

constexpr std::size_t kChunks = 16;
constexpr double kAngleTol = 1e-12;

// θ reduced to [0, 2π).
double wrap_angle(double theta) {
  double t = std::fmod(theta, 2.0 * pi);
  if (t < 0.0) t += 2.0 * pi;
  return t;
}

}  // namespace

DensityMatrixFock free_evolve(const DensityMatrixFock& state, double theta) {
  const auto d = static_cast<Eigen::Index>(state.dim());
  ComplexVector phase(d);
  for (Eigen::Index n = 0; n < d; ++n) {
    phase(n) = std::polar(1.0, -theta * static_cast<double>(n));
  }
  ComplexMatrix rho = phase.asDiagonal() * state.rho() *
                      phase.conjugate().asDiagonal();
  return DensityMatrixFock(std::move(rho));
}

DensityMatrixGrid free_evolve(const DensityMatrixGrid& state, double theta,
                              std::size_t fock_dim) {
  const double t = wrap_angle(theta);
  if (t < kAngleTol || 2.0 * pi - t < kAngleTol) return state;
  if (std::abs(t - pi) < kAngleTol) {
    ComplexMatrix flipped = state.rho().reverse();
    return DensityMatrixGrid(state.grid(), std::move(flipped), state.warnings());
  }
  const DensityMatrixFock fock = grid_to_fock(state, fock_dim);
  return fock_to_grid(free_evolve(fock, t), state.grid());
}

DensityMatrixGrid momentum_kick(const DensityMatrixGrid& state, double omega) {
  const auto& grid = state.grid();
  const double limit = pi / grid.dx();
  if (std::abs(omega) > limit) {
    std::ostringstream msg;
    msg << "kick " << omega << " exceeds the grid momentum bound " << limit;
    throw AliasingError(msg.str());
  }
  const auto n = static_cast<Eigen::Index>(grid.size());
  ComplexVector phase(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    phase(i) = std::polar(1.0, omega * grid.x(static_cast<std::size_t>(i)));
  }
  ComplexMatrix rho = phase.asDiagonal() * state.rho() *
                      phase.conjugate().asDiagonal();
  return DensityMatrixGrid(grid, std::move(rho), state.warnings());
}

TwoPulseResult two_pulse_prepare(
    const DensityMatrixGrid& state, double chi, double omega,
    const std::pair<OutcomeWindow, OutcomeWindow>& windows) {
  const double limit = pi / state.grid().dx();
  if (std::abs(omega) > limit) {
    throw AliasingError("kick exceeds the grid momentum bound");
  }
  const auto first = condition_window(state, chi, omega, windows.first);
  const auto rotated = free_evolve(first.state, pi);
  auto second = condition_window(rotated, chi, omega, windows.second);
  RunRecord record;
  record.outcomes = {windows.first.center, windows.second.center};
  record.accepted = true;
  return {std::move(second.state), first.probability * second.probability,
          std::move(record)};
}

TwoPulseResult two_pulse_prepare_exact(const DensityMatrixGrid& state,
                                       double chi, double omega,
                                       std::pair<double, double> outcomes) {
  const double p1 = outcome_density(state, chi, outcomes.first);
  const auto first = condition_exact(state, {chi, omega, outcomes.first});
  const auto rotated = free_evolve(first, pi);
  const double p2 = outcome_density(rotated, chi, outcomes.second);
  auto second = condition_exact(rotated, {chi, omega, outcomes.second});
  RunRecord record;
  record.outcomes = {outcomes.first, outcomes.second};
  record.accepted = true;
  return {std::move(second), p1 * p2, std::move(record)};
}

void ProtocolConfig::validate() const {
  if (n_runs < 1) throw ContractError("n_runs must be at least 1");
  if (!(chi >= 0.0)) throw ContractError("chi must be non-negative");
  if (!(window.width > 0.0)) throw ContractError("window width must be positive");
  for (std::size_t a = 0; a < tomography_angles.size(); ++a) {
    const double th = tomography_angles[a];
    if (!(th >= 0.0 && th < pi)) {
      throw ContractError("tomography angles must lie in [0, pi)");
    }
    for (std::size_t b = 0; b < a; ++b) {
      if (tomography_angles[b] == th) {
        throw ContractError("tomography angles must be distinct");
      }
    }
  }
}

std::mt19937_64 run_stream(std::uint64_t seed, std::uint64_t run_index) {
  // SplitMix64 finaliser over a golden-ratio stride.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (run_index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  z ^= z >> 31;
  return std::mt19937_64(z);
}

namespace {

struct Chunk {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t accepted = 0;
  ComplexMatrix sum;
  std::vector<RunRecord> records;
};

void run_chunk(const ProtocolConfig& config, const DensityMatrixGrid& initial,
               const OutcomeSampler& sampler, Chunk& chunk) {
  const auto n = static_cast<Eigen::Index>(initial.grid().size());
  chunk.records.reserve(chunk.end - chunk.begin);
  for (std::size_t run = chunk.begin; run < chunk.end; ++run) {
    auto rng = run_stream(config.seed, run);
    RunRecord record;
    const double q1 = sampler(rng);
    record.outcomes.push_back(q1);
    record.accepted = config.window.contains(q1);
    std::optional<DensityMatrixGrid> state;
    if (record.accepted) {
      state = condition_exact(initial, {config.chi, config.omega_kick, q1});
      if (config.two_pulse) {
        const auto rotated = free_evolve(*state, pi);
        const double q2 = OutcomeSampler(rotated, config.chi)(rng);
        record.outcomes.push_back(q2);
        record.accepted = config.window.contains(q2);
        if (record.accepted) {
          state = condition_exact(rotated, {config.chi, config.omega_kick, q2});
        }
      }
    }
    if (record.accepted) {
      if (chunk.sum.size() == 0) chunk.sum = ComplexMatrix::Zero(n, n);
      chunk.sum += state->rho();
      ++chunk.accepted;
    }
    chunk.records.push_back(std::move(record));
  }
}

}  // namespace

EnsembleSummary run_protocol(
    const ProtocolConfig& config,
    const std::function<void(std::size_t, const RunRecord&)>& on_record) {
  config.validate();
  const QuadratureGrid grid(config.grid_x_max, config.grid_points);
  const DensityMatrixGrid initial = make_gaussian(grid, config.initial);
  const OutcomeSampler sampler(initial, config.chi);

  const std::size_t chunk_count = std::min(kChunks, config.n_runs);
  std::vector<Chunk> chunks(chunk_count);
  for (std::size_t c = 0; c < chunk_count; ++c) {
    chunks[c].begin = c * config.n_runs / chunk_count;
    chunks[c].end = (c + 1) * config.n_runs / chunk_count;
  }

  const std::size_t threads =
      std::max<std::size_t>(1, std::min(config.threads, chunk_count));
  if (threads == 1) {
    for (auto& chunk : chunks) run_chunk(config, initial, sampler, chunk);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < chunk_count; c = next++) {
          run_chunk(config, initial, sampler, chunks[c]);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  EnsembleSummary summary;
  summary.n_runs = config.n_runs;
  ComplexMatrix total;
  for (auto& chunk : chunks) {
    summary.n_accepted += chunk.accepted;
    if (chunk.accepted > 0) {
      if (total.size() == 0) {
        total = chunk.sum;
      } else {
        total += chunk.sum;
      }
    }
    for (auto& rec : chunk.records) summary.records.push_back(std::move(rec));
  }
  if (on_record) {
    for (std::size_t i = 0; i < summary.records.size(); ++i) {
      on_record(i, summary.records[i]);
    }
  }

  const double n = static_cast<double>(summary.n_runs);
  summary.acceptance_rate = static_cast<double>(summary.n_accepted) / n;
  summary.acceptance_stderr = std::sqrt(
      summary.acceptance_rate * (1.0 - summary.acceptance_rate) / n);
  if (summary.n_accepted == 0) {
    summary.warnings.emplace_back("no run was accepted: empty ensemble");
    return summary;
  }
  total /= static_cast<double>(summary.n_accepted);
  summary.average_state = DensityMatrixGrid(grid, std::move(total));
  summary.wigner_negativity =
      negativity(wigner_transform(*summary.average_state));
  return summary;
}

double trace_distance(const DensityMatrixGrid& a, const DensityMatrixGrid& b) {
  if (!(a.grid() == b.grid())) {
    throw ContractError("trace distance needs states on the same grid");
  }
  const ComplexMatrix diff = a.rho() - b.rho();
  const ComplexMatrix herm = 0.5 * (diff + diff.adjoint()) * a.grid().dx();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm,
                                                      Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

std::vector<double> uniform_angles(std::size_t count) {
  std::vector<double> angles(count);
  for (std::size_t k = 0; k < count; ++k) {
    angles[k] = pi * static_cast<double>(k) / static_cast<double>(count);
  }
  return angles;
}

namespace {

// Rotated position density on the state's own grid points.
RealVector rotated_diagonal(const DensityMatrixFock& state, double theta,
                            const RealMatrix& psi) {
  const DensityMatrixFock rotated = free_evolve(state, theta);
  const ComplexMatrix half = psi.cast<Complex>() * rotated.rho();
  return (half.real().cwiseProduct(psi)).rowwise().sum();
}

// Frequency response of the cycles-normalised Ram-Lak kernel with a cosine
// roll-off reaching zero at the Nyquist frequency.
std::vector<Complex> ramp_filter(std::size_t length, double ds) {
  std::vector<Complex> h(length, Complex(0.0, 0.0));
  const auto len = static_cast<std::ptrdiff_t>(length);
  for (std::ptrdiff_t k = -len / 2; k < len / 2; ++k) {
    double v = 0.0;
    if (k == 0) {
      v = 1.0 / (4.0 * ds * ds);
    } else if (k % 2 != 0) {
      v = -1.0 / (pi * pi * static_cast<double>(k * k) * ds * ds);
    }
    h[static_cast<std::size_t>((k + len) % len)] = v;
  }
  Eigen::FFT<double> fft;
  std::vector<Complex> response;
  fft.fwd(response, h);
  for (std::ptrdiff_t m = 0; m < len; ++m) {
    const std::ptrdiff_t signed_m = m < len / 2 ? m : m - len;
    const double roll = std::cos(pi * static_cast<double>(std::abs(signed_m)) /
                                 static_cast<double>(len));
    response[static_cast<std::size_t>(m)] *= roll;
  }
  return response;
}

double linear_interp(const std::vector<double>& values, double s0, double ds,
                     double s) {
  const double f = (s - s0) / ds;
  if (f < 0.0 || f > static_cast<double>(values.size() - 1)) return 0.0;
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(f),
                                       values.size() - 2);
  const double t = f - static_cast<double>(i);
  return (1.0 - t) * values[i] + t * values[i + 1];
}

double pearson(const RealMatrix& a, const RealMatrix& b) {
  const double ma = a.mean();
  const double mb = b.mean();
  const RealMatrix ca = a.array() - ma;
  const RealMatrix cb = b.array() - mb;
  return ca.cwiseProduct(cb).sum() /
         std::sqrt(ca.squaredNorm() * cb.squaredNorm());
}

}  // namespace

RealVector blurred_marginal(const DensityMatrixFock& state, double theta,
                            double chi_p, const RealVector& s_axis) {
  // The marginal is evaluated on a ±8 grid of 512 points, matching the
  // default position grid.
  const QuadratureGrid grid = QuadratureGrid::standard();
  const RealVector xs = grid.points();
  const RealMatrix psi = hermite_functions(xs, state.dim());
  const RealVector marginal = rotated_diagonal(state, theta, psi);
  const double var = 0.5 / (chi_p * chi_p);
  const double norm = 1.0 / std::sqrt(2.0 * pi * var);
  RealVector out = RealVector::Zero(s_axis.size());
  for (Eigen::Index k = 0; k < s_axis.size(); ++k) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < xs.size(); ++i) {
      const double d = s_axis(k) - xs(i);
      total += marginal(i) * std::exp(-d * d / (2.0 * var));
    }
    out(k) = total * norm * grid.dx();
  }
  return out;
}

TomographyResult tomography(const DensityMatrixGrid& state,
                            const TomographySettings& settings,
                            std::mt19937_64& rng) {
  if (!(settings.chi_p > 0.0)) throw DomainError("chi_p must be positive");
  if (settings.angles.empty()) throw ContractError("tomography needs angles");
  if (!(settings.bin_width > 0.0) || !(settings.s_max > settings.bin_width)) {
    throw ConfigurationError("invalid projection binning");
  }
  TomographyResult result;
  result.blur_variance = 0.5 / (settings.chi_p * settings.chi_p);
  if (settings.angles.size() < 8) {
    result.warnings.emplace_back("fewer than 8 tomography angles");
  }

  const auto& grid = state.grid();
  const DensityMatrixFock fock = grid_to_fock(state, settings.fock_dim);
  const RealMatrix psi = hermite_functions(grid.points(), fock.dim());

  const double ds = settings.bin_width;
  const auto bins = static_cast<std::size_t>(std::lround(2.0 * settings.s_max / ds));
  const double s0 = -settings.s_max + 0.5 * ds;  // first bin centre
  RealVector centres(static_cast<Eigen::Index>(bins));
  for (std::size_t b = 0; b < bins; ++b) {
    centres(static_cast<Eigen::Index>(b)) = s0 + static_cast<double>(b) * ds;
  }

  std::size_t padded = 1;
  while (padded < 2 * bins) padded <<= 1;
  const std::vector<Complex> filter = ramp_filter(padded, ds);
  Eigen::FFT<double> fft;

  const std::size_t nr = settings.recon_points;
  const double half = settings.recon_half_width;
  const double step = 2.0 * half / static_cast<double>(nr - 1);
  WignerGrid& rec = result.reconstructed;
  rec.x_axis = RealVector::LinSpaced(static_cast<Eigen::Index>(nr), -half, half);
  rec.p_axis = rec.x_axis;
  rec.w = RealMatrix::Zero(static_cast<Eigen::Index>(nr),
                           static_cast<Eigen::Index>(nr));
  const double dtheta = pi / static_cast<double>(settings.angles.size());
  const double blur_sd = std::sqrt(result.blur_variance);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> shot(0.0, std::sqrt(0.5));

  for (double theta : settings.angles) {
    std::vector<double> projection(bins, 0.0);
    if (settings.exact_marginals) {
      const RealVector exact = blurred_marginal(fock, theta, settings.chi_p, centres);
      for (std::size_t b = 0; b < bins; ++b) {
        projection[b] = exact(static_cast<Eigen::Index>(b));
      }
    } else {
      const RealVector marginal = rotated_diagonal(fock, theta, psi);
      std::vector<double> cdf(static_cast<std::size_t>(marginal.size()));
      double running = 0.0;
      for (Eigen::Index i = 0; i < marginal.size(); ++i) {
        running += std::max(marginal(i), 0.0);
        cdf[static_cast<std::size_t>(i)] = running;
      }
      std::size_t kept = 0;
      for (std::size_t k = 0; k < settings.samples_per_angle; ++k) {
        const double u = uniform(rng) * running;
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        const auto idx = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
            it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
        const double x = grid.x(idx) + (uniform(rng) - 0.5) * grid.dx();
        const double q = settings.chi_p * x + shot(rng);
        const double s = q / settings.chi_p;
        const double f = (s + settings.s_max) / ds;
        if (f >= 0.0 && f < static_cast<double>(bins)) {
          projection[static_cast<std::size_t>(f)] += 1.0;
          ++kept;
        }
      }
      (void)kept;
      const double scale =
          1.0 / (static_cast<double>(settings.samples_per_angle) * ds);
      for (double& v : projection) v *= scale;
    }

    std::vector<Complex> buffer(padded, Complex(0.0, 0.0));
    for (std::size_t b = 0; b < bins; ++b) buffer[b] = projection[b];
    std::vector<Complex> spectrum;
    fft.fwd(spectrum, buffer);
    for (std::size_t m = 0; m < padded; ++m) spectrum[m] *= filter[m];
    std::vector<Complex> filtered;
    fft.inv(filtered, spectrum);
    std::vector<double> q(bins);
    for (std::size_t b = 0; b < bins; ++b) q[b] = filtered[b].real() * ds;

    const double c = std::cos(theta);
    const double s = std::sin(theta);
    for (std::size_t i = 0; i < nr; ++i) {
      const double x = -half + static_cast<double>(i) * step;
      for (std::size_t j = 0; j < nr; ++j) {
        const double p = -half + static_cast<double>(j) * step;
        rec.w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
            dtheta * linear_interp(q, s0, ds, x * c + p * s);
      }
    }
  }
  (void)blur_sd;

  const WignerGrid truth = wigner_transform(state);
  RealMatrix expected(rec.w.rows(), rec.w.cols());
  for (Eigen::Index i = 0; i < expected.rows(); ++i) {
    for (Eigen::Index j = 0; j < expected.cols(); ++j) {
      expected(i, j) = truth.at(rec.x_axis(i), rec.p_axis(j));
    }
  }
  result.correlation = pearson(rec.w, expected);
  if (result.correlation < 0.9) {
    std::ostringstream msg;
    msg << "reconstruction correlation " << result.correlation
        << " is low; add angles or samples";
    result.warnings.push_back(msg.str());
  }
  return result;
}

}  // namespace optomech::protocol
