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

#ifndef OPTOMECH_PROTOCOL_HPP
#define OPTOMECH_PROTOCOL_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "optomech/measurement.hpp"
#include "optomech/states.hpp"
#include "optomech/wigner.hpp"

namespace optomech::protocol {

/// Harmonic rotation ρ_nm → e^{-iθ(n-m)} ρ_nm, i.e.
/// (X, P) → (X cosθ + P sinθ, -X sinθ + P cosθ).
DensityMatrixFock free_evolve(const DensityMatrixFock& state, double theta);

/// Grid-state rotation. θ ≡ 0 or π (mod 2π) is applied exactly by index
/// reversal (the parity operator on a symmetric grid); other angles go
/// through the Fock basis.
DensityMatrixGrid free_evolve(const DensityMatrixGrid& state, double theta,
                              std::size_t fock_dim = kDefaultFockDim);

/// ρ(x,x′) e^{iω(x-x′)}. Throws AliasingError when |ω| > π/dx.
DensityMatrixGrid momentum_kick(const DensityMatrixGrid& state, double omega);

/// Outcomes recorded for one pass through the preparation sequence.
struct RunRecord {
  std::vector<double> outcomes;
  bool accepted = false;
  std::optional<std::size_t> final_state_ref;
};

struct TwoPulseResult {
  DensityMatrixGrid state;
  double probability = 0.0;  // joint window probability
  RunRecord record;
};

/// Window-conditioned sequence: pulse (kick +ω) → half period → pulse
/// (kick +ω). The second kick cancels the first after the parity flip.
TwoPulseResult two_pulse_prepare(
    const DensityMatrixGrid& state, double chi, double omega,
    const std::pair<OutcomeWindow, OutcomeWindow>& windows);

/// Same sequence for two exact outcomes. `probability` is the joint outcome
/// density.
TwoPulseResult two_pulse_prepare_exact(const DensityMatrixGrid& state,
                                       double chi, double omega,
                                       std::pair<double, double> outcomes);

struct ProtocolConfig {
  GaussianSpec initial;
  double chi = 1.0;
  double omega_kick = 0.0;
  OutcomeWindow window{1.5, 0.8};
  bool two_pulse = false;
  std::vector<double> tomography_angles;
  std::size_t samples_per_angle = 0;
  double chi_p = 10.0;
  std::size_t n_runs = 10000;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  double grid_x_max = 8.0;
  std::size_t grid_points = 512;

  /// Throws ContractError on n_runs = 0 or invalid angles.
  void validate() const;
};

/// Independent per-run stream: SplitMix64 over (seed, run index).
std::mt19937_64 run_stream(std::uint64_t seed, std::uint64_t run_index);

struct EnsembleSummary {
  std::size_t n_runs = 0;
  std::size_t n_accepted = 0;
  double acceptance_rate = 0.0;
  double acceptance_stderr = 0.0;  // binomial sqrt(p(1-p)/n)
  std::optional<DensityMatrixGrid> average_state;  // mixture of accepted runs
  std::optional<Negativity> wigner_negativity;
  std::vector<RunRecord> records;
  std::vector<std::string> warnings;
};

/// Monte Carlo of the preparation stage: sample each outcome from the true
/// density, condition on it exactly, accept when every outcome lies in the
/// window. Runs are split into a fixed number of contiguous chunks whose
/// partial sums are combined in chunk order, so the result does not depend
/// on `threads`. `on_record`, if set, sees every record in run order.
EnsembleSummary run_protocol(
    const ProtocolConfig& config,
    const std::function<void(std::size_t, const RunRecord&)>& on_record = {});

/// Trace distance ½ Σ|λ_i| of ρ₁ - ρ₂ (grid measure).
double trace_distance(const DensityMatrixGrid& a, const DensityMatrixGrid& b);

struct TomographySettings {
  std::vector<double> angles;
  double chi_p = 10.0;
  std::size_t samples_per_angle = 100000;
  double bin_width = 0.1;        // histogram / filtered-projection spacing
  double s_max = 8.0;            // projection half-range
  double recon_half_width = 5.0; // reconstruction window ±
  std::size_t recon_points = 101;
  std::size_t fock_dim = kDefaultFockDim;
  /// Skip sampling and use the exact blurred marginals.
  bool exact_marginals = false;
};

/// Evenly spaced angles k π / count.
std::vector<double> uniform_angles(std::size_t count);

struct TomographyResult {
  WignerGrid reconstructed;
  double correlation = 0.0;  // Pearson, against the true Wigner function
  double blur_variance = 0.0;  // 1/(2 χ_p²), reported, not deconvolved
  std::vector<std::string> warnings;
};

/// Rotated position marginal after free evolution by θ, convolved with the
/// phase-quadrature shot-noise blur N(0, 1/(2χ_p²)), on `s_axis`.
RealVector blurred_marginal(const DensityMatrixFock& state, double theta,
                            double chi_p, const RealVector& s_axis);

/// Phase-quadrature tomography by filtered back-projection over the scaled
/// samples q/χ_p.
TomographyResult tomography(const DensityMatrixGrid& state,
                            const TomographySettings& settings,
                            std::mt19937_64& rng);

}  // namespace optomech::protocol

#endif  // OPTOMECH_PROTOCOL_HPP
