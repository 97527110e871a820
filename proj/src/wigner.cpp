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

#include "optomech/wigner.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/FFT>

#include "optomech/constants.hpp"
#include "optomech/errors.hpp"

namespace optomech {

namespace {

using constants::pi;

constexpr double kPeakFloor = 0.05;

double catmull_rom(double f0, double f1, double f2, double f3, double t) {
  return f1 + 0.5 * t *
                  (f2 - f0 +
                   t * (2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f3 +
                        t * (3.0 * (f1 - f2) + f3 - f0)));
}

}  // namespace

double WignerGrid::at(double x, double p) const {
  const auto nx = x_axis.size();
  const auto np = p_axis.size();
  const double fx = (x - x_axis(0)) / dx();
  const double fp = (p - p_axis(0)) / dp();
  if (fx < 0.0 || fp < 0.0 || fx > static_cast<double>(nx - 1) ||
      fp > static_cast<double>(np - 1)) {
    return 0.0;
  }
  const auto ix = std::min<Eigen::Index>(static_cast<Eigen::Index>(fx), nx - 2);
  const auto ip = std::min<Eigen::Index>(static_cast<Eigen::Index>(fp), np - 2);
  const double tx = fx - static_cast<double>(ix);
  const double tp = fp - static_cast<double>(ip);
  const auto value = [&](Eigen::Index i, Eigen::Index j) {
    if (i < 0 || j < 0 || i >= nx || j >= np) return 0.0;
    return w(i, j);
  };
  std::array<double, 4> col{};
  for (int a = 0; a < 4; ++a) {
    const Eigen::Index i = ix - 1 + a;
    col[static_cast<std::size_t>(a)] =
        catmull_rom(value(i, ip - 1), value(i, ip), value(i, ip + 1),
                    value(i, ip + 2), tp);
  }
  return catmull_rom(col[0], col[1], col[2], col[3], tx);
}

WignerGrid wigner_transform(const DensityMatrixGrid& state) {
  const auto& grid = state.grid();
  const std::size_t n = grid.size();
  if (!std::has_single_bit(n)) {
    throw ConfigurationError("Wigner transform needs a power-of-two grid");
  }
  const auto ni = static_cast<Eigen::Index>(n);
  const double dx = grid.dx();
  const double dp = pi / (static_cast<double>(n) * dx);

  WignerGrid wg;
  wg.x_axis = grid.points();
  wg.p_axis.resize(ni);
  const Eigen::Index half = ni / 2;
  for (Eigen::Index s = 0; s < ni; ++s) {
    wg.p_axis(s) = static_cast<double>(s - half) * dp;
  }
  wg.w.resize(ni, ni);

  Eigen::FFT<double> fft;
  std::vector<Complex> in(n);
  std::vector<Complex> out;
  double residue = 0.0;
  for (Eigen::Index i = 0; i < ni; ++i) {
    std::fill(in.begin(), in.end(), Complex(0.0, 0.0));
    const Eigen::Index reach = std::min(i, ni - 1 - i);
    for (Eigen::Index k = -reach; k <= reach; ++k) {
      in[static_cast<std::size_t>((k + ni) % ni)] = state.rho()(i + k, i - k);
    }
    fft.fwd(out, in);
    for (Eigen::Index s = 0; s < ni; ++s) {
      const Eigen::Index m = s - half;
      const Complex v = out[static_cast<std::size_t>((m + ni) % ni)] * (dx / pi);
      wg.w(i, s) = v.real();
      residue = std::max(residue, std::abs(v.imag()));
    }
  }
  wg.imag_residue = residue;
  return wg;
}

Negativity negativity(const WignerGrid& wg) {
  Negativity neg;
  neg.min_value = wg.w.minCoeff();
  neg.negative_volume =
      (-wg.w.array()).max(0.0).sum() * wg.dx() * wg.dp();
  return neg;
}

WignerIdentities check_identities(const DensityMatrixGrid& state,
                                  const WignerGrid& wg) {
  WignerIdentities ids;
  ids.normalization = std::abs(wg.integral() - 1.0);
  const RealVector marginal = wg.position_marginal();
  ids.marginal = (marginal - state.diagonal()).cwiseAbs().maxCoeff();
  const double w2 = wg.w.array().square().sum() * wg.dx() * wg.dp();
  ids.purity = std::abs(2.0 * pi * w2 - state.purity());
  ids.bounded = wg.w.cwiseAbs().maxCoeff() <= 1.0 / pi + 1e-6;
  return ids;
}

SeparationReport separation_formula(double sigma2, double chi, double outcome) {
  if (!(sigma2 > 0.0)) throw DomainError("position variance must be positive");
  if (!(chi > 0.0)) throw DomainError("measurement strength must be positive");
  SeparationReport report;
  const double disc = 4.0 * outcome * chi - 1.0 / sigma2;
  if (disc < 0.0) {
    report.degenerate = true;
    return report;
  }
  const double delta = std::sqrt(disc) / chi;
  report.delta = delta;
  report.peak_positions = {-0.5 * delta, 0.5 * delta};
  return report;
}

SeparationReport measure_separation(const DensityMatrixGrid& state) {
  const RealVector d = state.diagonal();
  const auto n = d.size();
  const double top = d.maxCoeff();
  const auto& grid = state.grid();

  std::vector<Eigen::Index> peaks;
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    // Ties resolve toward the point farther from the origin.
    const bool outward = grid.x(static_cast<std::size_t>(i)) >= 0.0;
    const bool left_ok = outward ? d(i) >= d(i - 1) : d(i) > d(i - 1);
    const bool right_ok = outward ? d(i) > d(i + 1) : d(i) >= d(i + 1);
    if (left_ok && right_ok && d(i) >= kPeakFloor * top) peaks.push_back(i);
  }
  // Adjacent maxima are one flat top (a centred peak on an even grid).
  std::vector<Eigen::Index> merged;
  for (Eigen::Index i : peaks) {
    if (!merged.empty() && i == merged.back() + 1) {
      merged.back() = -merged.back() - 1;  // mark as a two-point plateau
      continue;
    }
    merged.push_back(i);
  }
  peaks = std::move(merged);

  const auto refine = [&](Eigen::Index i) {
    if (i < 0) {
      const auto left = static_cast<std::size_t>(-i - 1);
      return 0.5 * (grid.x(left) + grid.x(left + 1));
    }
    const double denom = d(i - 1) - 2.0 * d(i) + d(i + 1);
    const double shift = denom != 0.0 ? 0.5 * (d(i - 1) - d(i + 1)) / denom : 0.0;
    return grid.x(static_cast<std::size_t>(i)) + shift * grid.dx();
  };

  SeparationReport report;
  if (peaks.size() > 2) {
    std::ostringstream msg;
    msg << peaks.size() << " comparable position peaks; separation is ambiguous";
    throw AmbiguityError(msg.str());
  }
  if (peaks.size() < 2) {
    report.degenerate = true;
    const double x = peaks.empty() ? 0.0 : refine(peaks.front());
    report.peak_positions = {x, x};
    return report;
  }
  const double a = refine(peaks[0]);
  const double b = refine(peaks[1]);
  report.peak_positions = {a, b};
  report.delta = std::abs(b - a);
  return report;
}

double physical_separation(double delta, double x0) {
  if (!(delta >= 0.0)) throw DomainError("separation must be non-negative");
  if (!(x0 > 0.0)) throw DomainError("zero-point extension must be positive");
  return std::sqrt(2.0) * x0 * delta;
}

double SampledDensity::integral() const {
  if (x.size() < 2) return 0.0;
  return density.sum() * (x(1) - x(0));
}

double SampledDensity::mean() const {
  return x.dot(density) / density.sum();
}

double SampledDensity::variance() const {
  const double mu = mean();
  return (x.array() - mu).square().matrix().dot(density) / density.sum();
}

SampledDensity rotated_marginal(const WignerGrid& wg, double theta,
                                const RealVector& s_axis) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double reach =
      std::hypot(std::max(std::abs(wg.x_axis(0)), std::abs(wg.x_axis(wg.x_axis.size() - 1))),
                 std::max(std::abs(wg.p_axis(0)), std::abs(wg.p_axis(wg.p_axis.size() - 1))));
  const double dt = std::min(wg.dx(), wg.dp());
  const auto steps = static_cast<Eigen::Index>(std::ceil(reach / dt));

  SampledDensity out;
  out.x = s_axis;
  out.density.resize(s_axis.size());
  for (Eigen::Index k = 0; k < s_axis.size(); ++k) {
    const double sk = s_axis(k);
    double total = 0.0;
    for (Eigen::Index m = -steps; m <= steps; ++m) {
      const double t = static_cast<double>(m) * dt;
      total += wg.at(sk * c - t * s, sk * s + t * c);
    }
    out.density(k) = total * dt;
  }
  return out;
}

SampledDensity rotated_marginal(const WignerGrid& wg, double theta) {
  return rotated_marginal(wg, theta, wg.x_axis);
}

}  // namespace optomech
