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

#include "optomech/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "optomech/errors.hpp"

namespace optomech::io {

namespace fs = std::filesystem;

namespace {

static_assert(std::endian::native == std::endian::little,
              "state container assumes a little-endian host");

constexpr char kMagic[4] = {'O', 'M', 'D', 'M'};
constexpr std::uint32_t kVersion = 1;

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = {}) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::out | std::ios::trunc | mode);
  if (!out) throw ConfigurationError("cannot write " + path.string());
  out.precision(17);
  return out;
}

void require_object(const Json& j, const std::string& ctx) {
  if (!j.is_object()) throw ConfigurationError(ctx + ": expected a JSON object");
}

void check_keys(const Json& j, std::initializer_list<const char*> allowed,
                const std::string& ctx) {
  require_object(j, ctx);
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigurationError(ctx + "." + key + ": unknown field");
  }
}

void read_number(const Json& j, const char* key, const std::string& ctx,
                 double& target) {
  if (!j.contains(key)) return;
  const Json& v = j.at(key);
  if (!v.is_number()) {
    throw ConfigurationError(ctx + "." + key + ": expected a number");
  }
  target = v.get<double>();
}

template <typename Int>
void read_count(const Json& j, const char* key, const std::string& ctx,
                Int& target) {
  if (!j.contains(key)) return;
  const Json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigurationError(ctx + "." + key +
                             ": expected a non-negative integer");
  }
  target = v.get<Int>();
}

void read_bool(const Json& j, const char* key, const std::string& ctx,
               bool& target) {
  if (!j.contains(key)) return;
  const Json& v = j.at(key);
  if (!v.is_boolean()) {
    throw ConfigurationError(ctx + "." + key + ": expected true or false");
  }
  target = v.get<bool>();
}

const char* kind_name(GaussianKind kind) {
  switch (kind) {
    case GaussianKind::ground: return "ground";
    case GaussianKind::thermal: return "thermal";
    case GaussianKind::momentum_squeezed: return "momentum_squeezed";
    case GaussianKind::position_squeezed: return "position_squeezed";
  }
  return "ground";
}

template <typename T>
void write_raw(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::istream& in, const fs::path& path) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw ConfigurationError(path.string() + ": truncated state file");
  return value;
}

}  // namespace

Json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigurationError(path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const Json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

Json to_json(const params::SystemParams& p) {
  return {{"wavelength", p.wavelength},     {"mass", p.mass},
          {"omega_m", p.omega_m},           {"finesse", p.finesse},
          {"photon_number", p.photon_number}, {"cavity_length", p.cavity_length},
          {"reflectivity", p.reflectivity}, {"temperature", p.temperature},
          {"quality_factor", p.quality_factor}};
}

params::SystemParams system_params_from_json(const Json& j) {
  const std::string ctx = "params";
  check_keys(j,
             {"wavelength", "mass", "omega_m", "finesse", "photon_number",
              "cavity_length", "reflectivity", "temperature", "quality_factor"},
             ctx);
  params::SystemParams p;
  read_number(j, "wavelength", ctx, p.wavelength);
  read_number(j, "mass", ctx, p.mass);
  read_number(j, "omega_m", ctx, p.omega_m);
  read_number(j, "finesse", ctx, p.finesse);
  read_number(j, "photon_number", ctx, p.photon_number);
  read_number(j, "cavity_length", ctx, p.cavity_length);
  read_number(j, "reflectivity", ctx, p.reflectivity);
  read_number(j, "temperature", ctx, p.temperature);
  read_number(j, "quality_factor", ctx, p.quality_factor);
  try {
    p.validate();
  } catch (const DomainError& e) {
    throw ConfigurationError(ctx + ": " + e.what());
  }
  return p;
}

Json to_json(const params::DerivedParams& d) {
  return {{"x0", d.x0},
          {"g_lin", d.g_lin},
          {"kappa", d.kappa},
          {"g_over_kappa", d.g_over_kappa},
          {"kappa_over_omega_m", d.kappa_over_omega_m},
          {"chi_x", d.chi_x},
          {"omega_lin", d.omega_lin},
          {"g_sq", d.g_sq},
          {"chi_sq", d.chi_sq},
          {"omega_sq", d.omega_sq},
          {"nbar", d.nbar},
          {"nbar_over_q", d.nbar_over_q},
          {"delta_omega_kick", d.delta_omega_kick},
          {"kick_exceeds_linewidth", d.kick_exceeds_linewidth},
          {"pulsed_regime_warning", d.pulsed_regime_warning}};
}

Json to_json(const GaussianSpec& spec) {
  return {{"kind", kind_name(spec.kind)}, {"nbar", spec.nbar}, {"r", spec.r},
          {"mean_x", spec.mean_x},        {"mean_p", spec.mean_p}};
}

GaussianSpec gaussian_spec_from_json(const Json& j) {
  const std::string ctx = "state";
  check_keys(j, {"kind", "nbar", "r", "mean_x", "mean_p"}, ctx);
  GaussianSpec spec;
  if (j.contains("kind")) {
    if (!j.at("kind").is_string()) {
      throw ConfigurationError(ctx + ".kind: expected a string");
    }
    const auto name = j.at("kind").get<std::string>();
    bool found = false;
    for (auto k : {GaussianKind::ground, GaussianKind::thermal,
                   GaussianKind::momentum_squeezed,
                   GaussianKind::position_squeezed}) {
      if (name == kind_name(k)) {
        spec.kind = k;
        found = true;
      }
    }
    if (!found) throw ConfigurationError(ctx + ".kind: unknown kind '" + name + "'");
  }
  read_number(j, "nbar", ctx, spec.nbar);
  read_number(j, "r", ctx, spec.r);
  read_number(j, "mean_x", ctx, spec.mean_x);
  read_number(j, "mean_p", ctx, spec.mean_p);
  return spec;
}

QuadratureGrid grid_from_json(const Json& j) {
  const std::string ctx = "grid";
  check_keys(j, {"x_max", "points"}, ctx);
  double x_max = 8.0;
  std::size_t points = 512;
  read_number(j, "x_max", ctx, x_max);
  read_count(j, "points", ctx, points);
  try {
    return QuadratureGrid(x_max, points);
  } catch (const std::invalid_argument& e) {
    throw ConfigurationError(ctx + ": " + e.what());
  }
}

Json to_json(const OutcomeWindow& w) {
  return {{"center", w.center}, {"width", w.width}};
}

OutcomeWindow window_from_json(const Json& j) {
  const std::string ctx = "window";
  check_keys(j, {"center", "width"}, ctx);
  OutcomeWindow w;
  read_number(j, "center", ctx, w.center);
  read_number(j, "width", ctx, w.width);
  if (!(w.width > 0.0)) throw ConfigurationError(ctx + ".width: must be positive");
  return w;
}

Json measurement_record(const LinearPulseMeasurement& meas,
                        const std::optional<OutcomeWindow>& window) {
  return {{"chi", meas.chi},
          {"omega", meas.omega_kick},
          {"outcome", meas.outcome},
          {"window", window ? to_json(*window) : Json(nullptr)}};
}

protocol::ProtocolConfig protocol_config_from_json(const Json& j) {
  const std::string ctx = "protocol";
  check_keys(j,
             {"initial", "chi", "omega_kick", "window", "two_pulse",
              "tomography_angles", "samples_per_angle", "chi_p", "n_runs",
              "seed", "threads", "grid"},
             ctx);
  protocol::ProtocolConfig c;
  if (j.contains("initial")) c.initial = gaussian_spec_from_json(j.at("initial"));
  read_number(j, "chi", ctx, c.chi);
  read_number(j, "omega_kick", ctx, c.omega_kick);
  if (j.contains("window")) c.window = window_from_json(j.at("window"));
  read_bool(j, "two_pulse", ctx, c.two_pulse);
  if (j.contains("tomography_angles")) {
    const Json& a = j.at("tomography_angles");
    if (a.is_number_integer() && a.get<long long>() >= 0) {
      c.tomography_angles = protocol::uniform_angles(a.get<std::size_t>());
    } else if (a.is_array()) {
      for (const auto& v : a) {
        if (!v.is_number()) {
          throw ConfigurationError(ctx + ".tomography_angles: expected numbers");
        }
        c.tomography_angles.push_back(v.get<double>());
      }
    } else {
      throw ConfigurationError(
          ctx + ".tomography_angles: expected a count or an array of angles");
    }
  }
  read_count(j, "samples_per_angle", ctx, c.samples_per_angle);
  read_number(j, "chi_p", ctx, c.chi_p);
  read_count(j, "n_runs", ctx, c.n_runs);
  read_count(j, "seed", ctx, c.seed);
  read_count(j, "threads", ctx, c.threads);
  if (j.contains("grid")) {
    const QuadratureGrid g = grid_from_json(j.at("grid"));
    c.grid_x_max = g.x_max();
    c.grid_points = g.size();
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigurationError(ctx + ": " + e.what());
  }
  return c;
}

void write_state(const fs::path& path, const DensityMatrixGrid& state) {
  auto out = open_out(path, std::ios::binary);
  out.write(kMagic, sizeof(kMagic));
  write_raw(out, kVersion);
  write_raw(out, state.grid().x_max());
  write_raw(out, static_cast<std::uint64_t>(state.grid().size()));
  const auto n = state.rho().rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < n; ++k) {
      write_raw(out, state.rho()(i, k).real());
      write_raw(out, state.rho()(i, k).imag());
    }
  }
}

DensityMatrixGrid read_state(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigurationError("cannot read " + path.string());
  char magic[4] = {};
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ConfigurationError(path.string() + ": not a state file");
  }
  const auto version = read_raw<std::uint32_t>(in, path);
  if (version != kVersion) {
    throw ConfigurationError(path.string() + ": unsupported version " +
                             std::to_string(version));
  }
  const auto x_max = read_raw<double>(in, path);
  const auto n = read_raw<std::uint64_t>(in, path);
  const QuadratureGrid grid(x_max, static_cast<std::size_t>(n));
  const auto ni = static_cast<Eigen::Index>(n);
  ComplexMatrix rho(ni, ni);
  for (Eigen::Index i = 0; i < ni; ++i) {
    for (Eigen::Index k = 0; k < ni; ++k) {
      const auto re = read_raw<double>(in, path);
      const auto im = read_raw<double>(in, path);
      rho(i, k) = Complex(re, im);
    }
  }
  return DensityMatrixGrid(grid, std::move(rho));
}

void write_diagonal_csv(const fs::path& path, const DensityMatrixGrid& state) {
  auto out = open_out(path);
  out << "x,rho\n";
  const RealVector d = state.diagonal();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    out << state.grid().x(static_cast<std::size_t>(i)) << ',' << d(i) << '\n';
  }
}

void write_pdf_csv(const fs::path& path, const OutcomePdf& pdf) {
  auto out = open_out(path);
  out << "q,P\n";
  for (std::size_t k = 0; k < pdf.q.size(); ++k) {
    out << pdf.q[k] << ',' << pdf.density[k] << '\n';
  }
}

void write_wigner_csv(const fs::path& path, const WignerGrid& wg) {
  auto out = open_out(path);
  out << wg.p_axis.size();
  for (Eigen::Index j = 0; j < wg.p_axis.size(); ++j) out << ',' << wg.p_axis(j);
  out << '\n';
  for (Eigen::Index i = 0; i < wg.x_axis.size(); ++i) {
    out << wg.x_axis(i);
    for (Eigen::Index j = 0; j < wg.p_axis.size(); ++j) out << ',' << wg.w(i, j);
    out << '\n';
  }
}

Json wigner_sidecar(const WignerGrid& wg) {
  const Negativity neg = negativity(wg);
  const auto last = [](const RealVector& v) { return v(v.size() - 1); };
  return {{"x_axis",
           {{"min", wg.x_axis(0)}, {"max", last(wg.x_axis)},
            {"points", wg.x_axis.size()}, {"step", wg.dx()}}},
          {"p_axis",
           {{"min", wg.p_axis(0)}, {"max", last(wg.p_axis)},
            {"points", wg.p_axis.size()}, {"step", wg.dp()}}},
          {"w_min", wg.w.minCoeff()},
          {"w_max", wg.w.maxCoeff()},
          {"integral", wg.integral()},
          {"imag_residue", wg.imag_residue},
          {"negativity",
           {{"min_value", neg.min_value},
            {"negative_volume", neg.negative_volume}}},
          {"layout", "gnuplot nonuniform matrix: row 0 = count, p axis; rows = x, W"}};
}

void write_pulse_csv(const fs::path& path, const pulse::PulseEnvelope& pulse,
                     const pulse::ModeFunctions& modes) {
  auto out = open_out(path);
  out << "t,alpha_in,alpha0,alpha1,alpha2\n";
  // Mode functions live on every second envelope sample.
  for (std::size_t k = 0; k < modes.alpha0.size(); ++k) {
    out << modes.axis.t(k) << ',' << pulse.samples[2 * k] << ','
        << modes.alpha0[k] << ',' << modes.alpha1[k] << ',' << modes.alpha2[k]
        << '\n';
  }
}

Json to_json(const pulse::PulseVerification& v) {
  return {{"chi_x", {{"numeric", v.chi_numeric},
                     {"closed_form", v.chi_closed_form},
                     {"relative_error", v.chi_relative_error()}}},
          {"omega_lin", {{"numeric", v.kick_numeric},
                         {"closed_form", v.kick_closed_form},
                         {"relative_error", v.kick_relative_error()}}},
          {"alpha0_norm2_kappa", v.alpha0_norm2},
          {"alpha2_norm2_kappa", v.alpha2_norm2},
          {"scale_factor", v.scale_factor},
          {"tail_ratio", v.tail_ratio}};
}

Json to_json(std::size_t index, const protocol::RunRecord& record) {
  Json j = {{"run", index},
            {"outcomes", record.outcomes},
            {"accepted", record.accepted}};
  if (record.final_state_ref) j["final_state_ref"] = *record.final_state_ref;
  return j;
}

Json to_json(const protocol::EnsembleSummary& summary) {
  Json j = {{"n_runs", summary.n_runs},
            {"n_accepted", summary.n_accepted},
            {"acceptance_rate", summary.acceptance_rate},
            {"acceptance_stderr", summary.acceptance_stderr},
            {"warnings", summary.warnings}};
  if (summary.average_state) {
    j["average_state"] = {{"trace", summary.average_state->trace()},
                          {"purity", summary.average_state->purity()}};
  }
  if (summary.wigner_negativity) {
    j["wigner"] = {{"min_value", summary.wigner_negativity->min_value},
                   {"negative_volume", summary.wigner_negativity->negative_volume}};
  }
  return j;
}

}  // namespace optomech::io
