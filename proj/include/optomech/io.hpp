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

#ifndef OPTOMECH_IO_HPP
#define OPTOMECH_IO_HPP

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "optomech/measurement.hpp"
#include "optomech/params.hpp"
#include "optomech/protocol.hpp"
#include "optomech/pulse.hpp"
#include "optomech/states.hpp"
#include "optomech/wigner.hpp"

namespace optomech::io {

using Json = nlohmann::json;

/// Reads a JSON document. Throws ConfigurationError on I/O or parse failure.
Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& doc);
void write_text(const std::filesystem::path& path, const std::string& text);

// Every *_from_json reader rejects unknown keys and wrong types with a
// ConfigurationError naming the offending field. Missing keys keep defaults.

Json to_json(const params::SystemParams& p);
params::SystemParams system_params_from_json(const Json& j);
Json to_json(const params::DerivedParams& d);

Json to_json(const GaussianSpec& spec);
GaussianSpec gaussian_spec_from_json(const Json& j);

QuadratureGrid grid_from_json(const Json& j);

Json to_json(const OutcomeWindow& w);
OutcomeWindow window_from_json(const Json& j);

/// {chi, omega, outcome, window}; window is null for exact outcomes.
Json measurement_record(const LinearPulseMeasurement& meas,
                        const std::optional<OutcomeWindow>& window);

protocol::ProtocolConfig protocol_config_from_json(const Json& j);

/// Binary container: "OMDM" magic, u32 version, f64 x_max, u64 n, then the
/// row-major matrix as interleaved (re, im) f64. All little-endian.
void write_state(const std::filesystem::path& path,
                 const DensityMatrixGrid& state);
DensityMatrixGrid read_state(const std::filesystem::path& path);

/// Two columns: x, rho(x,x).
void write_diagonal_csv(const std::filesystem::path& path,
                        const DensityMatrixGrid& state);

/// Two columns: q, P(q).
void write_pdf_csv(const std::filesystem::path& path, const OutcomePdf& pdf);

/// gnuplot "nonuniform matrix" layout: the first row is the column count
/// followed by the p axis; each further row is x followed by W(x, p).
void write_wigner_csv(const std::filesystem::path& path, const WignerGrid& wg);

/// Axes, extrema and negativity metrics of a Wigner grid.
Json wigner_sidecar(const WignerGrid& wg);

/// Columns t, α_in, α₀, α₁, α₂ on the mode-function time axis.
void write_pulse_csv(const std::filesystem::path& path,
                     const pulse::PulseEnvelope& pulse,
                     const pulse::ModeFunctions& modes);

Json to_json(const pulse::PulseVerification& v);

Json to_json(std::size_t index, const protocol::RunRecord& record);
Json to_json(const protocol::EnsembleSummary& summary);

}  // namespace optomech::io

#endif  // OPTOMECH_IO_HPP
