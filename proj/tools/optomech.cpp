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

// optomech: command-line front end. Each subcommand reads one JSON config and
// writes its artifacts under --out.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "optomech/acceptance.hpp"
#include "optomech/errors.hpp"
#include "optomech/io.hpp"

namespace fs = std::filesystem;
using optomech::io::Json;
using namespace optomech;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Common {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "JSON config file");
  cmd->add_option("--out", c.out, "output directory")->capture_default_str();
  cmd->add_option("--seed", c.seed, "random seed (overrides the config)");
  cmd->add_option("--threads", c.threads, "worker threads");
}

Json load(const Common& c) {
  if (c.config.empty()) return Json::object();
  Json j = io::read_json(c.config);
  if (!j.is_object()) throw ConfigurationError("config must be a JSON object");
  return j;
}

void allow_only(const Json& j, std::initializer_list<const char*> keys) {
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) throw ConfigurationError("config." + key + ": unknown section");
  }
}

QuadratureGrid grid_of(const Json& j) {
  return j.contains("grid") ? io::grid_from_json(j.at("grid"))
                            : QuadratureGrid::standard();
}

DensityMatrixGrid state_of(const Json& j, const QuadratureGrid& grid) {
  const GaussianSpec spec =
      j.contains("state") ? io::gaussian_spec_from_json(j.at("state")) : GaussianSpec{};
  return make_gaussian(grid, spec);
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

// Measurement section: {chi, omega, outcome | window}.
struct MeasureSpec {
  double chi = 1.0;
  double omega = 0.0;
  std::optional<double> outcome;
  std::optional<OutcomeWindow> window;
};

MeasureSpec measure_of(const Json& j) {
  MeasureSpec m;
  if (!j.contains("measurement")) return m;
  const Json& s = j.at("measurement");
  if (!s.is_object()) throw ConfigurationError("measurement: expected an object");
  for (const auto& [key, value] : s.items()) {
    if (key == "chi" || key == "omega" || key == "outcome") {
      if (!value.is_number()) {
        throw ConfigurationError("measurement." + key + ": expected a number");
      }
    } else if (key != "window") {
      throw ConfigurationError("measurement." + key + ": unknown field");
    }
  }
  if (s.contains("chi")) m.chi = s.at("chi").get<double>();
  if (s.contains("omega")) m.omega = s.at("omega").get<double>();
  if (s.contains("outcome")) m.outcome = s.at("outcome").get<double>();
  if (s.contains("window")) m.window = io::window_from_json(s.at("window"));
  if (m.outcome && m.window) {
    throw ConfigurationError("measurement: give either outcome or window, not both");
  }
  return m;
}

int cmd_params(const Common& c) {
  const Json j = load(c);
  if (!c.config.empty() && !j.contains("params")) {
    throw ConfigurationError("config has no 'params' section");
  }
  allow_only(j, {"params", "separation"});
  const auto p = j.contains("params") ? io::system_params_from_json(j.at("params"))
                                      : params::table_one_inputs();
  const auto d = params::derive(p);
  double delta = separation_formula(0.5, 1.0, 1.5).delta.value_or(NAN);
  if (j.contains("separation")) {
    const Json& s = j.at("separation");
    if (!s.is_number()) throw ConfigurationError("separation: expected a number");
    delta = s.get<double>();
  }
  const std::string table = params::format_table(p, d, delta);
  std::cout << table;
  const fs::path out(c.out);
  Json doc = {{"inputs", io::to_json(p)}, {"derived", io::to_json(d)}};
  if (std::isfinite(delta)) {
    doc["separation"] = {{"delta", delta},
                         {"physical_m", physical_separation(delta, d.x0)}};
  }
  io::write_json(out / "params.json", doc);
  io::write_text(out / "params.txt", table);
  return 0;
}

int cmd_state(const Common& c) {
  const Json j = load(c);
  allow_only(j, {"grid", "state"});
  const auto state = state_of(j, grid_of(j));
  const auto report = state.check();
  const auto m = moments(state);
  const fs::path out(c.out);
  io::write_state(out / "state.bin", state);
  io::write_diagonal_csv(out / "state_diagonal.csv", state);
  io::write_json(out / "state.json",
                 {{"trace", state.trace()},
                  {"purity", state.purity()},
                  {"moments", {{"mean_x", m.mean_x}, {"mean_p", m.mean_p},
                               {"var_x", m.var_x}, {"var_p", m.var_p}}},
                  {"invariants", {{"hermiticity", report.hermiticity},
                                  {"trace_error", report.trace_error},
                                  {"min_eigenvalue", report.min_eigenvalue},
                                  {"ok", report.ok}}},
                  {"warnings", state.warnings()}});
  print_warnings(state.warnings());
  std::cout << "trace " << state.trace() << ", purity " << state.purity() << '\n';
  return 0;
}

int cmd_measure(const Common& c) {
  const Json j = load(c);
  allow_only(j, {"grid", "state", "measurement"});
  const auto state = state_of(j, grid_of(j));
  const MeasureSpec ms = measure_of(j);
  const fs::path out(c.out);
  const auto pdf = outcome_pdf(state, ms.chi);
  io::write_pdf_csv(out / "outcome_pdf.csv", pdf);
  Json doc = {{"record", io::measurement_record({ms.chi, ms.omega, ms.outcome.value_or(NAN)},
                                                ms.window)},
              {"pdf", {{"integral", pdf.integral()}, {"mean", pdf.mean()},
                       {"variance", pdf.central_moment(2)}}}};
  if (!ms.outcome) doc["record"]["outcome"] = nullptr;
  std::optional<DensityMatrixGrid> conditioned;
  if (ms.window) {
    auto w = condition_window(state, ms.chi, ms.omega, *ms.window);
    doc["probability"] = w.probability;
    conditioned = std::move(w.state);
  } else if (ms.outcome) {
    doc["density"] = outcome_density(state, ms.chi, *ms.outcome);
    conditioned = condition_exact(state, {ms.chi, ms.omega, *ms.outcome});
  }
  if (conditioned) {
    io::write_state(out / "conditioned_state.bin", *conditioned);
    io::write_diagonal_csv(out / "conditioned_diagonal.csv", *conditioned);
  }
  io::write_json(out / "measurement.json", doc);
  std::cout << doc.dump(2) << '\n';
  return 0;
}

int cmd_wigner(const Common& c) {
  const Json j = load(c);
  allow_only(j, {"grid", "state", "measurement", "mode", "label"});
  const auto initial = state_of(j, grid_of(j));
  const MeasureSpec ms = measure_of(j);
  std::string mode = "conditioned";
  std::string label = "state";
  if (j.contains("mode")) mode = j.at("mode").get<std::string>();
  if (j.contains("label")) label = j.at("label").get<std::string>();
  if (!j.contains("measurement") && !j.contains("mode")) mode = "initial";

  std::optional<double> probability;
  DensityMatrixGrid state = initial;
  if (mode == "conditioned") {
    if (ms.window) {
      auto w = condition_window(initial, ms.chi, ms.omega, *ms.window);
      probability = w.probability;
      state = std::move(w.state);
    } else if (ms.outcome) {
      state = condition_exact(initial, {ms.chi, ms.omega, *ms.outcome});
    } else {
      throw ConfigurationError("mode 'conditioned' needs measurement.window or .outcome");
    }
  } else if (mode == "unconditional") {
    state = uncondition(initial, ms.chi, ms.omega);
  } else if (mode != "initial") {
    throw ConfigurationError("mode: expected initial, conditioned or unconditional");
  }

  const auto wg = wigner_transform(state);
  const auto ids = check_identities(state, wg);
  Json side = io::wigner_sidecar(wg);
  side["label"] = label;
  side["mode"] = mode;
  side["identities"] = {{"normalization", ids.normalization},
                        {"marginal", ids.marginal},
                        {"purity", ids.purity},
                        {"bounded", ids.bounded}};
  if (probability) side["probability"] = *probability;
  try {
    const auto sep = measure_separation(state);
    side["separation"] = {{"degenerate", sep.degenerate},
                          {"peaks", {sep.peak_positions.first, sep.peak_positions.second}}};
    if (sep.delta) side["separation"]["delta"] = *sep.delta;
  } catch (const AmbiguityError& e) {
    side["separation"] = {{"error", e.what()}};
  }
  const fs::path out(c.out);
  io::write_wigner_csv(out / ("wigner_" + label + ".csv"), wg);
  io::write_json(out / ("wigner_" + label + ".json"), side);
  print_warnings(state.warnings());
  std::cout << "min W " << side["negativity"]["min_value"].get<double>()
            << ", negative volume "
            << side["negativity"]["negative_volume"].get<double>() << '\n';
  return 0;
}

int cmd_pulse(const Common& c) {
  const Json j = load(c);
  allow_only(j, {"params", "pulse"});
  const auto p = j.contains("params") ? io::system_params_from_json(j.at("params"))
                                      : params::table_one_inputs();
  std::vector<std::string> shapes = {"optimal", "lorentzian"};
  std::size_t points = 1u << 17;
  if (j.contains("pulse")) {
    const Json& s = j.at("pulse");
    for (const auto& [key, value] : s.items()) {
      if (key != "shape" && key != "points") {
        throw ConfigurationError("pulse." + key + ": unknown field");
      }
    }
    if (s.contains("shape")) shapes = {s.at("shape").get<std::string>()};
    if (s.contains("points")) points = s.at("points").get<std::size_t>();
  }
  const auto d = params::derive(p);
  const auto axis = pulse::make_time_axis(d.kappa, points);
  Json report = Json::object();
  const fs::path out(c.out);
  for (const auto& shape : shapes) {
    pulse::PulseEnvelope env;
    if (shape == "optimal") {
      env = pulse::optimal_sq_spectrum(d.kappa, axis);
    } else if (shape == "lorentzian") {
      env = pulse::lorentzian_spectrum(d.kappa, axis);
    } else {
      throw ConfigurationError("pulse.shape: expected optimal or lorentzian");
    }
    const auto modes = pulse::cascade_integrate(env, d.kappa);
    const auto v = pulse::verify_pulse(env, d.kappa, p.photon_number, d.g_lin);
    io::write_pulse_csv(out / ("pulse_" + shape + ".csv"), env, modes);
    report[shape] = io::to_json(v);
    std::cout << shape << ": chi_X " << v.chi_numeric << " (closed form "
              << v.chi_closed_form << "), Omega_lin " << v.kick_numeric
              << " (closed form " << v.kick_closed_form << ")\n";
  }
  io::write_json(out / "pulse_verification.json", report);
  return 0;
}

int cmd_protocol(const Common& c) {
  Json j = load(c);
  auto config = io::protocol_config_from_json(j);
  if (c.seed) config.seed = *c.seed;
  if (c.threads) config.threads = *c.threads;
  const fs::path out(c.out);
  fs::create_directories(out);
  std::ofstream records(out / "records.jsonl", std::ios::trunc);
  if (!records) throw ConfigurationError("cannot write records.jsonl");
  const auto summary = protocol::run_protocol(
      config, [&](std::size_t i, const protocol::RunRecord& r) {
        records << io::to_json(i, r).dump() << '\n';
      });
  Json doc = io::to_json(summary);
  doc["seed"] = config.seed;
  doc["window_probability"] =
      condition_window(make_gaussian(QuadratureGrid(config.grid_x_max, config.grid_points),
                                     config.initial),
                       config.chi, config.omega_kick, config.window)
          .probability;
  if (summary.average_state) {
    io::write_state(out / "average_state.bin", *summary.average_state);
    const auto wg = wigner_transform(*summary.average_state);
    io::write_wigner_csv(out / "wigner_average.csv", wg);
    io::write_json(out / "wigner_average.json", io::wigner_sidecar(wg));
    if (!config.tomography_angles.empty()) {
      protocol::TomographySettings ts;
      ts.angles = config.tomography_angles;
      ts.chi_p = config.chi_p;
      if (config.samples_per_angle > 0) ts.samples_per_angle = config.samples_per_angle;
      std::mt19937_64 rng = protocol::run_stream(config.seed, config.n_runs);
      const auto tomo = protocol::tomography(*summary.average_state, ts, rng);
      io::write_wigner_csv(out / "wigner_reconstructed.csv", tomo.reconstructed);
      doc["tomography"] = {{"correlation", tomo.correlation},
                           {"blur_variance", tomo.blur_variance},
                           {"min_value", tomo.reconstructed.w.minCoeff()},
                           {"warnings", tomo.warnings}};
      print_warnings(tomo.warnings);
    }
  }
  io::write_json(out / "summary.json", doc);
  print_warnings(summary.warnings);
  std::cout << "accepted " << summary.n_accepted << " of " << summary.n_runs
            << " (rate " << summary.acceptance_rate << " +- "
            << summary.acceptance_stderr << ")\n";
  return 0;
}

int cmd_verify(const Common& c) {
  const Json j = load(c);
  allow_only(j, {"params", "measurement", "wigner", "pulse", "protocol", "chi_target"});
  acceptance::Options options;
  if (c.seed) options.seed = *c.seed;
  if (c.threads) options.threads = *c.threads;
  if (j.contains("chi_target")) {
    if (!j.at("chi_target").is_number()) {
      throw ConfigurationError("chi_target: expected a number");
    }
    options.chi_target = j.at("chi_target").get<double>();
  }
  if (!c.config.empty()) {
    for (int id = 1; id <= acceptance::kCriterionCount; ++id) {
      const std::string module = acceptance::module_of(id);
      if (!j.contains(module)) {
        options.skip[id] = "no '" + module + "' section in config";
        std::cerr << "warning: skipping " << acceptance::name_of(id) << ": "
                  << options.skip[id] << '\n';
      }
    }
  }
  bool all_pass = true;
  Json checks = Json::array();
  acceptance::run_all(options, [&](const acceptance::Check& ch) {
    std::cout << acceptance::format_line(ch) << std::endl;
    all_pass = all_pass && ch.pass;
    checks.push_back({{"id", ch.id}, {"name", ch.name}, {"target", ch.target},
                      {"tolerance", ch.tolerance}, {"measured", ch.measured},
                      {"pass", ch.pass}, {"skipped", ch.skipped}, {"note", ch.note}});
  });
  io::write_json(fs::path(c.out) / "verify.json",
                 {{"all_pass", all_pass}, {"checks", checks}});
  return all_pass ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pulsed optomechanics simulator"};
  app.require_subcommand(1);
  Common common;
  struct Entry {
    const char* name;
    const char* help;
    int (*run)(const Common&);
  };
  const Entry entries[] = {
      {"params", "derived parameter table", cmd_params},
      {"state", "build an initial state", cmd_state},
      {"measure", "outcome pdf and conditioning", cmd_measure},
      {"wigner", "Wigner function of a prepared state", cmd_wigner},
      {"pulse", "pulse cascade verification", cmd_pulse},
      {"protocol", "Monte Carlo preparation and tomography", cmd_protocol},
      {"verify", "run the acceptance suite", cmd_verify},
  };
  std::vector<std::pair<CLI::App*, const Entry*>> commands;
  for (const auto& e : entries) {
    auto* cmd = app.add_subcommand(e.name, e.help);
    add_common(cmd, common);
    commands.emplace_back(cmd, &e);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  for (const auto& [cmd, entry] : commands) {
    if (!cmd->parsed()) continue;
    try {
      return entry->run(common);
    } catch (const Json::exception& e) {
      std::cerr << entry->name << ": config error: " << e.what() << '\n';
      return kExitUsage;
    } catch (const std::invalid_argument& e) {
      std::cerr << entry->name << ": " << e.what() << '\n';
      return kExitUsage;
    } catch (const std::exception& e) {
      std::cerr << entry->name << ": " << e.what() << '\n';
      return kExitFailure;
    }
  }
  return kExitUsage;
}
