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

#include <filesystem>
#include <fstream>
#include <string>

#include <doctest.h>

#include "optomech/errors.hpp"
#include "optomech/io.hpp"

using namespace optomech;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "optomech_io_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string first_line(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  return line;
}

}  // namespace

TEST_CASE("system parameters round trip through JSON") {
  auto p = params::table_one_inputs();
  p.finesse = 1.25e4;
  p.temperature = 0.1;
  const auto back = io::system_params_from_json(io::to_json(p));
  CHECK(back.finesse == p.finesse);
  CHECK(back.temperature == p.temperature);
  CHECK(back.mass == p.mass);
  CHECK(io::system_params_from_json(io::Json::object()).photon_number == 1.7e9);
}

TEST_CASE("config readers name the offending field") {
  try {
    io::system_params_from_json({{"mass", "heavy"}});
    FAIL("expected a configuration error");
  } catch (const ConfigurationError& e) {
    CHECK(std::string(e.what()).find("params.mass") != std::string::npos);
  }
  CHECK_THROWS_AS(io::system_params_from_json({{"colour", 1}}), ConfigurationError);
  CHECK_THROWS_AS(io::system_params_from_json({{"mass", -1.0}}), ConfigurationError);
  CHECK_THROWS_AS(io::gaussian_spec_from_json({{"kind", "cat"}}), ConfigurationError);
  CHECK_THROWS_AS(io::grid_from_json({{"points", 500}}), ConfigurationError);
  CHECK_THROWS_AS(io::window_from_json({{"center", 1.0}, {"width", 0.0}}), ConfigurationError);
}

TEST_CASE("protocol config") {
  const io::Json j = {{"initial", {{"kind", "thermal"}, {"nbar", 2.0}}},
                      {"window", {{"center", 1.5}, {"width", 0.8}}},
                      {"n_runs", 123},
                      {"seed", 7},
                      {"tomography_angles", 8},
                      {"grid", {{"x_max", 10.0}, {"points", 256}}}};
  const auto c = io::protocol_config_from_json(j);
  CHECK(c.initial.kind == GaussianKind::thermal);
  CHECK(c.initial.nbar == 2.0);
  CHECK(c.n_runs == 123);
  CHECK(c.seed == 7);
  CHECK(c.tomography_angles.size() == 8);
  CHECK(c.grid_points == 256);
  CHECK_THROWS_AS(io::protocol_config_from_json({{"n_runs", 0}}), ConfigurationError);
  CHECK_THROWS_AS(io::protocol_config_from_json({{"n_runs", -5}}), ConfigurationError);
}

TEST_CASE("state container round trip is exact") {
  const auto g = QuadratureGrid(6.0, 64);
  GaussianSpec s;
  s.mean_p = 0.9;
  const auto state = make_gaussian(g, s);
  const auto path = scratch("state.bin");
  io::write_state(path, state);
  CHECK(fs::file_size(path) == 4 + 4 + 8 + 8 + 64 * 64 * 16);
  const auto back = io::read_state(path);
  CHECK(back.grid() == g);
  CHECK((back.rho() - state.rho()).cwiseAbs().maxCoeff() == 0.0);

  std::ofstream(scratch("junk.bin")) << "not a state";
  CHECK_THROWS_AS(io::read_state(scratch("junk.bin")), ConfigurationError);
}

TEST_CASE("CSV layouts") {
  const auto g = QuadratureGrid(6.0, 32);
  const auto state = make_ground(g);
  io::write_diagonal_csv(scratch("diag.csv"), state);
  CHECK(first_line(scratch("diag.csv")) == "x,rho");

  const auto wg = wigner_transform(state);
  io::write_wigner_csv(scratch("w.csv"), wg);
  CHECK(first_line(scratch("w.csv")).rfind("32,", 0) == 0);
  const auto side = io::wigner_sidecar(wg);
  CHECK(side["x_axis"]["points"] == 32);
  CHECK(side["negativity"].contains("min_value"));

  io::write_pdf_csv(scratch("pdf.csv"), outcome_pdf(state, 1.0));
  CHECK(first_line(scratch("pdf.csv")) == "q,P");
}

TEST_CASE("records") {
  const auto rec = io::measurement_record({1.0, 0.5, 1.4}, OutcomeWindow{1.5, 0.8});
  CHECK(rec["chi"] == 1.0);
  CHECK(rec["omega"] == 0.5);
  CHECK(rec["outcome"] == 1.4);
  CHECK(rec["window"]["width"] == 0.8);
  CHECK(io::measurement_record({1.0, 0.0, 0.0}, std::nullopt)["window"].is_null());

  protocol::RunRecord run;
  run.outcomes = {1.2, 1.7};
  run.accepted = true;
  const auto j = io::to_json(4, run);
  CHECK(j["run"] == 4);
  CHECK(j["outcomes"].size() == 2);
  CHECK(j["accepted"] == true);
}
