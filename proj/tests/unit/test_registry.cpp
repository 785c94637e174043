// Copyright 2026 The tpulse Authors
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

#include <doctest.h>

#include <filesystem>

#include "tpulse/errors.hpp"
#include "tpulse/registry.hpp"

using namespace tpulse;

namespace {

SystemModel pair(double t1 = 260.0) {
  return SystemModel({TransmonParams::from_mhz(7500, -380, t1, 170),
                      TransmonParams::from_mhz(8500, -420, t1, 170)},
                     mhz_to_rad_per_ns(5.0));
}

GateSet sample_gates() {
  GateSet g;
  g.qubits = 2;
  for (int q = 0; q < 2; ++q) {
    DragTemplate d;
    d.amplitude = 25.017731 + q;
    d.drag = 3.2915 - q;
    d.filter = FilterSpec{100.0, 1};
    g.x90.push_back(d);
    g.drive_freq.push_back(7497.5 + 1000 * q);
  }
  CrTemplate cr;
  cr.mode = WaveformMode::square;
  cr.amplitude = 300.0;
  cr.pulse_length = 1207.18;
  cr.filter = FilterSpec{100.0, 1};
  g.cr = cr;
  g.cnot.pre_target << std::complex<double>(0.1, 0.2), 0.3, std::complex<double>(-0.4, 1e-17), 0.5;
  g.cnot.post_target = Mat2::Identity();
  g.cnot.control_phase = -1.25;
  g.cnot.fidelity = 0.999875;
  return g;
}

}  // namespace

TEST_CASE("model hash covers the Hamiltonian and ignores decay") {
  const auto h = model_hash(pair(), 0.5);
  CHECK(h.size() == 16);
  CHECK(h == model_hash(pair(100.0), 0.5));
  CHECK(h != model_hash(pair(), 0.51));
  CHECK(h != model_hash(pair().with_levels(4), 0.5));
}

TEST_CASE("registry text round trip") {
  CalibrationRegistry r;
  r.put("abc", "x90.q0", "drag:ideal", {{"amplitude_mhz", "25.0177"}, {"drag_mhz", "3.29"}});
  r.put("abc", "cr", "square", {{"duration_ns", "1207.18"}});
  const auto back = CalibrationRegistry::parse(r.str());
  CHECK(back.size() == 2);
  REQUIRE(back.find("abc", "cr", "square") != nullptr);
  CHECK(back.find("abc", "cr", "square")->at("duration_ns") == "1207.18");
  CHECK(back.find("abc", "cr", "ideal") == nullptr);
  CHECK(back.str() == r.str());
  CHECK_THROWS_AS(r.put("a b", "g", "m", {}), Error);
  CHECK_THROWS_AS(CalibrationRegistry::parse("key = 1\n"), Error);
  CHECK_THROWS_AS(CalibrationRegistry::parse("[model=a gate=b]\n"), Error);
}

TEST_CASE("gate sets survive the registry") {
  const auto g = sample_gates();
  CalibrationRegistry r;
  const auto h = model_hash(pair(), 0.5);
  store_gate_set(r, h, "square_lpf", g);
  const auto back = load_gate_set(CalibrationRegistry::parse(r.str()), h, "square_lpf", 2);
  REQUIRE(back.has_value());
  CHECK(back->x90[1].amplitude == g.x90[1].amplitude);
  CHECK(back->x90[0].drag == g.x90[0].drag);
  CHECK(back->x90[0].filter.has_value());
  CHECK(back->drive_freq == g.drive_freq);
  REQUIRE(back->cr.has_value());
  CHECK(back->cr->mode == WaveformMode::square);
  CHECK(back->cr->pulse_length == g.cr->pulse_length);
  CHECK(back->cnot.pre_target == g.cnot.pre_target);
  CHECK(back->cnot.control_phase == g.cnot.control_phase);
  CHECK_FALSE(load_gate_set(r, h, "ideal", 2).has_value());
  CHECK_FALSE(load_gate_set(r, "other", "square_lpf", 2).has_value());
}

TEST_CASE("files: missing is empty, save then load") {
  const auto dir = std::filesystem::temp_directory_path() / "tpulse_registry_test";
  std::filesystem::remove_all(dir);
  CHECK(CalibrationRegistry::load((dir / "none.txt").string()).size() == 0);
  CalibrationRegistry r;
  r.put("m", "g", "x", {{"k", "v"}});
  r.save((dir / "reg.txt").string());
  CHECK(CalibrationRegistry::load((dir / "reg.txt").string()).str() == r.str());
  std::filesystem::remove_all(dir);
}
