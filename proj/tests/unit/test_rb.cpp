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

#include <cmath>
#include <nlohmann/json.hpp>
#include <random>

#include "tpulse/calibration.hpp"
#include "tpulse/errors.hpp"
#include "tpulse/rb.hpp"

using namespace tpulse;

namespace {

SystemModel qubit(int levels = 3) {
  return SystemModel({TransmonParams::from_mhz(7500, -380, kInfiniteTime, kInfiniteTime, levels)});
}

SystemModel pair() {
  return SystemModel({TransmonParams::from_mhz(7500, -380, 260, 170),
                      TransmonParams::from_mhz(8500, -420, 260, 170)},
                     mhz_to_rad_per_ns(5.0));
}

GateSet nominal(int qubits) {
  GateSet g;
  g.qubits = qubits;
  for (int q = 0; q < qubits; ++q) {
    DragTemplate d;
    d.amplitude = 25.0;
    g.x90.push_back(d);
    g.drive_freq.push_back(q == 0 ? 7500.0 : 8500.0);
  }
  if (qubits == 2) {
    CrTemplate cr;
    cr.flat_time = 100.0;
    g.cr = cr;
  }
  return g;
}

}  // namespace

TEST_CASE("infidelity from decay") {
  CHECK(rb_infidelity(1.0, 1) == 0.0);
  CHECK(rb_infidelity(0.99, 1) == doctest::Approx(0.005));
  CHECK(rb_infidelity(0.99, 2) == doctest::Approx(0.0075));
}

TEST_CASE("decay fit recovers synthetic parameters within 3 standard errors") {
  // 20 noisy samples per length, 1% noise
  std::vector<double> m;
  for (int x : {1, 2, 4, 8, 16, 32, 64, 128}) {
    for (int k = 0; k < 20; ++k) m.push_back(x);
  }
  int within = 0;
  for (int seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(1000 + seed);
    std::normal_distribution<double> noise(0.0, 0.01);
    std::vector<double> y;
    for (double x : m) y.push_back(0.45 * std::pow(0.985, x) + 0.52 + noise(rng));
    const auto f = fit_decay(m, y);
    REQUIRE(f.ok);
    CHECK(f.decay_stderr > 0.0);
    if (std::abs(f.decay - 0.985) <= 3.0 * f.decay_stderr) ++within;
  }
  MESSAGE("seeds within 3 SE: " << within);
  CHECK(within == 100);
}

TEST_CASE("decay fit on exact data and degenerate inputs") {
  const std::vector<double> m{1, 2, 4, 8, 16, 32};
  std::vector<double> y;
  for (double x : m) y.push_back(0.5 * std::pow(0.97, x) + 0.5);
  const auto f = fit_decay(m, y);
  CHECK(f.ok);
  CHECK(f.decay == doctest::Approx(0.97).epsilon(1e-8));
  CHECK(f.baseline == doctest::Approx(0.5).epsilon(1e-6));

  const auto flat = fit_decay(m, std::vector<double>(m.size(), 1.0));
  CHECK(flat.decay == 1.0);
  CHECK(flat.ok);

  CHECK_THROWS_AS(fit_decay({1, 2}, {1.0, 0.9}), Error);
  CHECK_THROWS_AS(fit_decay({1, 2, 3}, {1.0, 0.9}), Error);
}

TEST_CASE("shallow decay falls back to the fixed baseline") {
  const std::vector<double> m{1, 2, 4, 8};
  std::vector<double> y;
  for (double x : m) y.push_back(0.75 * std::pow(0.995, x) + 0.25);
  const auto f = fit_decay(m, y, 0.25);
  CHECK(f.ok);
  CHECK(f.baseline == doctest::Approx(0.25));
  CHECK(f.decay == doctest::Approx(0.995).epsilon(1e-6));
}

TEST_CASE("symbolic backend gives unit survival") {
  RbConfig c;
  c.sequence_lengths = {1, 2, 4, 8, 16};
  c.sequences_per_length = 5;
  RbOptions o;
  o.backend = RbBackend::symbolic;
  o.bootstrap = 20;
  for (int qubits : {1, 2}) {
    c.qubits = qubits;
    const auto model = qubits == 1 ? qubit() : pair();
    const auto r = run_rb(model, nominal(qubits), c, o);
    for (double s : r.mean_survival) CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.fit.decay == doctest::Approx(1.0));
    CHECK(r.infidelity == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("depolarizing backend recovers the channel parameter") {
  RbConfig c;
  c.sequence_lengths = {1, 2, 4, 8, 16, 32, 64};
  c.sequences_per_length = 6;
  RbOptions o;
  o.backend = RbBackend::depolarizing;
  o.bootstrap = 50;
  for (int qubits : {1, 2}) {
    for (double p : {0.999, 0.99, 0.97}) {
      c.qubits = qubits;
      o.depolarizing_p = p;
      const auto model = qubits == 1 ? qubit() : pair();
      const auto r = run_rb(model, nominal(qubits), c, o);
      const double tol = std::max(2.0 * r.fit.decay_stderr, 1e-9);
      CHECK(std::abs(r.fit.decay - p) <= tol);
      // survival decreases with length
      for (std::size_t i = 1; i < r.mean_survival.size(); ++i) {
        CHECK(r.mean_survival[i] <= r.mean_survival[i - 1] + 1e-12);
      }
      const double d = qubits == 1 ? 2.0 : 4.0;
      CHECK(r.infidelity == doctest::Approx(100.0 * (d - 1) * (1 - p) / d).epsilon(1e-6));
    }
  }
}

TEST_CASE("run_rb is reproducible and exports raw data") {
  RbConfig c;
  c.sequence_lengths = {1, 2, 4};
  c.sequences_per_length = 3;
  c.seed = 42;
  RbOptions o;
  o.backend = RbBackend::depolarizing;
  o.depolarizing_p = 0.98;
  o.bootstrap = 10;
  const auto a = run_rb(qubit(), nominal(1), c, o);
  const auto b = run_rb(qubit(), nominal(1), c, o);
  CHECK(a.raw_csv() == b.raw_csv());
  CHECK(a.samples.size() == 9);
  CHECK(a.raw_csv().find("m,sequence_index,survival") != std::string::npos);
  const auto j = nlohmann::json::parse(a.summary_json());
  CHECK(j["lengths"].size() == 3);
  CHECK(j["fit"]["decay"].get<double>() == doctest::Approx(a.fit.decay));
  CHECK(j["metadata"]["backend"] == "depolarizing");
}

TEST_CASE("pulse backend on a calibrated qubit stays close to unit survival") {
  const auto model = qubit(3);
  GateSetOptions go;
  const auto gates = calibrate_gate_set(model, go);
  RbConfig c;
  c.sequence_lengths = {1, 2, 4, 8};
  c.sequences_per_length = 3;
  RbOptions o;
  o.bootstrap = 10;
  const auto r = run_rb(model, gates, c, o);
  for (double s : r.mean_survival) CHECK(s > 0.995);
  CHECK(r.infidelity < 0.1);
}
