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

#include <algorithm>

#include "tpulse/cost.hpp"
#include "tpulse/errors.hpp"

using namespace tpulse;

namespace {

GeneratorProfile profile(const std::string& name) {
  for (const auto& p : reference_profiles()) {
    if (p.name == name) return p;
  }
  FAIL("missing profile " << name);
  return {};
}

}  // namespace

TEST_CASE("reference workload point counts") {
  const auto w = reference_workload();
  CHECK(waveform_points(profile("RT"), w).total == 264);
  CHECK(waveform_points(profile("Cryo"), w).total == 110);
  CHECK(waveform_points(profile("Stair"), w).total == 55);
  CHECK(waveform_points(profile("Square"), w).total == 3);
}

TEST_CASE("totals equal the sum of parts and are additive") {
  const std::vector<PulseCost> a{{"x", 13.3, 1}, {"y", 7.0, 2}};
  const std::vector<PulseCost> b{{"z", 101.7, 2}};
  auto ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  for (const auto& p : reference_profiles()) {
    const auto ra = waveform_points(p, a), rb = waveform_points(p, b), rab = waveform_points(p, ab);
    long sum = 0;
    for (long v : rab.per_pulse) sum += v;
    CHECK(rab.total == sum);
    CHECK(rab.total == ra.total + rb.total);
  }
}

TEST_CASE("ceil on fractional products") {
  const GeneratorProfile p{"p", GeneratorMode::awg, 2.4};
  // 13.3 * 2.4 = 31.92 -> 32 per quadrature
  CHECK(waveform_points(p, {{"x", 13.3, 2}}).total == 64);
  // exact products stay exact despite binary rounding
  CHECK(waveform_points(p, {{"x", 70.0, 1}}).total == 168);
}

TEST_CASE("square mode ignores the sampling rate") {
  const std::vector<PulseCost> w{{"a", 70.0, 1}, {"b", 20.0, 2}, {"c", 5.5, 1}};
  for (double rate : {0.1, 1.0, 10.0}) {
    const GeneratorProfile p{"sq", GeneratorMode::square, rate};
    CHECK(waveform_points(p, w).total == 4);
  }
  CHECK(waveform_points(GeneratorProfile{"sq", GeneratorMode::square, std::nullopt}, w).total == 4);
}

TEST_CASE("empty workload costs nothing") {
  for (const auto& p : reference_profiles()) CHECK(waveform_points(p, {}).total == 0);
}

TEST_CASE("invalid profiles and pulses are rejected") {
  CHECK_THROWS_AS(waveform_points({"x", GeneratorMode::awg, std::nullopt}, {{"a", 10.0, 1}}), Error);
  CHECK_THROWS_AS(waveform_points({"x", GeneratorMode::staircase, std::nullopt}, {{"a", 10.0, 1}}), Error);
  CHECK_THROWS_AS(waveform_points({"x", GeneratorMode::awg, -1.0}, {{"a", 10.0, 1}}), Error);
  CHECK_THROWS_AS(waveform_points({"x", GeneratorMode::awg, 1.0}, {{"a", 0.0, 1}}), Error);
  CHECK_THROWS_AS(generator_mode_from_string("dds"), Error);
}

TEST_CASE("reports render as CSV and a table") {
  const auto w = reference_workload();
  std::vector<CostReport> reps;
  for (const auto& p : reference_profiles()) reps.push_back(waveform_points(p, w));
  const auto csv = cost_csv(reps, w);
  CHECK(csv.find("264") != std::string::npos);
  const auto table = cost_table(reps, {{"note", {"a", "b", "c", "d"}}});
  for (const char* s : {"RT", "Cryo", "Stair", "Square", "264", "110", "55", "note"}) {
    CHECK(table.find(s) != std::string::npos);
  }
}
