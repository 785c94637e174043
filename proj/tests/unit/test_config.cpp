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

#include <string>

#include "tpulse/config.hpp"
#include "tpulse/errors.hpp"

using namespace tpulse;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::config_error);
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("empty text gives the defaults") {
  const auto c = parse_config("");
  CHECK(c == ExperimentConfig{});
  CHECK(c.qubits[0].freq_mhz == 7500.0);
  CHECK(c.qubits[1].anharmonicity_mhz == -420.0);
  CHECK(c.coupling_mhz == 5.0);
}

TEST_CASE("serialized configuration parses back identically") {
  ExperimentConfig c;
  c.num_qubits = 1;
  c.qubits[0].freq_mhz = 7123.456789012345;
  c.coupling_mhz = 0.1 + 0.2;
  c.decoherence = false;
  c.mode = WaveformMode::square;
  c.filter = false;
  c.study = "table4";
  c.amplitudes_mhz = {300.0, 1234.5};
  c.frontier_amplitudes_mhz = {};
  c.lengths_1q = {1, 3, 9};
  c.seed = 18446744073709551615ull;
  c.cost_pulses = {"A:1.5:2"};
  c.relative_tolerance = 1e-9;
  c.output_dir = "out dir";
  const auto back = parse_config(serialize_config(c));
  CHECK(back == c);
  CHECK(serialize_config(back) == serialize_config(c));
  CHECK(parse_config(serialize_config(ExperimentConfig{})) == ExperimentConfig{});
}

TEST_CASE("values, comments and whitespace") {
  const auto c = parse_config(R"(
# comment
[system]
  q0_freq_mhz   =  7600   
  ; indented comment
coupling_mhz=2.5
decoherence = off

[pulse]
mode = staircase
filter = no
[rb]
lengths_1q = 1, 2,4
seed = 99
)");
  CHECK(c.qubits[0].freq_mhz == 7600.0);
  CHECK(c.coupling_mhz == 2.5);
  CHECK_FALSE(c.decoherence);
  CHECK(c.mode == WaveformMode::staircase);
  CHECK_FALSE(c.filter);
  CHECK(c.lengths_1q == std::vector<int>{1, 2, 4});
  CHECK(c.seed == 99);
  CHECK_FALSE(c.filter_spec().has_value());
  CHECK(c.model().qubit(0).t1 == kInfiniteTime);
}

TEST_CASE("errors carry the line number") {
  CHECK(error_of("[system]\nbogus = 1\n").find("line 2") != std::string::npos);
  CHECK(error_of("[nowhere]\n").find("line 1") != std::string::npos);
  CHECK(error_of("q0_freq_mhz = 1\n").find("line 1") != std::string::npos);
  CHECK(error_of("[system]\ncoupling_mhz = 1\n\ncoupling_mhz = 2\n").find("line 4") != std::string::npos);
  CHECK(error_of("[system]\ncoupling_mhz = five\n").find("line 2") != std::string::npos);
  CHECK(error_of("[system]\njust words\n").find("line 2") != std::string::npos);
  CHECK(error_of("[pulse]\nmode = sawtooth\n").find("line 2") != std::string::npos);
  // comments are whole lines only
  CHECK(error_of("[system]\ncoupling_mhz = 1 # J\n").find("line 2") != std::string::npos);
}

TEST_CASE("inconsistent values are rejected") {
  CHECK_FALSE(error_of("[system]\nqubits = 3\n").empty());
  CHECK_FALSE(error_of("[system]\nlevels = 1\n").empty());
  CHECK_FALSE(error_of("[solver]\nframe = rotating\n").empty());
  CHECK_FALSE(error_of("[experiment]\nstudy = table9\n").empty());
  CHECK_FALSE(error_of("[rb]\nsequences = 1\n").empty());
  CHECK_FALSE(error_of("[rb]\nlengths_1q = \n").empty());
  CHECK_FALSE(error_of("[output]\nthreads = 0\n").empty());
  CHECK_FALSE(error_of("[experiment]\ncost_pulses = CR:70\n").empty());
  CHECK_FALSE(error_of("[system]\nq0_t2_us = 600\n").empty());
}

TEST_CASE("derived objects follow the file") {
  ExperimentConfig c;
  c.levels = 4;
  c.coupling_mhz = 3.0;
  const auto m = c.model();
  CHECK(m.num_qubits() == 2);
  CHECK(m.levels(1) == 4);
  CHECK(m.coupling() == doctest::Approx(mhz_to_rad_per_ns(3.0)));
  CHECK(c.rb_config(2).sequence_lengths == c.lengths_2q);
  CHECK(c.rb_config(1).qubits == 1);
  const auto w = c.cost_workload();
  REQUIRE(w.size() == 2);
  CHECK(w[0].name == "CR");
  CHECK(w[1].quadratures == 2);
  c.cost_pulses.clear();
  CHECK(c.cost_workload().empty());
}
