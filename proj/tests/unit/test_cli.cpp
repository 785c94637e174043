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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = tpulse::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& text = "") const {
    const auto p = path / name;
    if (!text.empty()) std::ofstream(p) << text;
    return p.string();
  }
  std::string sub(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// CSV without the metadata comment lines
std::string body_of(const std::string& path) {
  std::istringstream in(slurp(path));
  std::string line, out;
  while (std::getline(in, line)) {
    if (!line.starts_with("#")) out += line + "\n";
  }
  return out;
}

const char* kOneQubit = "[system]\nqubits = 1\n[solver]\ndrive_scale = 0.5\n";

}  // namespace

TEST_CASE("cost reproduces the reference point counts") {
  TempDir d("tpulse_cli_cost");
  const auto r = cli({"--output", d.sub("o"), "cost"});
  CHECK(r.code == 0);
  const auto csv = slurp(d.sub("o") + "/cost.csv");
  CHECK(csv.find("waveform_points,264,110,55,3") != std::string::npos);
  CHECK(csv.find("# seed: 1") != std::string::npos);
  CHECK(r.out.find("264") != std::string::npos);
}

TEST_CASE("cost with an empty pulse list is zero points") {
  TempDir d("tpulse_cli_empty");
  const auto cfg = d.file("c.ini", "[experiment]\ncost_pulses =\n");
  CHECK(cli({"--config", cfg, "--output", d.sub("o"), "cost"}).code == 0);
  CHECK(slurp(d.sub("o") + "/cost.csv").find("waveform_points,0,0,0,0") != std::string::npos);
}

TEST_CASE("configuration and usage errors exit with 2") {
  TempDir d("tpulse_cli_errors");
  const auto bad = d.file("bad.ini", "[system]\nbogus = 1\n");
  auto r = cli({"--config", bad, "cost"});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 2") != std::string::npos);
  CHECK(cli({"--config", d.sub("missing.ini"), "cost"}).code == 2);
  CHECK(cli({"--bogus"}).code == 2);
  CHECK(cli({"--threads", "0", "cost"}).code == 2);
  CHECK(cli({"--mode", "sawtooth", "cost"}).code == 2);
  CHECK(cli({"reproduce", "table9"}).code == 2);
  CHECK(cli({}).code == 2);
  CHECK(cli({"--help"}).code == 0);
  CHECK(cli({"--version"}).code == 0);
}

TEST_CASE("dump-config applies overrides and round-trips") {
  TempDir d("tpulse_cli_dump");
  const auto r = cli({"--seed", "77", "--no-filter", "--mode", "square", "--threads", "3", "--dump-config"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("seed = 77") != std::string::npos);
  CHECK(r.out.find("filter = off") != std::string::npos);
  CHECK(r.out.find("mode = square") != std::string::npos);
  const auto again = cli({"--config", d.file("dump.ini", r.out), "--dump-config"});
  CHECK(again.code == 0);
  CHECK(again.out == r.out);
}

TEST_CASE("output directory: flag beats environment beats file") {
  TempDir d("tpulse_cli_env");
  const auto cfg = d.file("c.ini", "[output]\ndirectory = " + d.sub("from_file") + "\n");
  CHECK(cli({"--config", cfg, "cost"}).code == 0);
  CHECK(fs::exists(d.sub("from_file") + "/cost.csv"));
  ::setenv(tpulse::cli::kOutputEnv, d.sub("from_env").c_str(), 1);
  CHECK(cli({"--config", cfg, "cost"}).code == 0);
  CHECK(fs::exists(d.sub("from_env") + "/cost.csv"));
  CHECK(cli({"--config", cfg, "--output", d.sub("from_flag"), "cost"}).code == 0);
  CHECK(fs::exists(d.sub("from_flag") + "/cost.csv"));
  ::unsetenv(tpulse::cli::kOutputEnv);
}

TEST_CASE("calibration failure exits with 3") {
  TempDir d("tpulse_cli_cal");
  const auto cfg = d.file("c.ini", "[pulse]\ncr_amplitude_mhz = 0.001\n[solver]\ndrive_scale = 0.5\n");
  const auto r = cli({"--config", cfg, "--output", d.sub("o"), "calibrate"});
  CHECK(r.code == 3);
  CHECK(r.err.find("calibration") != std::string::npos);
}

TEST_CASE("fit failure exits with 4") {
  TempDir d("tpulse_cli_fit");
  const auto cfg = d.file("c.ini", std::string(kOneQubit) + "[rb]\nlengths_1q = 1, 2\nsequences = 2\nbootstrap = 5\n");
  CHECK(cli({"--config", cfg, "--output", d.sub("o"), "rb"}).code == 4);
}

TEST_CASE("identical runs give identical CSV bodies") {
  TempDir d("tpulse_cli_repro");
  const auto cfg = d.file("c.ini", std::string(kOneQubit) + "[rb]\nlengths_1q = 1, 2, 4\nsequences = 2\nbootstrap = 5\n");
  for (const char* o : {"a", "b"}) {
    REQUIRE(cli({"--config", cfg, "--output", d.sub(o), "simulate"}).code == 0);
    REQUIRE(cli({"--config", cfg, "--output", d.sub(o), "rb"}).code == 0);
  }
  for (const char* f : {"/trajectory_x90.csv", "/rb_raw.csv"}) {
    const auto a = body_of(d.sub("a") + f);
    CHECK_FALSE(a.empty());
    CHECK(a == body_of(d.sub("b") + f));
  }
  CHECK(slurp(d.sub("a") + "/rb_summary.json") == slurp(d.sub("b") + "/rb_summary.json"));
  // the registry from the first run is reused by the second
  CHECK(fs::exists(d.sub("a") + "/calibration_registry.txt"));
  const auto traj = slurp(d.sub("a") + "/trajectory_x90.csv");
  CHECK(traj.find("time_ns,z_q0,p2_q0") != std::string::npos);
  CHECK(traj.find("# coupling_mhz") != std::string::npos);
}

TEST_CASE("fig4 sweep without filter peaks at the integer sample time") {
  TempDir d("tpulse_cli_fig4");
  const auto cfg = d.file("c.ini",
                          "[solver]\ndrive_scale = 0.5\n[experiment]\nsweep_start = 0.9\n"
                          "sweep_stop = 1.1\nsweep_step = 0.1\n");
  REQUIRE(cli({"--config", cfg, "--output", d.sub("o"), "--study", "fig4", "--no-filter", "sweep"}).code == 0);
  std::istringstream in(body_of(d.sub("o") + "/fig4_z_error_unfiltered.csv"));
  std::string line;
  std::getline(in, line);
  CHECK(line.starts_with("sample_time_ns,z_error"));
  std::vector<double> z;
  while (std::getline(in, line)) {
    const auto a = line.find(',');
    z.push_back(std::stod(line.substr(a + 1, line.find(',', a + 1) - a - 1)));
  }
  REQUIRE(z.size() == 3);
  CHECK(z[1] > z[0]);
  CHECK(z[1] > z[2]);
}
