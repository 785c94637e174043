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
#include <complex>
#include <functional>

#include "tpulse/calibration.hpp"
#include "tpulse/errors.hpp"
#include "tpulse/metrics.hpp"

using namespace tpulse;

namespace {

SystemModel qubit(int levels = 3) {
  return SystemModel({TransmonParams::from_mhz(7500, -380, kInfiniteTime, kInfiniteTime, levels)});
}

SystemModel pair(double j_mhz = 5.0) {
  return SystemModel({TransmonParams::from_mhz(7500, -380, 260, 170),
                      TransmonParams::from_mhz(8500, -420, 260, 170)},
                     mhz_to_rad_per_ns(j_mhz))
      .without_decoherence();
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::io_error;
}

CrCalibrationOptions cr_options() { return CrCalibrationOptions{}; }

}  // namespace

TEST_CASE("zero-amplitude pulse has exactly zero Z-error") {
  const auto m = pair();
  DrivePulse p;
  p.i_envelope = EnvelopeSpec::square(0.0, 50.0);
  p.carrier = {8500.0, 0.0};
  EvolutionConfig c;
  CHECK(z_error(m, p, c).value == 0.0);
}

TEST_CASE("axis_angle reads rotations") {
  const double th = 0.7;
  Eigen::Matrix2cd rx;
  rx << std::cos(th / 2), std::complex<double>(0, -std::sin(th / 2)), std::complex<double>(0, -std::sin(th / 2)), std::cos(th / 2);
  const auto a = axis_angle(rx * std::exp(std::complex<double>(0, 1.3)));
  CHECK(a.angle == doctest::Approx(th));
  CHECK(std::abs(a.axis[0]) == doctest::Approx(1.0));
  CHECK(axis_angle(Eigen::Matrix2cd::Identity()).angle == doctest::Approx(0.0));
}

TEST_CASE("ideal DRAG calibration lands near 25 MHz") {
  DragCalibrationOptions o;
  const auto c = calibrate_drag(qubit(), 0, o);
  CHECK(c.pulse.amplitude == doctest::Approx(25.04).epsilon(0.10));
  CHECK(c.rotation_error < 1e-4);
  CHECK(std::abs(c.pulse.drag) > 0.1);
  CHECK(std::abs(c.pulse.drag) < 20.0);
  // B is a local leakage minimum
  for (double d : {-0.3, 0.3}) {
    auto p = c.pulse;
    p.drag += d;
    CHECK(drag_response(qubit(), 0, p, c.drive_freq, o.solver).leakage >= c.leakage - 1e-12);
  }
}

TEST_CASE("two-level truncation drives the optimal DRAG coefficient to zero") {
  DragCalibrationOptions o;
  const auto c = calibrate_drag(qubit(2), 0, o);
  CHECK(std::abs(c.pulse.drag) < 0.05);
  CHECK(c.leakage == 0.0);
}

TEST_CASE("square DRAG amplitude matches the area-matched ideal amplitude") {
  DragCalibrationOptions o;
  const auto ideal = calibrate_drag(qubit(), 0, o);
  o.mode = WaveformMode::square;
  const auto sq = calibrate_drag(qubit(), 0, o);
  CHECK(sq.pulse.drag == 0.0);
  CHECK(sq.rotation_error < 1e-4);
  // A is the area-equivalent amplitude in both modes; the grid step is 1% of A
  CHECK(sq.pulse.amplitude == doctest::Approx(ideal.pulse.amplitude).epsilon(0.01));
}

TEST_CASE("vanishing CR amplitude cannot reach the target angle") {
  auto o = cr_options();
  o.max_length = 500.0;
  CHECK(code_of([&] { calibrate_cr_flattop(pair(), 50.0, 1e-3, o); }) ==
        ErrorCode::calibration_failed);
  CHECK(code_of([&] { calibrate_cr_flattop(pair(), 50.0, 0.0, o); }) ==
        ErrorCode::calibration_failed);
}

TEST_CASE("flattop CR calibration meets the angle tolerance and scales with J") {
  const auto c5 = calibrate_cr_flattop(pair(5.0), 50.0, 300.0, cr_options());
  CHECK(c5.error < 1e-3);
  CHECK(c5.length > 0.0);
  const auto c10 = calibrate_cr_flattop(pair(10.0), 50.0, 300.0, cr_options());
  CHECK(c10.error < 1e-3);
  // the ZX rate is linear in J: total time roughly halves
  const double t5 = c5.length + 100.0;
  const double t10 = c10.length + 100.0;
  MESSAGE("T_p at J=5: " << t5 << " ns, J=10: " << t10 << " ns");
  CHECK(t10 / t5 == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("square CR: filter changes the length by < 5 ns, halving A doubles it") {
  const FilterSpec lpf{100.0, 1};
  const auto plain = calibrate_square_cr_length(pair(), 300.0, std::nullopt, cr_options());
  const auto filtered = calibrate_square_cr_length(pair(), 300.0, lpf, cr_options());
  CHECK(plain.error < 1e-3);
  CHECK(filtered.error < 1e-3);
  CHECK(std::abs(plain.length - filtered.length) < 5.0);
  const auto half = calibrate_square_cr_length(pair(), 150.0, std::nullopt, cr_options());
  MESSAGE("square lengths: " << plain.length << " / " << filtered.length << " / A=150: " << half.length);
  CHECK(half.length / plain.length == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("frontier is non-increasing and respects the ramp") {
  const std::vector<double> amps{1000.0, 1500.0, 2000.0};
  CrTemplate ideal;
  ideal.rise_time = 10.0;
  const auto fi = sweep_amplitude_length_frontier(pair(), ideal, amps, cr_options());
  CrTemplate square;
  square.mode = WaveformMode::square;
  square.filter = FilterSpec{100.0, 1};
  const auto fs = sweep_amplitude_length_frontier(pair(), square, amps, cr_options());
  REQUIRE(fi.points.size() == amps.size());
  REQUIRE(fs.points.size() == amps.size());
  for (std::size_t i = 0; i < amps.size(); ++i) {
    REQUIRE(fi.points[i].ok);
    REQUIRE(fs.points[i].ok);
    CHECK(fi.points[i].objective >= 20.0);
    CHECK(std::abs(fs.points[i].objective - fi.points[i].objective) < 0.25 * fi.points[i].objective);
    if (i > 0) {
      CHECK(fi.points[i].objective <= fi.points[i - 1].objective + 1.0);
      CHECK(fs.points[i].objective <= fs.points[i - 1].objective + 1.0);
    }
  }
}

TEST_CASE("sampling-time sweep is deterministic and its argmin is on the grid") {
  CrTemplate src;
  src.amplitude = 300.0;
  src.rise_time = 50.0;
  src.flat_time = 300.0;
  const std::vector<double> grid{0.9, 1.0, 1.04, 1.5};
  EvolutionConfig c;
  const auto a = sweep_sampling_time(pair(), src, grid, std::nullopt, c);
  const auto b = sweep_sampling_time(pair(), src, grid, std::nullopt, c);
  CHECK(a.csv() == b.csv());
  bool member = false;
  for (double g : grid) member = member || g == a.argmin();
  CHECK(member);
  // the integer sample time is the worst of the four
  double worst = 0.0, at = 0.0;
  for (const auto& p : a.points) {
    if (p.objective > worst) worst = p.objective, at = p.parameter;
  }
  CHECK(at == 1.0);
  CHECK(a.points[1].objective >= 10.0 * a.points[2].objective);
}
