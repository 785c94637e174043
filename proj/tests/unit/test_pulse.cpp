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
#include <numbers>
#include <random>

#include "tpulse/errors.hpp"
#include "tpulse/pulse.hpp"

using namespace tpulse;
using std::numbers::pi;

TEST_CASE("ideal DRAG envelopes") {
  const auto i = EnvelopeSpec::ideal_drag_i(25.04, 20.0);
  CHECK(eval_envelope(i, 0.0) == 0.0);
  CHECK(eval_envelope(i, 10.0) == doctest::Approx(2 * 25.04));
  CHECK(envelope_area(i) == doctest::Approx(25.04 * 20.0).epsilon(1e-14));
  CHECK(eval_envelope(i, -1.0) == 0.0);
  CHECK(eval_envelope(i, 21.0) == 0.0);
  const auto q = EnvelopeSpec::ideal_drag_q(-1.72, 20.0);
  CHECK(eval_envelope(q, 5.0) == doctest::Approx(-1.72));
  CHECK(std::abs(eval_envelope(q, 10.0)) < 1e-12);
}

TEST_CASE("raised-cosine flattop") {
  const auto e = EnvelopeSpec::raised_cosine_flattop(300.0, 50.0, 96.0);
  CHECK(eval_envelope(e, 0.0) == 0.0);
  CHECK(eval_envelope(e, 50.0) == doctest::Approx(300.0));
  CHECK(eval_envelope(e, 146.0) == doctest::Approx(300.0));
  CHECK(std::abs(eval_envelope(e, 196.0)) < 1e-12);
  CHECK(eval_envelope(e, 25.0) == doctest::Approx(150.0));
  CHECK(envelope_area(e) == doctest::Approx(300.0 * 146.0).epsilon(1e-14));
  for (double t : {50.0, 146.0}) {
    CHECK(std::abs(eval_envelope(e, t - 1e-9) - eval_envelope(e, t)) < 1e-6);
  }
}

TEST_CASE("staircase discretization") {
  // flat region of a flattop: every step equals A
  const auto flat = discretize_staircase(EnvelopeSpec::raised_cosine_flattop(7.0, 7.0, 70.0), 0.7);
  for (int k = 10; k < 110; ++k) CHECK(flat.steps[k] == doctest::Approx(7.0).epsilon(1e-12));
  const auto drag = EnvelopeSpec::ideal_drag_i(25.0, 20.0);
  const auto one = discretize_staircase(drag, 20.0);
  REQUIRE(one.steps.size() == 1);
  CHECK(one.steps[0] == doctest::Approx(25.0).epsilon(1e-12));

  const auto cr = EnvelopeSpec::raised_cosine_flattop(300.0, 50.0, 96.0);
  const auto st = discretize_staircase(cr, 1.0);
  CHECK(st.steps.size() == 196);
  // per-step oracle: composite Simpson on each step
  double total = 0.0;
  for (std::size_t k = 0; k < st.steps.size(); ++k) {
    const int n = 200;
    const double h = 1.0 / n;
    double s = 0.0;
    for (int j = 0; j <= n; ++j) {
      const double w = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
      s += w * eval_envelope(cr, static_cast<double>(k) + j * h);
    }
    CHECK(st.steps[k] == doctest::Approx(s * h / 3.0).epsilon(1e-9));
    total += st.steps[k];
  }
  CHECK(total == doctest::Approx(300.0 * 146.0).epsilon(1e-9));
}

TEST_CASE("property: staircase preserves area for any sample time") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ts(0.05, 30.0), amp(1.0, 2000.0), len(5.0, 300.0);
  for (int trial = 0; trial < 200; ++trial) {
    const EnvelopeSpec src = trial % 2 ? EnvelopeSpec::ideal_drag_i(amp(rng), len(rng))
                                       : EnvelopeSpec::raised_cosine_flattop(amp(rng), len(rng) / 4, len(rng));
    const double t = ts(rng);
    const auto st = discretize_staircase(src, t);
    CHECK(st.steps.size() == static_cast<std::size_t>(std::ceil(src.duration() / t - 1e-12)));
    CHECK(envelope_area(st) == doctest::Approx(envelope_area(src)).epsilon(1e-9));
  }
}

TEST_CASE("square from area") {
  const auto sq = square_from_area(EnvelopeSpec::ideal_drag_i(25.04, 20.0), 20.0);
  CHECK(sq.amplitude == doctest::Approx(25.04));
  CHECK(square_from_area(EnvelopeSpec::ideal_drag_q(-1.72, 20.0), 20.0).amplitude ==
        doctest::Approx(0.0));
  CHECK(square_from_area(EnvelopeSpec::raised_cosine_flattop(300, 50, 96), 146.0).amplitude ==
        doctest::Approx(300.0));
}

TEST_CASE("LPF step response is the RC closed form") {
  const FilterSpec f{100.0, 1};
  const double tau = f.tau();
  CHECK(tau == doctest::Approx(1.0 / (2 * pi * 0.1)));
  const auto y = apply_lpf(EnvelopeSpec::square(1.0, 1000.0), f);
  CHECK(std::abs(y(tau) - (1.0 - std::exp(-1.0))) < 1e-9);
  for (double t : {0.0, 0.3, 2.0, 7.5, 31.0}) CHECK(std::abs(y(t) - (1.0 - std::exp(-t / tau))) < 1e-9);
  // DC gain after 20 tau
  CHECK(std::abs(y(20 * tau) - 1.0) < 1e-6 * 1.0 + 3e-9);

  const auto z = apply_lpf(EnvelopeSpec::square(0.0, 10.0), f);
  CHECK(z(5.0) == 0.0);

  const auto sq = apply_lpf(EnvelopeSpec::square(300.0, 166.0), f);
  CHECK(sq(166.0) == doctest::Approx(300.0 * (1 - std::exp(-166.0 / tau))).epsilon(1e-12));
  CHECK(std::abs(sq(166.0 + 11.0)) < 0.3);
  CHECK(sq.duration() > 166.0);
  CHECK(std::abs(sq(sq.duration())) <= 1e-6 * 300.0 * 1.0001);
  CHECK_THROWS_AS(apply_lpf(EnvelopeSpec::square(1, 1), FilterSpec{100.0, 2}), Error);
}

TEST_CASE("property: filtered staircase matches segment-wise closed form") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  std::vector<double> steps(40);
  for (auto& s : steps) s = u(rng);
  const double ts = 0.8;
  const FilterSpec f{100.0, 1};
  const auto y = apply_lpf(EnvelopeSpec::staircase(steps, ts), f);
  double state = 0.0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    for (double frac : {0.25, 0.5, 0.999}) {
      const double dt = frac * ts;
      const double expect = steps[i] + (state - steps[i]) * std::exp(-dt / f.tau());
      CHECK(std::abs(y(i * ts + dt) - expect) < 1e-9);
    }
    state = steps[i] + (state - steps[i]) * std::exp(-ts / f.tau());
  }
}

TEST_CASE("property: LPF passivity on monotone steps") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> steps(20);
    double acc = 0.0;
    for (auto& s : steps) s = (acc += u(rng));
    const auto y = apply_lpf(EnvelopeSpec::staircase(steps, 1.3), FilterSpec{100.0, 1});
    for (double t = 0.0; t < y.duration(); t += 0.05) CHECK(std::abs(y(t)) <= acc + 1e-12);
  }
}

TEST_CASE("smooth input through the LPF") {
  const FilterSpec f{100.0, 1};
  const auto src = EnvelopeSpec::ideal_drag_i(25.0, 20.0);
  const auto y = apply_lpf(src, f);
  // exact RC update for a piecewise-linear input on a much finer grid
  const double tau = f.tau(), h = 1e-4;
  const double e = std::exp(-h / tau);
  double state = 0.0;
  for (int k = 0; k < 150000; ++k) {
    const double t = k * h;
    const double x0 = eval_envelope(src, t), x1 = eval_envelope(src, t + h);
    const double slope = (x1 - x0) / h;
    state = x1 - slope * tau + (state - x0 + slope * tau) * e;
    if ((k + 1) % 5000 == 0) CHECK(std::abs(y(t + h) - state) < 1e-6 * 50.0);  // 1e-6 of peak
  }
}

TEST_CASE("modulation") {
  DrivePulse p;
  p.i_envelope = EnvelopeSpec::square(10.0, 100.0);
  p.carrier = {5000.0, 0.0};
  const double quarter = 0.25 / 5.0;  // w t = pi/2
  CHECK(std::abs(modulate(p, quarter)) < 1e-12);
  p.i_envelope = EnvelopeSpec::square(0.0, 100.0);
  p.q_envelope = EnvelopeSpec::square(3.0, 100.0);
  for (double t : {0.01, 0.37, 5.2}) CHECK(modulate(p, t) == doctest::Approx(3.0 * std::sin(2 * pi * 5.0 * t)));
  DrivePulse d;
  d.i_envelope = EnvelopeSpec::ideal_drag_i(25.0, 20.0);
  d.q_envelope = EnvelopeSpec::ideal_drag_q(-1.7, 20.0);
  d.carrier = {7500.0, 0.0};
  CHECK(modulate(d, 10.0) == doctest::Approx(50.0 * std::cos(2 * pi * 7.5 * 10.0)).epsilon(1e-9));
}

TEST_CASE("property: modulation is linear in the envelopes") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-20.0, 20.0), tt(0.0, 30.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(10), b(10), c(10), qa(10), qb(10), qc(10);
    for (int k = 0; k < 10; ++k) {
      a[k] = u(rng);
      b[k] = u(rng);
      c[k] = a[k] + b[k];
      qa[k] = u(rng);
      qb[k] = u(rng);
      qc[k] = qa[k] + qb[k];
    }
    auto make = [](const std::vector<double>& i, const std::vector<double>& q) {
      DrivePulse p;
      p.i_envelope = EnvelopeSpec::staircase(i, 3.0);
      p.q_envelope = EnvelopeSpec::staircase(q, 3.0);
      p.carrier = {8500.0, 0.3};
      p.filter = FilterSpec{100.0, 1};
      return p;
    };
    const auto pa = make(a, qa), pb = make(b, qb), pc = make(c, qc);
    for (int k = 0; k < 20; ++k) {
      const double t = tt(rng);
      CHECK(modulate(pc, t) == doctest::Approx(modulate(pa, t) + modulate(pb, t)).epsilon(1e-9));
    }
  }
}

TEST_CASE("pulse program duration includes the filter tail") {
  DrivePulse p;
  p.i_envelope = EnvelopeSpec::square(300.0, 166.0);
  p.carrier = {8500.0, 0.0};
  p.start_time = 10.0;
  PulseProgram prog{{p}};
  CHECK(prog.duration() == doctest::Approx(176.0));
  p.filter = FilterSpec{100.0, 1};
  prog.pulses = {p};
  CHECK(prog.duration() > 176.0 + 20.0);
  CHECK(prog.max_carrier_mhz() == 8500.0);
}
