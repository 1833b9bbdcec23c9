#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "exoverse/analysis.hpp"
#include "exoverse/filters.hpp"

using namespace exoverse;

namespace {

constexpr double kPi = std::numbers::pi;

SimTrace synthetic_trace(std::size_t n, double dt, double cycle_duration,
                         const std::function<double(std::size_t)>& tau_m_hip) {
  SimTrace trace;
  trace.environment = "test";
  trace.dt = dt;
  trace.cycle_duration = cycle_duration;
  for (std::size_t i = 0; i < n; ++i) {
    trace.t.push_back(i * dt);
    trace.states.push_back({});
    ControlTorques q;
    q.tau_m = {tau_m_hip(i), 0.0};
    trace.torques.push_back(q);
    trace.breakdown.push_back({});
    trace.grf.push_back(0.0);
  }
  return trace;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("rms of constants and sinusoids") {
  const std::vector<double> c(1000, -3.25);
  CHECK(rms(c) == doctest::Approx(3.25).epsilon(1e-12));

  std::vector<double> s(10000);
  const double amp = 2.5;
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = amp * std::sin(2.0 * kPi * 5.0 * i / s.size());  // 5 whole cycles
  }
  CHECK(rms(s) == doctest::Approx(amp / std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("rms_components windows and errors") {
  auto trace = synthetic_trace(2000, 0.001, 1.0, [](std::size_t) { return 1.0; });
  for (std::size_t i = 0; i < trace.size(); ++i) {
    trace.breakdown[i].gravity = {2.0, 1.0};
    trace.breakdown[i].buoyancy = {-1.0, -0.5};
    trace.breakdown[i].drag = {0.5, 0.25};
  }
  const auto rows = rms_components(trace);
  CHECK(rows[0].joint == "hip");
  CHECK(rows[0].gravity == doctest::Approx(2.0));
  CHECK(rows[1].buoyancy == doctest::Approx(0.5));
  CHECK(rows[0].drag == doctest::Approx(0.5));

  CHECK_THROWS_AS(rms_components(trace, GcWindow{50.0, 50.0}), ValidationError);
  CHECK_THROWS_AS(rms_components(SimTrace{}), ValidationError);

  // whole-cycle invariance: one cycle vs two cycles of the same signal
  auto one = synthetic_trace(1000, 0.001, 1.0, [](std::size_t i) {
    return std::sin(2.0 * kPi * i / 1000.0);
  });
  auto two = synthetic_trace(2000, 0.001, 1.0, [](std::size_t i) {
    return std::sin(2.0 * kPi * i / 1000.0);
  });
  for (auto* tr : {&one, &two}) {
    for (std::size_t i = 0; i < tr->size(); ++i) {
      tr->breakdown[i].gravity = {tr->torques[i].tau_m.hip, 0.0};
    }
  }
  CHECK(rms_components(one)[0].gravity ==
        doctest::Approx(rms_components(two)[0].gravity).epsilon(1e-12));
}

TEST_CASE("pearson correlation basics") {
  std::vector<double> x(500), y(500);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = std::sin(0.1 * i) + 0.3 * i;
    y[i] = -x[i];
  }
  CHECK(pearson_r(x, x) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pearson_r(x, y) == doctest::Approx(-1.0).epsilon(1e-12));

  const std::vector<double> flat(500, 2.0);
  CHECK_THROWS_AS(pearson_r(x, flat), ValidationError);
  CHECK_THROWS_AS(pearson_r(x, std::vector<double>(10, 1.0)), ValidationError);
}

TEST_CASE("pearson correlation of independent noise is near zero") {
  std::mt19937_64 rng_a(1), rng_b(2);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> a(10000), b(10000);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = dist(rng_a);
    b[i] = dist(rng_b);
  }
  CHECK(std::abs(pearson_r(a, b)) < 0.05);
}

TEST_CASE("pearson correlation is invariant under positive affine maps") {
  std::vector<double> x(300), y(300), x_mapped(300);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = dist(rng);
    y[i] = 0.5 * x[i] + dist(rng);
    x_mapped[i] = 3.7 * x[i] + 11.0;
  }
  CHECK(pearson_r(x_mapped, y) == doctest::Approx(pearson_r(x, y)).epsilon(1e-12));

  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(64), b(64);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = dist(rng);
      b[i] = dist(rng);
    }
    CHECK(std::abs(pearson_r(a, b)) <= 1.0);
  }
}

TEST_CASE("emg envelope pipeline") {
  EnvelopeParams params;
  params.sample_rate = 1000.0;

  SUBCASE("zeros in, zeros out") {
    const std::vector<double> zeros(2000, 0.0);
    for (double v : emg_envelope(zeros, params)) CHECK(v == 0.0);
  }

  SUBCASE("DC offset is rejected by the highpass edge") {
    const std::vector<double> dc(4000, 5.0);
    const auto env = emg_envelope(dc, params);
    double peak = 0.0;
    for (std::size_t i = 500; i + 500 < env.size(); ++i) peak = std::max(peak, env[i]);
    CHECK(peak < 0.05);  // < 1% of the 5.0 offset
  }

  SUBCASE("unit 100 Hz sine settles to the rectified mean") {
    std::vector<double> sine(4000);
    for (std::size_t i = 0; i < sine.size(); ++i) {
      sine[i] = std::sin(2.0 * kPi * 100.0 * i / params.sample_rate);
    }
    const auto env = emg_envelope(sine, params);
    for (std::size_t i = 1500; i < 2500; ++i) {
      CHECK(env[i] == doctest::Approx(2.0 / kPi).epsilon(0.05));
    }
  }

  SUBCASE("output is never negative") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<double> noise(3000);
    for (double& v : noise) v = dist(rng);
    for (double v : emg_envelope(noise, params)) CHECK(v >= 0.0);
  }

  SUBCASE("too-short input is rejected") {
    CHECK_THROWS_AS(emg_envelope(std::vector<double>(10, 0.0), params), ValidationError);
  }

  SUBCASE("invalid band edges are rejected") {
    EnvelopeParams bad = params;
    bad.band_high = 600.0;  // above Nyquist
    CHECK_THROWS_AS(emg_envelope(std::vector<double>(2000, 0.0), bad), ValidationError);
  }
}

TEST_CASE("butterworth magnitude at the corner") {
  const auto lp = butterworth_lowpass(4, 100.0, 1000.0);
  // unit-gain at DC
  std::vector<double> step(3000, 1.0);
  const auto y = filter(lp, step);
  CHECK(y.back() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("phase average across cycles") {
  // dt = 2^-10 keeps every sample time, phase and bin assignment exact
  const double dt = 0.0009765625;
  const std::size_t per_cycle = 1024;
  const double cycle = dt * per_cycle;

  // two identical cycles
  auto same = synthetic_trace(2 * per_cycle, dt, cycle, [=](std::size_t i) {
    return std::sin(2.0 * kPi * (i % per_cycle) / per_cycle);
  });
  const PhaseStats s1 = phase_average(same, "tau_M1", 50);
  CHECK(!s1.single_cycle);
  for (double sd : s1.stddev) CHECK(sd < 1e-12);

  // one cycle only: zero spread plus the warning flag
  auto one = synthetic_trace(per_cycle, dt, cycle, [=](std::size_t i) {
    return std::cos(2.0 * kPi * i / per_cycle);
  });
  const PhaseStats s2 = phase_average(one, "tau_M1", 50);
  CHECK(s2.single_cycle);
  for (double sd : s2.stddev) CHECK(sd < 1e-12);

  // two cycles offset by a constant: population std c/2 in every bin
  const double c = 3.0;
  auto offset = synthetic_trace(2 * per_cycle, dt, cycle, [=](std::size_t i) {
    return (i < per_cycle ? 0.0 : c) + std::sin(2.0 * kPi * (i % per_cycle) / per_cycle);
  });
  const PhaseStats s3 = phase_average(offset, "tau_M1", 50);
  for (double sd : s3.stddev) CHECK(sd == doctest::Approx(c / 2.0).epsilon(1e-9));

  CHECK_THROWS_AS(phase_average(same, "tau_M1", 1), ValidationError);
  CHECK_THROWS_AS(phase_average(same, "no_such_column", 10), ValidationError);
}

}  // TEST_SUITE
