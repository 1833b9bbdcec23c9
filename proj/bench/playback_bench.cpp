// Compares the serial reference playback kernel against the OpenMP one and
// reports throughput per environment.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "exoverse/sim.hpp"

using namespace exoverse;

namespace {

template <typename F>
double best_of(F&& fn, int reps) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  int cycles = argc > 1 ? std::atoi(argv[1]) : 64;
  if (cycles < 1) cycles = 1;

  const BodyModel body = default_body();
  const GaitKinematics kin = to_kinematics(synthetic_normal_gait(kNominalWalkingSpeed), 2.8);
  const std::size_t samples = kin.states.size() * static_cast<std::size_t>(cycles);

#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP: disabled at build time\n");
#endif
  std::printf("samples per run: %zu (%d cycles)\n\n", samples, cycles);
  std::printf("%-14s %12s %12s %9s %9s\n", "environment", "serial [ms]", "openmp [ms]", "speedup",
              "match");

  for (const auto& env : builtin_environments()) {
    SimTrace serial_trace, parallel_trace;
    const double ts = best_of([&] { serial_trace = torque_playback_serial(body, env, kin, cycles); }, 3);
    const double tp = best_of([&] { parallel_trace = torque_playback(body, env, kin, cycles); }, 3);

    bool match = serial_trace.size() == parallel_trace.size();
    for (std::size_t i = 0; match && i < serial_trace.size(); ++i) {
      match = serial_trace.torques[i].tau_m == parallel_trace.torques[i].tau_m &&
              serial_trace.breakdown[i].total == parallel_trace.breakdown[i].total;
    }
    std::printf("%-14s %12.3f %12.3f %8.2fx %9s\n", env.name.c_str(), 1e3 * ts, 1e3 * tp,
                ts / tp, match ? "bit-exact" : "MISMATCH");
    if (!match) return 1;
  }
  return 0;
}
