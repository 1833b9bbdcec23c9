#include "exoverse/dynamics.hpp"
#include "exoverse/sim.hpp"

namespace exoverse {

namespace {

SimTrace make_playback_shell(const EnvironmentSpec& env, const GaitKinematics& kin,
                             int n_cycles) {
  validate(env);
  if (n_cycles < 1) throw ValidationError("n_cycles must be at least 1");
  if (kin.states.empty()) throw ValidationError("kinematics is empty");

  SimTrace trace;
  const std::size_t total = kin.states.size() * static_cast<std::size_t>(n_cycles);
  trace.t.resize(total);
  trace.states.resize(total);
  trace.torques.resize(total);
  trace.breakdown.resize(total);
  trace.grf.assign(total, 0.0);
  trace.environment = env.name;
  trace.dt = kin.dt;
  trace.cycle_duration = kin.cycle_duration;
  return trace;
}

// One sample of the playback table: the environment torque decomposition and
// the muscular torque that would drive the prescribed state through it.
inline void playback_sample(const BodyModel& body, const EnvironmentSpec& env,
                            const FluidConstants& fc, const GaitKinematics& kin,
                            std::size_t i, SimTrace& trace) {
  const std::size_t per_cycle = kin.states.size();
  const JointState& s = kin.states[i % per_cycle];
  trace.t[i] = static_cast<double>(i) * kin.dt;
  trace.states[i] = s;
  trace.breakdown[i] = environment_torque(body, s, env, fc);
  trace.torques[i].tau_m = inertia_matrix(body, s.theta) * s.theta_ddot +
                           coriolis_vector(body, s.theta, s.theta_dot) +
                           trace.breakdown[i].total;
}

}  // namespace

SimTrace torque_playback_serial(const BodyModel& body, const EnvironmentSpec& env,
                                const GaitKinematics& kin, int n_cycles) {
  validate(body);
  SimTrace trace = make_playback_shell(env, kin, n_cycles);
  const FluidConstants fc = fluid_constants(env);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    playback_sample(body, env, fc, kin, i, trace);
  }
  return trace;
}

SimTrace torque_playback(const BodyModel& body, const EnvironmentSpec& env,
                         const GaitKinematics& kin, int n_cycles) {
  validate(body);
  SimTrace trace = make_playback_shell(env, kin, n_cycles);
  const FluidConstants fc = fluid_constants(env);
  const auto n = static_cast<std::ptrdiff_t>(trace.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    playback_sample(body, env, fc, kin, static_cast<std::size_t>(i), trace);
  }
  return trace;
}

}  // namespace exoverse
