#include <cmath>
#include <random>

#include "exoverse/dynamics.hpp"
#include "exoverse/sim.hpp"

namespace exoverse {

namespace {

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

Vec2 friction_torque(const RobotModel& robot, Vec2 theta_dot, double scale) {
  return {scale * (robot.friction_viscous.hip * theta_dot.hip +
                   robot.friction_coulomb.hip * sgn(theta_dot.hip)),
          scale * (robot.friction_viscous.knee * theta_dot.knee +
                   robot.friction_coulomb.knee * sgn(theta_dot.knee))};
}

BodyModel scale_inertial(BodyModel body, double factor) {
  for (SegmentParams* seg : {&body.thigh, &body.shank}) {
    seg->mass *= factor;
    seg->moment *= factor;
    seg->first_moment_axial *= factor;
    seg->first_moment_transverse *= factor;
  }
  return body;
}

struct LoopState {
  Vec2 theta;
  Vec2 theta_dot;
  Vec2 err_filter;  // filtered torque error (derivative estimate state)
};

struct LoopDeriv {
  Vec2 theta_dot;
  Vec2 theta_ddot;
  Vec2 err_filter_dot;
};

struct LoopSignals {
  ControlTorques torques;
  double grf_force = 0.0;
  bool saturated = false;
};

struct LoopContext {
  const BodyModel* human = nullptr;
  const RobotModel* robot = nullptr;
  BodyModel human_est;
  BodyModel robot_est;
  double est_scale = 1.0;  // 1 + model_error
  const ControllerGains* gains = nullptr;
  const GaitKinematics* kin = nullptr;
  const SimConfig* cfg = nullptr;
  FluidConstants fc_real;
  FluidConstants fc_virtual;
};

LoopDeriv loop_rhs(const LoopContext& ctx, double t, const LoopState& y, Vec2 noise,
                   LoopSignals* sig) {
  const SimConfig& cfg = *ctx.cfg;
  const ControllerGains& gains = *ctx.gains;
  const double tf = gains.derivative_filter_tau;

  const JointState desired = ctx.kin->at_time(t);
  JointState state;
  state.theta = y.theta;
  state.theta_dot = y.theta_dot;

  // ground reaction and its estimate
  const GrfSample grf = grf_torque(ctx.kin->gc_percent(t), cfg.grf);
  const Vec2 tau_grf_hat = ctx.est_scale * grf.torque;

  // rendering reference: swap the real environment terms for the virtual ones
  const Vec2 render_real = environment_torque(ctx.human_est, state, cfg.real_env, ctx.fc_real).total;
  const Vec2 render_virtual =
      environment_torque(ctx.human_est, state, cfg.virtual_env, ctx.fc_virtual).total;
  const Vec2 tau_imp{};  // zero impedance
  const Vec2 tau_ref = tau_imp + (render_real - render_virtual);

  // robot self-compensation, acceleration taken from the reference trajectory
  const Mat2 m_robot_est = inertia_matrix(ctx.robot_est, y.theta);
  const Vec2 tau_comp = tau_grf_hat + m_robot_est * desired.theta_ddot +
                        coriolis_vector(ctx.robot_est, y.theta, y.theta_dot) +
                        gravity_vector(ctx.robot_est, y.theta, cfg.real_env.g);
  const Vec2 fric_hat = friction_torque(*ctx.robot, y.theta_dot, ctx.est_scale);
  const Vec2 ffwd = tau_comp + fric_hat;

  // virtual subject: feedforward for the desired state plus tracking PD
  const Vec2 tau_m =
      required_muscular_torque(*ctx.human, desired, cfg.virtual_env, ctx.fc_virtual) +
      Vec2{cfg.human.kp.hip * (desired.theta.hip - y.theta.hip) +
               cfg.human.kd.hip * (desired.theta_dot.hip - y.theta_dot.hip),
           cfg.human.kp.knee * (desired.theta.knee - y.theta.knee) +
               cfg.human.kd.knee * (desired.theta_dot.knee - y.theta_dot.knee)};

  // true plant terms
  const Mat2 m_human = inertia_matrix(*ctx.human, y.theta);
  const Mat2 m_robot = inertia_matrix(ctx.robot->links, y.theta);
  const Vec2 fric = friction_torque(*ctx.robot, y.theta_dot, 1.0);
  const Vec2 bias = coriolis_vector(*ctx.human, y.theta, y.theta_dot) +
                    environment_torque(*ctx.human, state, cfg.real_env, ctx.fc_real).total +
                    coriolis_vector(ctx.robot->links, y.theta, y.theta_dot) +
                    gravity_vector(ctx.robot->links, y.theta, cfg.real_env.g) + fric;

  // Torque loop with algebraic feedthrough: the PD acts on the GRF-corrected
  // interaction measurement, which itself depends on theta_ddot. Solving the
  // coupled algebra gives a modified inertia on the left-hand side.
  const Vec2 c{gains.kp.hip + gains.kd.hip / tf, gains.kp.knee + gains.kd.knee / tf};
  const Vec2 kd_tf{gains.kd.hip / tf, gains.kd.knee / tf};
  const Vec2 w0 = tau_grf_hat + coriolis_vector(ctx.robot->links, y.theta, y.theta_dot) +
                  gravity_vector(ctx.robot->links, y.theta, cfg.real_env.g) + fric - ffwd +
                  Vec2{kd_tf.hip * y.err_filter.hip, kd_tf.knee * y.err_filter.knee} - noise;
  const Vec2 p{c.hip / (1.0 + c.hip), c.knee / (1.0 + c.knee)};

  Mat2 lhs = m_human + m_robot;
  lhs.m11 -= p.hip * m_robot.m11;
  lhs.m12 -= p.hip * m_robot.m12;
  lhs.m21 -= p.knee * m_robot.m21;
  lhs.m22 -= p.knee * m_robot.m22;

  const Vec2 a0 = tau_ref + ffwd - Vec2{kd_tf.hip * y.err_filter.hip,
                                        kd_tf.knee * y.err_filter.knee} +
                  Vec2{p.hip * w0.hip, p.knee * w0.knee};
  Vec2 theta_ddot = lhs.solve(tau_m + a0 - grf.torque - bias);

  Vec2 err{(w0.hip + (m_robot * theta_ddot).hip) / (1.0 + c.hip),
           (w0.knee + (m_robot * theta_ddot).knee) / (1.0 + c.knee)};
  Vec2 tau_act = tau_ref + ffwd - Vec2{kd_tf.hip * y.err_filter.hip,
                                       kd_tf.knee * y.err_filter.knee} +
                 Vec2{c.hip * err.hip, c.knee * err.knee};

  bool saturated = false;
  for (int i = 0; i < 2; ++i) {
    const double limit = ctx.robot->actuator_limit[i];
    if (std::abs(tau_act[i]) > limit) {
      tau_act[i] = std::copysign(limit, tau_act[i]);
      saturated = true;
    }
  }
  if (saturated) {
    theta_ddot = (m_human + m_robot).solve(tau_m + tau_act - grf.torque - bias);
    const Vec2 r = m_robot * theta_ddot + coriolis_vector(ctx.robot->links, y.theta, y.theta_dot) +
                   gravity_vector(ctx.robot->links, y.theta, cfg.real_env.g) + fric;
    const Vec2 tau_int_meas = (tau_act - r) - tau_grf_hat + noise;
    err = tau_ref - tau_int_meas;
  }

  LoopDeriv dy;
  dy.theta_dot = y.theta_dot;
  dy.theta_ddot = theta_ddot;
  dy.err_filter_dot = {(err.hip - y.err_filter.hip) / tf, (err.knee - y.err_filter.knee) / tf};

  if (sig != nullptr) {
    sig->torques.tau_ref = tau_ref;
    sig->torques.tau_imp = tau_imp;
    sig->torques.tau_int = tau_ref - err;  // GRF-corrected measurement incl. noise
    sig->torques.tau_comp = tau_comp;
    sig->torques.tau_r = tau_act;
    sig->torques.tau_grf = grf.torque;
    sig->torques.tau_m = tau_m;
    sig->grf_force = grf.force;
    sig->saturated = saturated;
  }
  return dy;
}

LoopState advance(const LoopState& y, const LoopDeriv& d, double h) {
  LoopState out;
  out.theta = y.theta + h * d.theta_dot;
  out.theta_dot = y.theta_dot + h * d.theta_ddot;
  out.err_filter = y.err_filter + h * d.err_filter_dot;
  return out;
}

}  // namespace

SimTrace run_closed_loop(const BodyModel& human, const RobotModel& robot,
                         const ControllerGains& gains, const GaitKinematics& kin,
                         const SimConfig& cfg) {
  validate(human);
  validate(robot);
  validate(gains);
  validate(cfg);
  if (!kin.curves) throw ValidationError("closed loop needs kinematics with continuous curves");

  LoopContext ctx;
  ctx.human = &human;
  ctx.robot = &robot;
  ctx.est_scale = 1.0 + cfg.model_error;
  ctx.human_est = scale_inertial(human, ctx.est_scale);
  ctx.robot_est = scale_inertial(robot.links, ctx.est_scale);
  ctx.gains = &gains;
  ctx.kin = &kin;
  ctx.cfg = &cfg;
  ctx.fc_real = fluid_constants(cfg.real_env);
  ctx.fc_virtual = fluid_constants(cfg.virtual_env);

  const auto steps_per_cycle =
      static_cast<std::size_t>(std::llround(kin.cycle_duration / cfg.dt));
  const std::size_t n_steps = steps_per_cycle * static_cast<std::size_t>(cfg.n_cycles);
  if (steps_per_cycle == 0) throw ValidationError("dt exceeds the cycle duration");

  SimTrace trace;
  trace.t.resize(n_steps);
  trace.states.resize(n_steps);
  trace.torques.resize(n_steps);
  trace.breakdown.resize(n_steps);
  trace.grf.resize(n_steps);
  trace.environment = cfg.virtual_env.name;
  trace.dt = cfg.dt;
  trace.cycle_duration = kin.cycle_duration;
  trace.seed = cfg.seed;

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> noise_dist(0.0, cfg.sensor_noise_std);

  const JointState init = kin.at_time(0.0);
  LoopState y{init.theta, init.theta_dot, {}};
  std::size_t saturated_steps = 0;

  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    Vec2 noise{};
    if (cfg.sensor_noise_std > 0.0) noise = {noise_dist(rng), noise_dist(rng)};

    LoopSignals sig;
    const LoopDeriv k1 = loop_rhs(ctx, t, y, noise, &sig);
    const LoopDeriv k2 = loop_rhs(ctx, t + 0.5 * cfg.dt, advance(y, k1, 0.5 * cfg.dt), noise, nullptr);
    const LoopDeriv k3 = loop_rhs(ctx, t + 0.5 * cfg.dt, advance(y, k2, 0.5 * cfg.dt), noise, nullptr);
    const LoopDeriv k4 = loop_rhs(ctx, t + cfg.dt, advance(y, k3, cfg.dt), noise, nullptr);

    trace.t[k] = t;
    trace.states[k] = JointState{y.theta, y.theta_dot, k1.theta_ddot};
    trace.torques[k] = sig.torques;
    trace.breakdown[k] =
        environment_torque(human, trace.states[k], cfg.virtual_env, ctx.fc_virtual);
    trace.grf[k] = sig.grf_force;
    if (sig.saturated) ++saturated_steps;

    const double h6 = cfg.dt / 6.0;
    y.theta += h6 * (k1.theta_dot + 2.0 * k2.theta_dot + 2.0 * k3.theta_dot + k4.theta_dot);
    y.theta_dot +=
        h6 * (k1.theta_ddot + 2.0 * k2.theta_ddot + 2.0 * k3.theta_ddot + k4.theta_ddot);
    y.err_filter += h6 * (k1.err_filter_dot + 2.0 * k2.err_filter_dot + 2.0 * k3.err_filter_dot +
                          k4.err_filter_dot);

    if (!y.theta.finite() || !y.theta_dot.finite() || !y.err_filter.finite() ||
        std::abs(y.theta_dot.hip) > 50.0 || std::abs(y.theta_dot.knee) > 50.0) {
      throw DivergenceError("closed-loop simulation diverged", k);
    }
  }

  if (saturated_steps > steps_per_cycle / 10) {
    trace.warnings.push_back("actuator saturated for " + std::to_string(saturated_steps) +
                             " steps (more than 10% of a cycle)");
  }
  return trace;
}

}  // namespace exoverse
