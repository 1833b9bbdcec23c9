#include "exoverse/dynamics.hpp"

#include <cmath>

namespace exoverse {

namespace {

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void require_finite(Vec2 v, const char* what) {
  if (!v.finite()) throw ValidationError(std::string(what) + " must be finite");
}

}  // namespace

Mat2 inertia_matrix(const BodyModel& body, Vec2 theta) {
  require_finite(theta, "theta");
  const double j1 = body.thigh.moment;
  const double j2 = body.shank.moment;
  const double l1 = body.thigh.length;
  const double m2 = body.shank.mass;
  const double x2 = body.shank.first_moment_axial;
  const double y2 = body.shank.first_moment_transverse;

  // coupling term: first moment of the shank seen from the hip
  const double a = l1 * (x2 * std::cos(theta.knee) - y2 * std::sin(theta.knee));

  Mat2 m;
  m.m11 = j1 + j2 + m2 * l1 * l1 + 2.0 * a;
  m.m12 = j2 + a;
  m.m21 = m.m12;
  m.m22 = j2;
  return m;
}

Vec2 coriolis_vector(const BodyModel& body, Vec2 theta, Vec2 theta_dot) {
  require_finite(theta, "theta");
  require_finite(theta_dot, "theta_dot");
  const double l1 = body.thigh.length;
  const double x2 = body.shank.first_moment_axial;
  const double y2 = body.shank.first_moment_transverse;
  const double w = l1 * (x2 * std::sin(theta.knee) + y2 * std::cos(theta.knee));

  const double d1 = theta_dot.hip;
  const double d2 = theta_dot.knee;
  return {-w * (d2 * d2 + 2.0 * d1 * d2), w * d1 * d1};
}

Vec2 gravity_vector(const BodyModel& body, Vec2 theta, double g) {
  require_finite(theta, "theta");
  if (g < 0.0 || !std::isfinite(g)) {
    throw ValidationError("gravitational acceleration must be nonnegative");
  }
  const double t1 = theta.hip;
  const double t12 = theta.hip + theta.knee;
  const double x1 = body.thigh.first_moment_axial;
  const double y1 = body.thigh.first_moment_transverse;
  const double x2 = body.shank.first_moment_axial;
  const double y2 = body.shank.first_moment_transverse;

  const double shank = x2 * std::sin(t12) + y2 * std::cos(t12);
  return {g * (x1 * std::sin(t1) + y1 * std::cos(t1) + shank), g * shank};
}

Vec2 buoyancy_vector(const BodyModel& body, Vec2 theta, const EnvironmentSpec& env) {
  if (!(body.rho_body > 0.0)) throw ValidationError("body density must be positive");
  const double ratio = env.rho_fluid / body.rho_body;
  return -1.0 * ratio * gravity_vector(body, theta, env.g);
}

Vec2 drag_torque_vector(const BodyModel& body, Vec2 theta, Vec2 theta_dot,
                        const EnvironmentSpec& env, const FluidConstants& fc,
                        DragAssembly assembly) {
  require_finite(theta, "theta");
  require_finite(theta_dot, "theta_dot");
  const double rho_cd = env.rho_fluid * fc.drag_coeff;
  const double l1 = body.thigh.length;
  const double l2 = body.shank.length;
  const double r1 = body.thigh.radius;
  const double r2 = body.shank.radius;

  const double d1 = theta_dot.hip;
  const double d12 = theta_dot.hip + theta_dot.knee;
  const double s1 = sgn(d1);
  const double s12 = sgn(d12);

  const double tau_d1 = -rho_cd * r1 * (l1 * l1 * l1 * l1 * d1 * d1 / 4.0) * s1;
  const double tau_d2 =
      -rho_cd * r2 *
      (l1 * l1 * l2 * l2 * d1 * d1 / 2.0 * s1 + l2 * l2 * l2 * l2 * d12 * d12 / 4.0 * s12 +
       l1 * l2 * l2 * l2 * d1 * d12 * std::cos(theta.knee) / 3.0 * (s1 + s12));

  if (assembly == DragAssembly::GeneralizedForce) return {tau_d1 + tau_d2, tau_d2};
  return {tau_d1 - tau_d2, tau_d2};
}

TorqueBreakdown environment_torque(const BodyModel& body, const JointState& state,
                                   const EnvironmentSpec& env, const FluidConstants& fc) {
  TorqueBreakdown out;
  out.gravity = gravity_vector(body, state.theta, env.g);
  out.buoyancy = buoyancy_vector(body, state.theta, env);
  out.drag = drag_torque_vector(body, state.theta, state.theta_dot, env, fc);
  out.total = out.gravity + out.buoyancy + out.drag;
  return out;
}

TorqueBreakdown environment_torque(const BodyModel& body, const JointState& state,
                                   const EnvironmentSpec& env) {
  return environment_torque(body, state, env, fluid_constants(env));
}

Vec2 required_muscular_torque(const BodyModel& body, const JointState& state,
                              const EnvironmentSpec& env, const FluidConstants& fc) {
  const TorqueBreakdown env_tau = environment_torque(body, state, env, fc);
  return inertia_matrix(body, state.theta) * state.theta_ddot +
         coriolis_vector(body, state.theta, state.theta_dot) + env_tau.total;
}

Vec2 required_muscular_torque(const BodyModel& body, const JointState& state,
                              const EnvironmentSpec& env) {
  return required_muscular_torque(body, state, env, fluid_constants(env));
}

Vec2 compensation_torque(const BodyModel& robot, const JointState& state, Vec2 tau_grf,
                         double g_real) {
  if (!state.finite()) throw ValidationError("joint state must be finite");
  require_finite(tau_grf, "tau_grf");
  return tau_grf + inertia_matrix(robot, state.theta) * state.theta_ddot +
         coriolis_vector(robot, state.theta, state.theta_dot) +
         gravity_vector(robot, state.theta, g_real);
}

Vec2 robot_torque_command(const BodyModel& human_est, const BodyModel& robot_est,
                          const JointState& state, const EnvironmentSpec& real_env,
                          const EnvironmentSpec& virtual_env, Vec2 tau_grf) {
  const Vec2 real_terms = environment_torque(human_est, state, real_env).total;
  const Vec2 virtual_terms = environment_torque(human_est, state, virtual_env).total;
  // grouped so that identical environments cancel bit-exactly
  return (real_terms - virtual_terms) +
         compensation_torque(robot_est, state, tau_grf, real_env.g);
}

}  // namespace exoverse
