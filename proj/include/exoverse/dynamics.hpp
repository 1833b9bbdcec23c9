#pragma once

#include "exoverse/environment.hpp"
#include "exoverse/types.hpp"

namespace exoverse {

/// Per-joint environment torque components. total is the componentwise sum of
/// the other three, computed with the same arithmetic.
struct TorqueBreakdown {
  Vec2 gravity;
  Vec2 buoyancy;
  Vec2 drag;
  Vec2 total;
};

/// How the per-segment drag torques are assembled into joint torques.
/// Printed keeps the hip row as tau_d1 - tau_d2; GeneralizedForce adds the
/// shank contribution about the hip instead.
enum class DragAssembly { Printed, GeneralizedForce };

Mat2 inertia_matrix(const BodyModel& body, Vec2 theta);

Vec2 coriolis_vector(const BodyModel& body, Vec2 theta, Vec2 theta_dot);

Vec2 gravity_vector(const BodyModel& body, Vec2 theta, double g);

Vec2 buoyancy_vector(const BodyModel& body, Vec2 theta, const EnvironmentSpec& env);

Vec2 drag_torque_vector(const BodyModel& body, Vec2 theta, Vec2 theta_dot,
                        const EnvironmentSpec& env, const FluidConstants& fc,
                        DragAssembly assembly = DragAssembly::Printed);

TorqueBreakdown environment_torque(const BodyModel& body, const JointState& state,
                                   const EnvironmentSpec& env, const FluidConstants& fc);
TorqueBreakdown environment_torque(const BodyModel& body, const JointState& state,
                                   const EnvironmentSpec& env);

/// Muscular torque needed to move the leg through `state` inside `env`.
Vec2 required_muscular_torque(const BodyModel& body, const JointState& state,
                              const EnvironmentSpec& env, const FluidConstants& fc);
Vec2 required_muscular_torque(const BodyModel& body, const JointState& state,
                              const EnvironmentSpec& env);

/// Feedforward that cancels the robot's own rigid-body dynamics and the
/// GRF-induced torque, evaluated with the estimated robot model.
Vec2 compensation_torque(const BodyModel& robot, const JointState& state, Vec2 tau_grf,
                         double g_real);

/// Actuator torque command that swaps the real environment for the virtual
/// one on top of the self-compensation. When the two environments are equal
/// the swap cancels exactly and the command reduces to compensation_torque.
Vec2 robot_torque_command(const BodyModel& human_est, const BodyModel& robot_est,
                          const JointState& state, const EnvironmentSpec& real_env,
                          const EnvironmentSpec& virtual_env, Vec2 tau_grf);

}  // namespace exoverse
