#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "exoverse/dynamics.hpp"
#include "exoverse/gait.hpp"

namespace exoverse {

struct RobotModel {
  BodyModel links;
  Vec2 friction_viscous{0.5, 0.5};  // N*m*s/rad
  Vec2 friction_coulomb{0.3, 0.3};  // N*m
  Vec2 actuator_limit{80.0, 80.0};  // N*m
};

void validate(const RobotModel& robot);

/// Exoskeleton link parameters: 2.5/1.5 kg links spanning the same segments
/// as the leg, COM mid-segment.
RobotModel default_robot();

/// PD gains of the torque loop. The derivative acts on a first-order filtered
/// torque error with time constant derivative_filter_tau.
struct ControllerGains {
  Vec2 kp{5.0, 5.0};
  Vec2 kd{0.01, 0.01};  // s
  double derivative_filter_tau = 0.005;  // s
};

void validate(const ControllerGains& gains);

/// Double-bump vertical GRF stance profile and the joint torques it induces
/// through fixed ankle-to-joint moment arms.
struct GrfModelParams {
  double body_weight = 70.0 * 9.81;  // N
  Vec2 stance_window{0.0, 60.0};     // % GC
  double peak_scale = 1.1;
  Vec2 lever_arm{0.05, 0.03};  // m
};

void validate(const GrfModelParams& params);

struct GrfSample {
  double force = 0.0;  // N, vertical
  Vec2 torque;         // N*m
};

GrfSample grf_torque(double gc_percent, const GrfModelParams& params);

/// Virtual-subject tracking PD on top of the feedforward muscular torque.
/// The damping is sized so the subject stays stable against the velocity
/// feedthrough of the rendered drag in the thickest catalog fluid.
struct HumanTrackingGains {
  Vec2 kp{200.0, 200.0};  // N*m/rad
  Vec2 kd{100.0, 100.0};  // N*m*s/rad
};

struct SimConfig {
  double dt = 0.001;  // s
  int n_cycles = 3;
  EnvironmentSpec virtual_env;
  EnvironmentSpec real_env;  // defaults to the Earth catalog entry
  double sensor_noise_std = 0.0;  // N*m
  double model_error = 0.0;       // fractional perturbation of estimates
  std::uint64_t seed = 0;
  GrfModelParams grf;
  HumanTrackingGains human;

  SimConfig();
};

void validate(const SimConfig& cfg);

/// Signals around the torque loop at one instant.
struct ControlTorques {
  Vec2 tau_ref;
  Vec2 tau_imp;
  Vec2 tau_int;
  Vec2 tau_comp;
  Vec2 tau_r;
  Vec2 tau_grf;
  Vec2 tau_m;
};

/// Time-indexed record of a playback or closed-loop run. The torque
/// breakdown is evaluated in the run's virtual environment.
struct SimTrace {
  std::vector<double> t;
  std::vector<JointState> states;
  std::vector<ControlTorques> torques;
  std::vector<TorqueBreakdown> breakdown;
  std::vector<double> grf;

  std::string environment;
  double dt = 0.0;
  double cycle_duration = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;
  std::string config_echo;  // JSON, empty for playback

  std::size_t size() const { return t.size(); }
  double gc_percent(std::size_t i) const;
};

/// Open-loop torque evaluation along prescribed kinematics. The parallel
/// kernel partitions samples across OpenMP threads and is bit-identical to
/// the serial reference.
SimTrace torque_playback(const BodyModel& body, const EnvironmentSpec& env,
                         const GaitKinematics& kin, int n_cycles = 1);
SimTrace torque_playback_serial(const BodyModel& body, const EnvironmentSpec& env,
                                const GaitKinematics& kin, int n_cycles = 1);

/// Closed-loop simulation: virtual subject, PD torque loop, compensation and
/// environment rendering, GRF model, coupled human+robot plant under RK4.
SimTrace run_closed_loop(const BodyModel& human, const RobotModel& robot,
                         const ControllerGains& gains, const GaitKinematics& kin,
                         const SimConfig& cfg);

/// Trace CSV schema (bit-exact header):
/// t,theta1,theta2,dtheta1,dtheta2,tau_M1,tau_M2,tau_R1,tau_R2,tau_int1,
/// tau_int2,grav1,grav2,buoy1,buoy2,drag1,drag2,grf
extern const char* const kTraceCsvHeader;

void save_trace_csv(const SimTrace& trace, const std::string& path);
void save_trace_sidecar(const SimTrace& trace, const std::string& path);
SimTrace load_trace_csv(const std::string& path);

/// Column accessor for the CSV schema names (e.g. "tau_M1", "grav2").
std::vector<double> trace_column(const SimTrace& trace, const std::string& name);
std::vector<std::string> trace_column_names();

}  // namespace exoverse
