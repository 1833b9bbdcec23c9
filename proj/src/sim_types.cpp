#include <cmath>
#include <numbers>

#include "exoverse/sim.hpp"

namespace exoverse {

void validate(const RobotModel& robot) {
  validate(robot.links);
  for (int i = 0; i < 2; ++i) {
    if (robot.friction_viscous[i] < 0.0 || robot.friction_coulomb[i] < 0.0) {
      throw ValidationError("robot friction coefficients must be nonnegative");
    }
    if (!(robot.actuator_limit[i] > 0.0)) {
      throw ValidationError("robot actuator limit must be positive");
    }
  }
}

RobotModel default_robot() {
  RobotModel r;
  r.links.thigh = make_segment(0.40, 0.04, 2.5, 0.5, 0.577);
  r.links.shank = make_segment(0.43, 0.04, 1.5, 0.5, 0.577);
  r.links.rho_body = 7800.0;  // solid links; never buoyancy-rendered
  return r;
}

void validate(const ControllerGains& gains) {
  for (int i = 0; i < 2; ++i) {
    if (gains.kp[i] < 0.0 || gains.kd[i] < 0.0) {
      throw ValidationError("controller gains must be nonnegative");
    }
  }
  if (!(gains.derivative_filter_tau > 0.0)) {
    throw ValidationError("derivative filter time constant must be positive");
  }
}

void validate(const GrfModelParams& params) {
  if (params.body_weight < 0.0) throw ValidationError("body weight must be nonnegative");
  if (!(params.stance_window.hip >= 0.0 && params.stance_window.knee <= 100.0 &&
        params.stance_window.hip < params.stance_window.knee)) {
    throw ValidationError("stance window must satisfy 0 <= begin < end <= 100");
  }
  if (params.peak_scale < 0.0) throw ValidationError("GRF peak scale must be nonnegative");
}

GrfSample grf_torque(double gc_percent, const GrfModelParams& params) {
  if (gc_percent < 0.0 || gc_percent > 100.0) {
    throw ValidationError("gc_percent must lie in [0, 100]");
  }
  validate(params);
  const double s0 = params.stance_window.hip;
  const double s1 = params.stance_window.knee;
  GrfSample out;
  if (gc_percent <= s0 || gc_percent >= s1) return out;  // swing: foot off the ground

  const double len = s1 - s0;
  const double u = gc_percent - s0;
  const double ramp_w = 0.08 * len;
  double ramp = 1.0;
  if (u < ramp_w) {
    const double s = std::sin(std::numbers::pi * u / (2.0 * ramp_w));
    ramp = s * s;
  } else if (u > len - ramp_w) {
    const double s = std::sin(std::numbers::pi * (len - u) / (2.0 * ramp_w));
    ramp = s * s;
  }

  // M-shaped stance profile: peaks at 1/6 and 5/6 of stance, shallow valley
  const double p1 = len / 6.0;
  const double p2 = len - len / 6.0;
  double dip = 0.0;
  if (u > p1 && u < p2) {
    const double c = std::cos(std::numbers::pi * (u - 0.5 * len) / (p2 - p1));
    dip = 0.2 * c * c;
  }
  out.force = params.body_weight * params.peak_scale * (ramp - dip);
  out.torque = {out.force * params.lever_arm.hip, out.force * params.lever_arm.knee};
  return out;
}

SimConfig::SimConfig() {
  virtual_env = find_environment("water");
  real_env = find_environment("earth");
}

void validate(const SimConfig& cfg) {
  if (!(cfg.dt > 0.0 && cfg.dt <= 0.01)) throw ValidationError("dt must lie in (0, 0.01]");
  if (cfg.n_cycles < 1) throw ValidationError("n_cycles must be at least 1");
  validate(cfg.virtual_env);
  validate(cfg.real_env);
  if (cfg.sensor_noise_std < 0.0) throw ValidationError("sensor noise std must be nonnegative");
  if (!std::isfinite(cfg.model_error) || cfg.model_error <= -1.0) {
    throw ValidationError("model_error must be a finite fraction greater than -1");
  }
  validate(cfg.grf);
  for (int i = 0; i < 2; ++i) {
    if (cfg.human.kp[i] < 0.0 || cfg.human.kd[i] < 0.0) {
      throw ValidationError("human tracking gains must be nonnegative");
    }
  }
}

}  // namespace exoverse
