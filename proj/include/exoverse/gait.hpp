#pragma once

#include <memory>
#include <string>
#include <vector>

#include "exoverse/spline.hpp"
#include "exoverse/types.hpp"

namespace exoverse {

struct GaitSample {
  double gc_percent = 0.0;
  double hip = 0.0;   // rad
  double knee = 0.0;  // rad
};

/// One gait cycle of joint angles keyed by percent of the cycle. Treated as
/// periodic; loaders enforce closure of the endpoints.
struct GaitTrajectory {
  std::vector<GaitSample> samples;
  std::string source;
};

void validate(const GaitTrajectory& traj, const JointLimits& limits = {});

/// Continuous periodic angle curves on the gait-percent axis.
struct GaitCurves {
  PeriodicSpline hip;
  PeriodicSpline knee;
};

/// Uniformly resampled kinematics over one cycle with analytic derivatives.
/// `curves` is kept so consumers can evaluate the trajectory at arbitrary
/// phase (the closed-loop simulator integrates between grid points).
struct GaitKinematics {
  double dt = 0.0;              // s
  double cycle_duration = 0.0;  // s
  double walking_speed = 0.0;   // m/s, 0 if unspecified
  std::vector<JointState> states;
  std::shared_ptr<const GaitCurves> curves;

  /// Desired state at absolute time t (periodic).
  JointState at_time(double t) const;
  double gc_percent(double t) const;
};

/// CSV schema: header `gc_percent,hip_deg,knee_deg`, one sample per line,
/// `#` comments ignored, angles in degrees on disk.
GaitTrajectory load_trajectory(const std::string& path);
void save_trajectory(const GaitTrajectory& traj, const std::string& path);

/// Periodic cubic-spline interpolation onto a uniform 1 ms grid with
/// velocities and accelerations from the analytic spline derivatives.
GaitKinematics to_kinematics(const GaitTrajectory& traj, double cycle_duration,
                             double walking_speed = 0.0);

/// Fourier-series normal-gait generator (6 harmonics per joint). The
/// coefficients were fitted offline to normal-gait kinematic norms; walking
/// speed mildly scales the excursions about their cycle means, capped at the
/// nominal curves.
GaitTrajectory synthetic_normal_gait(double walking_speed);

/// Nominal speed of the synthetic generator (2 km/h).
inline constexpr double kNominalWalkingSpeed = 0.556;

}  // namespace exoverse
