#include "exoverse/types.hpp"

#include <string>

namespace exoverse {

void validate(const JointState& s, const JointLimits& limits) {
  if (!s.finite()) throw ValidationError("joint state has non-finite entries");
  for (int i = 0; i < 2; ++i) {
    if (s.theta[i] < limits.lower[i] || s.theta[i] > limits.upper[i]) {
      const char* joint = i == 0 ? "hip" : "knee";
      throw ValidationError(std::string(joint) + " angle " + std::to_string(s.theta[i]) +
                            " rad outside joint limits [" + std::to_string(limits.lower[i]) +
                            ", " + std::to_string(limits.upper[i]) + "]");
    }
  }
}

void validate(const SegmentParams& p) {
  if (!(p.length > 0.0) || !(p.radius > 0.0)) {
    throw ValidationError("segment length and radius must be positive");
  }
  // mass and moment may be zero so that an idealized massless (fully
  // transparent) robot link remains expressible
  if (p.mass < 0.0 || p.moment < 0.0) {
    throw ValidationError("segment mass and moment must be nonnegative");
  }
  const double first_sq = p.first_moment_axial * p.first_moment_axial +
                          p.first_moment_transverse * p.first_moment_transverse;
  if (p.moment * p.mass < first_sq * (1.0 - 1e-12)) {
    throw ValidationError("segment moment inconsistent with first mass moments (J*m < X^2+Y^2)");
  }
  if (!std::isfinite(p.length + p.radius + p.mass + p.moment + first_sq)) {
    throw ValidationError("segment parameters must be finite");
  }
}

void validate(const BodyModel& b) {
  validate(b.thigh);
  validate(b.shank);
  if (!(b.rho_body > 0.0) || !std::isfinite(b.rho_body)) {
    throw ValidationError("body density must be positive");
  }
}

SegmentParams make_segment(double length, double radius, double mass, double com_fraction,
                           double gyration_fraction) {
  SegmentParams p;
  p.length = length;
  p.radius = radius;
  p.mass = mass;
  p.first_moment_axial = mass * com_fraction * length;
  p.first_moment_transverse = 0.0;
  p.moment = mass * (gyration_fraction * length) * (gyration_fraction * length);
  validate(p);
  return p;
}

BodyModel default_body() {
  // Thigh 10.0% and shank 4.65% of a 70 kg body; radii of gyration about the
  // proximal joint 0.540/0.528 of segment length (standard gait-analysis
  // fractions).
  BodyModel b;
  b.thigh = make_segment(0.40, 0.10, 7.00, 0.43, 0.540);
  b.shank = make_segment(0.43, 0.06, 3.25, 0.43, 0.528);
  b.rho_body = 1041.0;
  return b;
}

}  // namespace exoverse
