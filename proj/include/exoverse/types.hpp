#pragma once

#include <array>
#include <cmath>

#include "exoverse/errors.hpp"

namespace exoverse {

/// Per-joint pair, index 0 = hip, 1 = knee.
struct Vec2 {
  double hip = 0.0;
  double knee = 0.0;

  constexpr double& operator[](int i) { return i == 0 ? hip : knee; }
  constexpr double operator[](int i) const { return i == 0 ? hip : knee; }

  constexpr Vec2 operator+(Vec2 o) const { return {hip + o.hip, knee + o.knee}; }
  constexpr Vec2 operator-(Vec2 o) const { return {hip - o.hip, knee - o.knee}; }
  constexpr Vec2 operator-() const { return {-hip, -knee}; }
  constexpr Vec2& operator+=(Vec2 o) {
    hip += o.hip;
    knee += o.knee;
    return *this;
  }
  constexpr Vec2& operator-=(Vec2 o) {
    hip -= o.hip;
    knee -= o.knee;
    return *this;
  }
  constexpr bool operator==(const Vec2&) const = default;

  bool finite() const { return std::isfinite(hip) && std::isfinite(knee); }
};

constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.hip, s * v.knee}; }
constexpr Vec2 operator*(Vec2 v, double s) { return s * v; }

/// Symmetric use is not assumed; entries are stored explicitly.
struct Mat2 {
  double m11 = 0.0, m12 = 0.0, m21 = 0.0, m22 = 0.0;

  constexpr Vec2 operator*(Vec2 v) const {
    return {m11 * v.hip + m12 * v.knee, m21 * v.hip + m22 * v.knee};
  }
  constexpr Mat2 operator+(Mat2 o) const {
    return {m11 + o.m11, m12 + o.m12, m21 + o.m21, m22 + o.m22};
  }
  constexpr Mat2 operator-(Mat2 o) const {
    return {m11 - o.m11, m12 - o.m12, m21 - o.m21, m22 - o.m22};
  }
  constexpr double det() const { return m11 * m22 - m12 * m21; }

  /// Solves A x = b by direct 2x2 inversion.
  Vec2 solve(Vec2 b) const {
    const double d = det();
    if (d == 0.0 || !std::isfinite(d)) throw ValidationError("singular 2x2 system");
    return {(m22 * b.hip - m12 * b.knee) / d, (m11 * b.knee - m21 * b.hip) / d};
  }

  /// Eigenvalues of the symmetrized matrix, ascending.
  std::array<double, 2> sym_eigenvalues() const {
    const double off = 0.5 * (m12 + m21);
    const double tr = m11 + m22;
    const double disc = std::sqrt(0.25 * (m11 - m22) * (m11 - m22) + off * off);
    return {0.5 * tr - disc, 0.5 * tr + disc};
  }
};

constexpr Mat2 operator*(double s, Mat2 a) {
  return {s * a.m11, s * a.m12, s * a.m21, s * a.m22};
}

struct JointLimits {
  Vec2 lower{-0.52, 0.0};  // rad
  Vec2 upper{2.09, 2.44};
};

/// Kinematic input to every torque law. Angles in rad, hip measured from the
/// downward vertical, knee flexion relative to the thigh axis, flexion positive.
struct JointState {
  Vec2 theta;
  Vec2 theta_dot;
  Vec2 theta_ddot;

  double theta12() const { return theta.hip + theta.knee; }
  bool finite() const { return theta.finite() && theta_dot.finite() && theta_ddot.finite(); }
};

void validate(const JointState& s, const JointLimits& limits = {});

/// One rigid segment. Moment is taken about the proximal joint axis; the first
/// mass moments are mass times center-of-mass offset along (X) and transverse
/// to (Y) the segment axis, kg*m.
struct SegmentParams {
  double length = 0.0;  // m
  double radius = 0.0;  // m
  double mass = 0.0;    // kg
  double moment = 0.0;  // J, kg*m^2
  double first_moment_axial = 0.0;       // X, kg*m
  double first_moment_transverse = 0.0;  // Y, kg*m
};

void validate(const SegmentParams& p);

struct BodyModel {
  SegmentParams thigh;
  SegmentParams shank;
  double rho_body = 1041.0;  // kg/m^3
};

void validate(const BodyModel& b);

/// 70 kg / 1.75 m subject, segment masses and lengths from standard
/// anthropometric fractions, COM at 43% of segment length, COM on axis.
BodyModel default_body();

/// Segment with given COM fraction from the proximal joint and radius of
/// gyration fraction (about the proximal joint) of the segment length.
SegmentParams make_segment(double length, double radius, double mass, double com_fraction,
                           double gyration_fraction);

}  // namespace exoverse
