// Independent numerical oracles used by the tests. These deliberately avoid
// the closed forms under test: drag torques come from composite-Simpson
// integration over the segment elements, and the Coriolis check rebuilds the
// velocity terms from finite differences of the inertia matrix.
#pragma once

#include <cmath>
#include <functional>

#include "exoverse/dynamics.hpp"

namespace exoverse::oracles {

inline double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

/// Composite Simpson rule with n (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2 != 0) ++n;
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 == 0 ? 2.0 : 4.0);
  return acc * h / 3.0;
}

/// Element-wise drag torques about each joint, integrated numerically over
/// the thigh and shank.
struct ElementDrag {
  double thigh;  // about the hip
  double shank;  // about the knee
};

inline ElementDrag drag_by_integration(const BodyModel& body, Vec2 theta, Vec2 theta_dot,
                                       double rho_fluid, double drag_coeff, int elements) {
  const double d1 = theta_dot.hip;
  const double d12 = theta_dot.hip + theta_dot.knee;
  const double l1 = body.thigh.length;
  const double rho_cd = rho_fluid * drag_coeff;

  const auto thigh_element = [&](double s) {
    return -rho_cd * body.thigh.radius * s * (s * d1) * (s * d1) * sgn(d1);
  };
  const auto shank_element = [&](double s) {
    return -rho_cd * body.shank.radius * s *
           (l1 * l1 * d1 * d1 * sgn(d1) + s * s * d12 * d12 * sgn(d12) +
            l1 * s * d1 * d12 * std::cos(theta.knee) * (sgn(d1) + sgn(d12)));
  };
  return {simpson(thigh_element, 0.0, body.thigh.length, elements),
          simpson(shank_element, 0.0, body.shank.length, elements)};
}

/// Coriolis vector rebuilt from the Christoffel symbols of the inertia
/// matrix, with the partial derivatives taken by central differences.
inline Vec2 coriolis_by_christoffel(const BodyModel& body, Vec2 theta, Vec2 theta_dot,
                                    double h = 1e-5) {
  double dm[2][2][2];  // dM[i][j][k] = dM_ij / dtheta_k
  for (int k = 0; k < 2; ++k) {
    Vec2 tp = theta;
    Vec2 tm = theta;
    tp[k] += h;
    tm[k] -= h;
    const Mat2 mp = inertia_matrix(body, tp);
    const Mat2 mm = inertia_matrix(body, tm);
    dm[0][0][k] = (mp.m11 - mm.m11) / (2.0 * h);
    dm[0][1][k] = (mp.m12 - mm.m12) / (2.0 * h);
    dm[1][0][k] = (mp.m21 - mm.m21) / (2.0 * h);
    dm[1][1][k] = (mp.m22 - mm.m22) / (2.0 * h);
  }
  Vec2 v{};
  for (int i = 0; i < 2; ++i) {
    double acc = 0.0;
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        const double gamma = 0.5 * (dm[i][j][k] + dm[i][k][j] - dm[j][k][i]);
        acc += gamma * theta_dot[j] * theta_dot[k];
      }
    }
    v[i] = acc;
  }
  return v;
}

}  // namespace exoverse::oracles
