#pragma once

#include <vector>

namespace exoverse {

/// Cubic spline with periodic boundary conditions. Knots must be strictly
/// increasing; the period is (x.back() + gap) - x.front() where the closing
/// gap is supplied by the caller, i.e. the curve wraps from the last knot
/// back to the first.
class PeriodicSpline {
 public:
  PeriodicSpline(std::vector<double> x, std::vector<double> y, double period);

  double value(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;
  double period() const { return period_; }

 private:
  int locate(double& x) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at knots
  double period_;
};

}  // namespace exoverse
