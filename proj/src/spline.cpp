#include "exoverse/spline.hpp"

#include <algorithm>
#include <cmath>

#include "exoverse/errors.hpp"

namespace exoverse {

namespace {

// Thomas algorithm; overwrites rhs with the solution.
void solve_tridiagonal(std::vector<double> lower, std::vector<double> diag,
                       std::vector<double> upper, std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
  }
}

}  // namespace

PeriodicSpline::PeriodicSpline(std::vector<double> x, std::vector<double> y, double period)
    : x_(std::move(x)), y_(std::move(y)), period_(period) {
  const std::size_t n = x_.size();
  if (n != y_.size()) throw ValidationError("spline: x and y sizes differ");
  if (n < 3) throw ValidationError("spline: need at least 3 knots");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) throw ValidationError("spline: knots must be strictly increasing");
  }
  if (!(period_ > x_.back() - x_.front())) {
    throw ValidationError("spline: period must exceed the knot span");
  }

  // interval widths, last one wraps back to the first knot
  std::vector<double> h(n);
  for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x_[i + 1] - x_[i];
  h[n - 1] = x_.front() + period_ - x_.back();

  auto yv = [&](std::size_t i) { return y_[i % n]; };
  std::vector<double> a(n), b(n), c(n), d(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double hm = h[(i + n - 1) % n];
    const double hi = h[i];
    a[i] = hm / 6.0;
    b[i] = (hm + hi) / 3.0;
    c[i] = hi / 6.0;
    d[i] = (yv(i + 1) - yv(i)) / hi - (yv(i) - yv(i + n - 1)) / hm;
  }

  // cyclic system via Sherman-Morrison around the Thomas solve
  const double gamma = -b[0];
  std::vector<double> diag = b;
  diag[0] -= gamma;
  diag[n - 1] -= a[0] * c[n - 1] / gamma;
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = c[n - 1];

  std::vector<double> sol = d;
  solve_tridiagonal(a, diag, c, sol);
  std::vector<double> q = u;
  solve_tridiagonal(a, diag, c, q);

  const double vy = sol[0] + a[0] / gamma * sol[n - 1];
  const double vq = q[0] + a[0] / gamma * q[n - 1];
  const double factor = vy / (1.0 + vq);
  m_.resize(n);
  for (std::size_t i = 0; i < n; ++i) m_[i] = sol[i] - factor * q[i];
}

int PeriodicSpline::locate(double& x) const {
  x = x_.front() + std::fmod(x - x_.front(), period_);
  if (x < x_.front()) x += period_;
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  return static_cast<int>(it - x_.begin()) - 1;
}

double PeriodicSpline::value(double x) const {
  const int i = locate(x);
  const std::size_t n = x_.size();
  const std::size_t j = (i + 1) % n;
  const double xr = i + 1 == static_cast<int>(n) ? x_.front() + period_ : x_[j];
  const double h = xr - x_[i];
  const double t0 = xr - x;
  const double t1 = x - x_[i];
  return m_[i] * t0 * t0 * t0 / (6.0 * h) + m_[j] * t1 * t1 * t1 / (6.0 * h) +
         (y_[i] / h - m_[i] * h / 6.0) * t0 + (y_[j] / h - m_[j] * h / 6.0) * t1;
}

double PeriodicSpline::derivative(double x) const {
  const int i = locate(x);
  const std::size_t n = x_.size();
  const std::size_t j = (i + 1) % n;
  const double xr = i + 1 == static_cast<int>(n) ? x_.front() + period_ : x_[j];
  const double h = xr - x_[i];
  const double t0 = xr - x;
  const double t1 = x - x_[i];
  return -m_[i] * t0 * t0 / (2.0 * h) + m_[j] * t1 * t1 / (2.0 * h) + (y_[j] - y_[i]) / h -
         (m_[j] - m_[i]) * h / 6.0;
}

double PeriodicSpline::second_derivative(double x) const {
  const int i = locate(x);
  const std::size_t n = x_.size();
  const std::size_t j = (i + 1) % n;
  const double xr = i + 1 == static_cast<int>(n) ? x_.front() + period_ : x_[j];
  const double h = xr - x_[i];
  return (m_[i] * (xr - x) + m_[j] * (x - x_[i])) / h;
}

}  // namespace exoverse
