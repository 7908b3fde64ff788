#pragma once

// Interpolation helpers shared by the kinetic solvers: cyclic and natural
// cubic splines on uniform grids (semi-Lagrangian advection), local cubic
// evaluation on periodic uniform grids and on non-uniform grids
// (field histories).

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace svp {

namespace detail {

inline void solve_tridiagonal(std::span<const double> a, std::span<const double> b,
                              std::span<const double> c, std::span<double> rhs) {
  const std::size_t n = rhs.size();
  std::vector<double> cp(n);
  cp[0] = c[0] / b[0];
  rhs[0] /= b[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double m = 1.0 / (b[i] - a[i] * cp[i - 1]);
    cp[i] = c[i] * m;
    rhs[i] = (rhs[i] - a[i] * rhs[i - 1]) * m;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= cp[i] * rhs[i + 1];
}

}  // namespace detail

// C^2 cubic spline on a uniform periodic grid (Sherman-Morrison closure of
// the cyclic tridiagonal system).
class PeriodicCubicSpline {
 public:
  PeriodicCubicSpline(std::span<const double> y, double x0, double h) : y_(y.begin(), y.end()), x0_(x0), h_(h) {
    const std::size_t n = y_.size();
    if (n < 4) throw std::invalid_argument("PeriodicCubicSpline: need >= 4 points");
    // second derivatives m_i: m_{i-1} + 4 m_i + m_{i+1} = 6 (y_{i-1} - 2 y_i + y_{i+1}) / h^2, cyclic
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double ym = y_[(i + n - 1) % n], yc = y_[i], yp = y_[(i + 1) % n];
      rhs[i] = 6.0 * (ym - 2.0 * yc + yp) / (h * h);
    }
    // cyclic system with diag 4, off-diag 1: Sherman-Morrison
    std::vector<double> a(n, 1.0), b(n, 4.0), c(n, 1.0);
    const double alpha = 1.0, beta = 1.0, gamma = -4.0;
    b[0] -= gamma;
    b[n - 1] -= alpha * beta / gamma;
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = alpha;
    std::vector<double> rhs2 = rhs, u2 = u;
    detail::solve_tridiagonal(a, b, c, rhs2);
    detail::solve_tridiagonal(a, b, c, u2);
    const double fact = (rhs2[0] + beta * rhs2[n - 1] / gamma) /
                        (1.0 + u2[0] + beta * u2[n - 1] / gamma);
    m_.resize(n);
    for (std::size_t i = 0; i < n; ++i) m_[i] = rhs2[i] - fact * u2[i];
  }

  double operator()(double x) const {
    const std::size_t n = y_.size();
    const double L = n * h_;
    double t = std::fmod(x - x0_, L);
    if (t < 0) t += L;
    std::size_t i = std::min(static_cast<std::size_t>(t / h_), n - 1);
    const double s = t - i * h_;
    const std::size_t ip = (i + 1) % n;
    const double a = (h_ - s) / h_, b = s / h_;
    return a * y_[i] + b * y_[ip] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[ip]) * h_ * h_ / 6.0;
  }

 private:
  std::vector<double> y_, m_;
  double x0_, h_;
};

// Natural cubic spline on a uniform grid; evaluates to zero outside the
// grid (distributions vanish at the velocity cutoff).
class NaturalCubicSpline {
 public:
  NaturalCubicSpline(std::span<const double> y, double x0, double h) : y_(y.begin(), y.end()), x0_(x0), h_(h) {
    const std::size_t n = y_.size();
    if (n < 4) throw std::invalid_argument("NaturalCubicSpline: need >= 4 points");
    std::vector<double> a(n, 1.0), b(n, 4.0), c(n, 1.0), rhs(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i)
      rhs[i] = 6.0 * (y_[i - 1] - 2.0 * y_[i] + y_[i + 1]) / (h * h);
    b[0] = 1.0;
    c[0] = 0.0;
    b[n - 1] = 1.0;
    a[n - 1] = 0.0;
    detail::solve_tridiagonal(a, b, c, rhs);
    m_ = std::move(rhs);
  }

  double operator()(double x) const {
    const std::size_t n = y_.size();
    const double t = x - x0_;
    if (t < 0.0 || t > (n - 1) * h_) return 0.0;
    std::size_t i = std::min(static_cast<std::size_t>(t / h_), n - 2);
    const double s = t - i * h_;
    const double a = (h_ - s) / h_, b = s / h_;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h_ * h_ / 6.0;
  }

 private:
  std::vector<double> y_, m_;
  double x0_, h_;
};

// Local cubic (Catmull-Rom) on a uniform periodic grid.
inline double catmull_rom_periodic(std::span<const double> y, double x0, double h, double x) {
  const int n = static_cast<int>(y.size());
  const double L = n * h;
  double t = std::fmod(x - x0, L);
  if (t < 0) t += L;
  int i = static_cast<int>(t / h);
  if (i >= n) i = n - 1;
  const double s = (t - i * h) / h;
  const double p0 = y[(i + n - 1) % n], p1 = y[i], p2 = y[(i + 1) % n], p3 = y[(i + 2) % n];
  return p1 + 0.5 * s * (p2 - p0 + s * (2 * p0 - 5 * p1 + 4 * p2 - p3 + s * (3 * (p1 - p2) + p3 - p0)));
}

// Local cubic Lagrange on a non-uniform ascending grid; clamps outside.
inline double lagrange_cubic(std::span<const double> xs, std::span<const double> ys, double x) {
  const std::size_t n = xs.size();
  if (n < 4) throw std::invalid_argument("lagrange_cubic: need >= 4 points");
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  std::size_t lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (xs[mid] <= x ? lo : hi) = mid;
  }
  std::size_t i0 = (lo == 0) ? 0 : (lo + 2 < n ? lo - 1 : n - 4);
  double out = 0.0;
  for (std::size_t a = 0; a < 4; ++a) {
    double term = ys[i0 + a];
    for (std::size_t b = 0; b < 4; ++b)
      if (a != b) term *= (x - xs[i0 + b]) / (xs[i0 + a] - xs[i0 + b]);
    out += term;
  }
  return out;
}

}  // namespace svp
