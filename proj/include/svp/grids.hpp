#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace svp {

// Uniform time grid on [0, t_max] with nodes t_k = k*dt.
struct TimeGrid {
  double t_max = 1.0;
  int steps = 1;  // number of intervals; nodes = steps + 1

  TimeGrid() = default;
  TimeGrid(double tmax, int n) : t_max(tmax), steps(n) {
    if (!(tmax > 0.0)) throw std::invalid_argument("TimeGrid: t_max must be > 0");
    if (n < 1) throw std::invalid_argument("TimeGrid: steps must be >= 1");
  }
  double dt() const { return t_max / steps; }
  int nodes() const { return steps + 1; }
  double node(int k) const { return k * dt(); }

  bool matches(const TimeGrid& o) const { return steps == o.steps && t_max == o.t_max; }
};

inline std::vector<double> geometric_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("geometric_grid: need 0 < lo < hi");
  if (n < 2) throw std::invalid_argument("geometric_grid: need n >= 2");
  std::vector<double> g(n);
  const double ratio = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) g[i] = lo * std::exp(ratio * i);
  g.front() = lo;
  g.back() = hi;
  return g;
}

inline std::vector<double> uniform_grid(double lo, double hi, int n) {
  if (n < 2) throw std::invalid_argument("uniform_grid: need n >= 2");
  std::vector<double> g(n);
  const double h = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) g[i] = lo + h * i;
  g.back() = hi;
  return g;
}

inline double sphere_surface_area(int d) {
  // |S^{d-1}|: 2, 2*pi, 4*pi, ...
  if (d < 1) throw std::invalid_argument("sphere_surface_area: d >= 1");
  return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}

}  // namespace svp
