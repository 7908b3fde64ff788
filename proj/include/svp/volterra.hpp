#pragma once

// Per-frequency Volterra convolution equations on a uniform time grid:
//     rho(t) = S(t) + int_0^t K(t-s) rho(s) ds
// Product trapezoidal marching. The t = 0 kernel value vanishes for the
// mode kernels here, so the diagonal weight is zero and the update is
// explicit; a singular-step guard is kept anyway. With K(0) = 0 the
// discrete convolution is associative, so the resolvent series G solving
//     G = K + K * G
// reproduces the marching solution exactly: rho = S + G * S on the grid.

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "svp/dispersion.hpp"
#include "svp/equilibrium.hpp"
#include "svp/grids.hpp"
#include "svp/parallel.hpp"

namespace svp {

enum class SeriesKind { source, density, kernel, resolvent };

struct ModeSeries {
  TimeGrid grid;
  std::vector<double> xi;  // |xi| per mode
  SeriesKind kind = SeriesKind::source;
  std::vector<cplx> values;  // mode-major: values[m * nodes + k]

  ModeSeries() = default;
  ModeSeries(TimeGrid g, std::vector<double> modes, SeriesKind knd)
      : grid(g), xi(std::move(modes)), kind(knd), values(xi.size() * g.nodes(), cplx(0.0)) {}

  int modes() const { return static_cast<int>(xi.size()); }
  int nodes() const { return grid.nodes(); }
  cplx& at(int m, int k) { return values[static_cast<std::size_t>(m) * nodes() + k]; }
  const cplx& at(int m, int k) const { return values[static_cast<std::size_t>(m) * nodes() + k]; }
  std::span<const cplx> mode(int m) const {
    return {values.data() + static_cast<std::size_t>(m) * nodes(), static_cast<std::size_t>(nodes())};
  }
  std::span<cplx> mode(int m) {
    return {values.data() + static_cast<std::size_t>(m) * nodes(), static_cast<std::size_t>(nodes())};
  }
};

// Trapezoidal causal convolution (a * b)(t_n) = int_0^{t_n} a(t_n - s) b(s) ds.
inline std::vector<cplx> convolve_trapezoid(std::span<const cplx> a, std::span<const cplx> b,
                                            double dt) {
  if (a.size() != b.size()) throw std::invalid_argument("convolve_trapezoid: length mismatch");
  const int n = static_cast<int>(a.size());
  std::vector<cplx> out(n, cplx(0.0));
  for (int k = 1; k < n; ++k) {
    cplx acc = 0.5 * (a[k] * b[0] + a[0] * b[k]);
    for (int m = 1; m < k; ++m) acc += a[k - m] * b[m];
    out[k] = dt * acc;
  }
  return out;
}

namespace detail {

// March one mode: y(t) = rhs(t) + int_0^t K(t-s) y(s) ds.
inline void march_mode(std::span<const cplx> kernel, std::span<const cplx> rhs, double dt,
                       std::span<cplx> out) {
  const int n = static_cast<int>(kernel.size());
  const cplx diag = 1.0 - 0.5 * dt * kernel[0];
  if (std::abs(diag) < 1e-14)
    throw std::runtime_error("volterra: singular step, 1 - (dt/2) K(0) vanished");
  out[0] = rhs[0];
  for (int k = 1; k < n; ++k) {
    cplx acc = 0.5 * kernel[k] * out[0];
    for (int m = 1; m < k; ++m) acc += kernel[k - m] * out[m];
    out[k] = (rhs[k] + dt * acc) / diag;
  }
}

}  // namespace detail

// Tabulates K^(t, |xi|) for each mode on the grid.
inline ModeSeries mode_sweep(const EquilibriumProfile& mu, const TimeGrid& grid,
                             std::vector<double> xi_list) {
  if (xi_list.empty()) throw std::invalid_argument("mode_sweep: empty mode list");
  ModeSeries ks(grid, std::move(xi_list), SeriesKind::kernel);
  const int nt = ks.nodes();
  par::parallel_for(ks.xi.size(), [&](std::size_t m) {
    const double k = ks.xi[m];
    std::vector<double> xi_vec(mu.dimension(), 0.0);
    xi_vec[0] = k;  // radial reduction: modes live along the symmetry axis
    for (int j = 0; j < nt; ++j)
      ks.at(static_cast<int>(m), j) = (k == 0.0) ? 0.0 : khat_time(mu, grid.node(j), xi_vec);
  });
  return ks;
}

inline void check_compatible(const ModeSeries& a, const ModeSeries& b, const char* who) {
  if (!a.grid.matches(b.grid)) throw std::invalid_argument(std::string(who) + ": grids differ");
  if (a.xi != b.xi) throw std::invalid_argument(std::string(who) + ": mode lists differ");
}

// rho^ = S^ + K^ * rho^ per mode.
inline ModeSeries solve_mode_volterra(const ModeSeries& kernel, const ModeSeries& source) {
  check_compatible(kernel, source, "solve_mode_volterra");
  ModeSeries rho(kernel.grid, kernel.xi, SeriesKind::density);
  const double dt = kernel.grid.dt();
  par::parallel_for(kernel.xi.size(), [&](std::size_t m) {
    detail::march_mode(kernel.mode(static_cast<int>(m)), source.mode(static_cast<int>(m)), dt,
                       rho.mode(static_cast<int>(m)));
  });
  return rho;
}

// G^ = K^ + K^ * G^ per mode.
inline ModeSeries resolvent_mode(const ModeSeries& kernel) {
  ModeSeries g(kernel.grid, kernel.xi, SeriesKind::resolvent);
  const double dt = kernel.grid.dt();
  par::parallel_for(kernel.xi.size(), [&](std::size_t m) {
    detail::march_mode(kernel.mode(static_cast<int>(m)), kernel.mode(static_cast<int>(m)), dt,
                       g.mode(static_cast<int>(m)));
  });
  return g;
}

}  // namespace svp
