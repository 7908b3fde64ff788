#pragma once

// Free transport sources S(t,x) = int f0(x - t v, v) dv and the screened
// electric field E = -grad (1 - Lap)^{-1} rho. The workhorse initial datum
// is the separable Gaussian, which has a closed-form free-streamed density
// (variance sigma_x^2 + t^2 sigma_v^2); an independent quadrature path
// cross-checks it in the w = x - t v variables, where the integrand keeps
// the fixed width of the spatial factor for all t.

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "svp/fourier_grid.hpp"
#include "svp/grids.hpp"
#include "svp/interp.hpp"
#include "svp/parallel.hpp"
#include "svp/quadrature.hpp"
#include "svp/radial_fourier.hpp"

namespace svp {

struct SeparableGaussian {
  int dim = 3;
  double amplitude = 1.0;
  double sigma_x = 1.0;
  double sigma_v = 1.0;

  double spatial(double r) const {
    return amplitude * std::pow(2.0 * M_PI * sigma_x * sigma_x, -0.5 * dim) *
           std::exp(-0.5 * r * r / (sigma_x * sigma_x));
  }
  double velocity(double v) const {
    return std::pow(2.0 * M_PI * sigma_v * sigma_v, -0.5 * dim) *
           std::exp(-0.5 * v * v / (sigma_v * sigma_v));
  }
  double operator()(double rx, double rv) const { return spatial(rx) * velocity(rv); }

  // norms entering the dispersive bounds
  double l1() const { return std::abs(amplitude); }
  double l1x_linf_v() const { return std::abs(amplitude) * std::pow(2.0 * M_PI * sigma_v * sigma_v, -0.5 * dim); }
  double grad_v_l1() const {
    // int |grad B| = E|v| / sigma^2 for the unit Gaussian
    const double mean_abs_v =
        std::sqrt(2.0) * std::tgamma(0.5 * (dim + 1)) / std::tgamma(0.5 * dim) * sigma_v;
    return std::abs(amplitude) * mean_abs_v / (sigma_v * sigma_v);
  }
  double grad_v_l1x_linf_v() const {
    const double sup_grad_b = std::exp(-0.5) / sigma_v *
                              std::pow(2.0 * M_PI * sigma_v * sigma_v, -0.5 * dim);
    return std::abs(amplitude) * sup_grad_b;
  }
};

// ---------------------------------------------------------------------------
// closed-form free transport of the separable Gaussian

inline RadialSnapshot free_source(const SeparableGaussian& f0, double t,
                                  std::span<const double> radii, bool with_gradient = false) {
  if (t < 0) throw std::invalid_argument("free_source: t must be >= 0");
  const double var = f0.sigma_x * f0.sigma_x + t * t * f0.sigma_v * f0.sigma_v;
  RadialSnapshot snap;
  snap.dim = f0.dim;
  snap.time = t;
  snap.radii.assign(radii.begin(), radii.end());
  snap.values.resize(radii.size());
  if (with_gradient) snap.gradient.emplace(radii.size());
  const double norm = f0.amplitude * std::pow(2.0 * M_PI * var, -0.5 * f0.dim);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    snap.values[i] = norm * std::exp(-0.5 * r * r / var);
    if (with_gradient) (*snap.gradient)[i] = -r / var * snap.values[i];
  }
  return snap;
}

inline RadialSnapshot free_source_gradient(const SeparableGaussian& f0, double t,
                                           std::span<const double> radii) {
  auto snap = free_source(f0, t, radii, true);
  snap.values = *snap.gradient;
  snap.gradient.reset();
  return snap;
}

// quadrature cross-check in the w = x - t v variables (d = 1 or 3)
inline double free_source_quadrature(const SeparableGaussian& f0, double t, double r,
                                     bool gradient = false) {
  if (t < 0) throw std::invalid_argument("free_source_quadrature: t must be >= 0");
  if (t == 0.0) {
    auto s = free_source(f0, 0.0, std::vector<double>{std::max(r, 1e-300)}, true);
    return gradient ? (*s.gradient)[0] : s.values[0];
  }
  static const GaussLegendre gl = gauss_legendre(10);
  const double wmax = 9.0 * f0.sigma_x;
  const int wpanels = 30;

  if (f0.dim == 1) {
    double acc = 0;
    for (int p = 0; p < wpanels; ++p) {
      const double a = -wmax + 2.0 * wmax * p / wpanels;
      const double b = -wmax + 2.0 * wmax * (p + 1) / wpanels;
      for (std::size_t q = 0; q < gl.x.size(); ++q) {
        const double w = 0.5 * (a + b) + 0.5 * (b - a) * gl.x[q];
        const double wt = 0.5 * (b - a) * gl.w[q];
        const double u = (r - w) / t;
        if (!gradient)
          acc += wt * f0.spatial(std::abs(w)) * f0.velocity(std::abs(u));
        else
          acc += wt * f0.spatial(std::abs(w)) *
                 (-u / (f0.sigma_v * f0.sigma_v)) * f0.velocity(std::abs(u)) / t;
      }
    }
    return acc / t;
  }
  if (f0.dim != 3) throw std::invalid_argument("free_source_quadrature: d = 1 or 3 only");

  const int cpanels = 12;
  double acc = 0;
  for (int p = 0; p < wpanels; ++p) {
    const double a = wmax * p / wpanels, b = wmax * (p + 1) / wpanels;
    for (std::size_t q = 0; q < gl.x.size(); ++q) {
      const double w = 0.5 * (a + b) + 0.5 * (b - a) * gl.x[q];
      const double wwt = 0.5 * (b - a) * gl.w[q];
      double inner = 0;
      for (int cp = 0; cp < cpanels; ++cp) {
        const double ca = -1.0 + 2.0 * cp / cpanels, cb = -1.0 + 2.0 * (cp + 1) / cpanels;
        for (std::size_t cq = 0; cq < gl.x.size(); ++cq) {
          const double c = 0.5 * (ca + cb) + 0.5 * (cb - ca) * gl.x[cq];
          const double cwt = 0.5 * (cb - ca) * gl.w[cq];
          const double arg = std::sqrt(std::max(r * r - 2.0 * r * w * c + w * w, 0.0));
          const double u = arg / t;
          if (!gradient) {
            inner += cwt * f0.velocity(u);
          } else {
            const double darg_dr = (arg > 1e-14) ? (r - w * c) / arg : 1.0;
            inner += cwt * (-u / (f0.sigma_v * f0.sigma_v)) * f0.velocity(u) * darg_dr / t;
          }
        }
      }
      acc += wwt * w * w * f0.spatial(w) * inner;
    }
  }
  return 2.0 * M_PI * acc / (t * t * t);
}

// spatially periodized Gaussian bump (image sum over +-6 boxes)
inline double periodized_gaussian(double x, double L, double amp, double sigma) {
  double a = 0;
  for (int m = -6; m <= 6; ++m) {
    const double u = x + m * L;
    a += std::exp(-0.5 * u * u / (sigma * sigma));
  }
  return amp * std::pow(2.0 * M_PI * sigma * sigma, -0.5) * a;
}

// ---------------------------------------------------------------------------
// grid-sampled phase density (periodic box, d = 1)

struct GridDensity1D {
  PeriodicGrid1D xgrid;
  int nv = 0;
  double vmax = 0.0;
  std::vector<double> f;  // f[ix * nv + iv], v uniform on [-vmax, vmax]
  std::optional<std::vector<double>> fv;  // optional d f / d v samples

  double v(int iv) const { return -vmax + 2.0 * vmax * iv / (nv - 1); }
  double dv() const { return 2.0 * vmax / (nv - 1); }
};

inline std::vector<double> free_source_grid(const GridDensity1D& f0, double t) {
  if (t < 0) throw std::invalid_argument("free_source_grid: t must be >= 0");
  const int nx = f0.xgrid.n;
  std::vector<double> s(nx, 0.0);
  std::vector<double> row(nx);
  for (int iv = 0; iv < f0.nv; ++iv) {
    for (int ix = 0; ix < nx; ++ix) row[ix] = f0.f[ix * f0.nv + iv];
    PeriodicCubicSpline sp(row, f0.xgrid.x(0), f0.xgrid.dx());
    const double shift = t * f0.v(iv);
    const double w = (iv == 0 || iv == f0.nv - 1) ? 0.5 : 1.0;
    for (int ix = 0; ix < nx; ++ix) s[ix] += w * sp(f0.xgrid.x(ix) - shift) * f0.dv();
  }
  return s;
}

inline std::vector<double> free_source_gradient_grid(const GridDensity1D& f0, double t) {
  if (!f0.fv)
    throw std::invalid_argument("free_source_gradient_grid: grid density carries no v-derivatives");
  // d/dx S(t,x) = (1/t) int (d_v f0)(x - t v, v) dv once t > 0
  if (t <= 0) throw std::invalid_argument("free_source_gradient_grid: needs t > 0");
  const int nx = f0.xgrid.n;
  std::vector<double> s(nx, 0.0), row(nx);
  for (int iv = 0; iv < f0.nv; ++iv) {
    for (int ix = 0; ix < nx; ++ix) row[ix] = (*f0.fv)[ix * f0.nv + iv];
    PeriodicCubicSpline sp(row, f0.xgrid.x(0), f0.xgrid.dx());
    const double shift = t * f0.v(iv);
    const double w = (iv == 0 || iv == f0.nv - 1) ? 0.5 : 1.0;
    for (int ix = 0; ix < nx; ++ix) s[ix] += w * sp(f0.xgrid.x(ix) - shift) * f0.dv() / t;
  }
  return s;
}

// ---------------------------------------------------------------------------
// screened field from a radial density

struct FieldSnapshot {
  double time = 0.0;
  int dim = 3;
  std::vector<double> radii;
  std::vector<double> e;                   // E(x) = e(r) x / r
  std::optional<std::vector<double>> de;   // radial derivative e'(r)
};

inline FieldSnapshot field_from_density(const RadialSnapshot& rho,
                                        std::span<const double> kgrid = {},
                                        bool with_derivative = false) {
  rho.validate();
  std::vector<double> ks_default;
  if (kgrid.empty()) {
    ks_default = geometric_grid(1e-3, 64.0, 900);
    kgrid = ks_default;
  }
  auto rho_hat = radial_forward_fourier(rho.dim, rho.radii, rho.values, kgrid);
  std::vector<double> sym(kgrid.size());
  for (std::size_t i = 0; i < kgrid.size(); ++i)
    sym[i] = rho_hat[i] / (1.0 + kgrid[i] * kgrid[i]);

  FieldSnapshot out;
  out.time = rho.time;
  out.dim = rho.dim;
  out.radii = rho.radii;
  out.e.resize(rho.radii.size());
  if (with_derivative) out.de.emplace(rho.radii.size());

  if (rho.dim == 1) {
    std::vector<double> p1(kgrid.size()), p2(kgrid.size());
    for (std::size_t i = 0; i < kgrid.size(); ++i) {
      p1[i] = kgrid[i] * sym[i];
      p2[i] = kgrid[i] * kgrid[i] * sym[i];
    }
    OscillatoryTransform t1(kgrid, p1), t2(kgrid, p2);
    par::parallel_for(out.radii.size(), [&](std::size_t j) {
      const double r = out.radii[j];
      out.e[j] = t1.sin_integral(r) / M_PI;             // e = -h'
      if (with_derivative) (*out.de)[j] = t2.cos_integral(r) / M_PI;  // e' = -h''
    });
    return out;
  }
  if (rho.dim != 3) throw std::invalid_argument("field_from_density: radial path supports d = 1, 3");

  std::vector<double> p1(kgrid.size()), p2(kgrid.size()), p3(kgrid.size());
  for (std::size_t i = 0; i < kgrid.size(); ++i) {
    p1[i] = kgrid[i] * sym[i];
    p2[i] = kgrid[i] * kgrid[i] * sym[i];
    p3[i] = kgrid[i] * kgrid[i] * kgrid[i] * sym[i];
  }
  OscillatoryTransform t1(kgrid, p1), t2(kgrid, p2), t3(kgrid, p3);
  const double c = 1.0 / (2.0 * M_PI * M_PI);
  par::parallel_for(out.radii.size(), [&](std::size_t j) {
    const double r = out.radii[j];
    const double A = c * t1.sin_integral(r);
    const double Ap = c * t2.cos_integral(r);
    const double App = -c * t3.sin_integral(r);
    out.e[j] = -(Ap / r - A / (r * r));
    if (with_derivative) (*out.de)[j] = -(App / r - 2.0 * Ap / (r * r) + 2.0 * A / (r * r * r));
  });
  return out;
}

}  // namespace svp
