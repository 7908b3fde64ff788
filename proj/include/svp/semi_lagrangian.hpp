#pragma once

// Strang-split semi-Lagrangian solver for the screened system on a periodic
// box: advect in x (half step), solve E = -grad (1-Lap)^{-1} (rho - bg),
// advect in v (full step), advect in x (half step). The full distribution
// g = mu + f is advected; cubic splines do the interpolation (cyclic in x,
// natural with zero extension in v). A constant shift per row keeps the
// x-advection mass-exact (circulant interpolation reproduces constants).

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "svp/equilibrium.hpp"
#include "svp/fourier_grid.hpp"
#include "svp/interp.hpp"
#include "svp/parallel.hpp"
#include "svp/transport.hpp"

namespace svp {

struct SemiLagrangianConfig {
  int dim = 1;  // phase-space dimension per coordinate (1 or 2)
  double L = 20.0;
  int nx = 64;
  double vmax = 8.0;
  int nv = 512;
  double dt = 0.0125;
  double t_max = 20.0;
  int save_stride = 16;  // store the density every save_stride steps
  double theta = 1.0;        // maxwellian background temperature
  bool background = true;    // false runs the mu = 0 system (perturbation only)
  SeparableGaussian f0{1, 1e-3, 1.0, 1.0};
  std::vector<double> f_snapshot_times;  // optional full-f snapshots
};

struct SemiLagrangianResult {
  PeriodicGrid1D xgrid;
  std::vector<double> times;
  std::vector<double> rho;  // perturbation density, [it * nx + ix]
  double mass_drift = 0.0;  // |mass(t_max) - mass(0)| / |mass(0)|
  double l2_drift = 0.0;    // relative drift of |g|_2
  // full-f snapshots (perturbation part) for scattering checks
  std::vector<double> snapshot_times;
  std::vector<std::vector<double>> f_snapshots;  // [ix * nv + iv]
  int nv = 0;
  double vmax = 0.0;
};

inline SemiLagrangianResult semi_lagrangian_reference(const SemiLagrangianConfig& cfg) {
  if (cfg.dim != 1 && cfg.dim != 2)
    throw std::invalid_argument("semi_lagrangian_reference: phase dimension must be 1 or 2");
  if (cfg.dim == 2) throw std::invalid_argument("semi_lagrangian_reference: use the d = 2 overload");

  const PeriodicGrid1D xg(cfg.L, cfg.nx);
  const int nx = cfg.nx, nv = cfg.nv;
  const double dv = 2.0 * cfg.vmax / (nv - 1);
  auto vat = [&](int iv) { return -cfg.vmax + iv * dv; };
  auto mu = EquilibriumProfile::maxwellian(1, cfg.theta);

  std::vector<double> g(static_cast<std::size_t>(nx) * nv);
  std::vector<double> mu_row(nv, 0.0);
  if (cfg.background)
    for (int iv = 0; iv < nv; ++iv) {
      const double v[1] = {vat(iv)};
      mu_row[iv] = mu(std::span<const double>(v, 1));
    }
  for (int ix = 0; ix < nx; ++ix)
    for (int iv = 0; iv < nv; ++iv) {
      const double a =
          periodized_gaussian(xg.x(ix), cfg.L, cfg.f0.amplitude, cfg.f0.sigma_x);
      g[static_cast<std::size_t>(ix) * nv + iv] =
          mu_row[iv] + a * std::pow(2.0 * M_PI * cfg.f0.sigma_v * cfg.f0.sigma_v, -0.5) *
                           std::exp(-0.5 * vat(iv) * vat(iv) / (cfg.f0.sigma_v * cfg.f0.sigma_v));
    }

  const double bg_density = [&] {
    double acc = 0;
    for (int iv = 0; iv < nv; ++iv) acc += ((iv == 0 || iv == nv - 1) ? 0.5 : 1.0) * mu_row[iv];
    return acc * dv;
  }();

  auto density = [&](std::vector<double>& rho) {
    rho.assign(nx, 0.0);
    for (int ix = 0; ix < nx; ++ix) {
      double acc = 0;
      const double* col = g.data() + static_cast<std::size_t>(ix) * nv;
      for (int iv = 0; iv < nv; ++iv) acc += ((iv == 0 || iv == nv - 1) ? 0.5 : 1.0) * col[iv];
      rho[ix] = acc * dv - bg_density;
    }
  };

  auto advect_x = [&](double tau) {
    // shift each v-row by v * tau (constant per row)
    par::parallel_for(static_cast<std::size_t>(nv), [&](std::size_t iv) {
      std::vector<double> row(nx);
      for (int ix = 0; ix < nx; ++ix) row[ix] = g[static_cast<std::size_t>(ix) * nv + iv];
      PeriodicCubicSpline sp(row, xg.x(0), xg.dx());
      const double shift = vat(static_cast<int>(iv)) * tau;
      for (int ix = 0; ix < nx; ++ix)
        g[static_cast<std::size_t>(ix) * nv + iv] = sp(xg.x(ix) - shift);
    });
  };

  auto advect_v = [&](std::span<const double> efield, double tau) {
    par::parallel_for(static_cast<std::size_t>(nx), [&](std::size_t ix) {
      std::span<const double> col(g.data() + ix * nv, static_cast<std::size_t>(nv));
      NaturalCubicSpline sp(col, -cfg.vmax, dv);
      const double shift = efield[ix] * tau;
      for (int iv = 0; iv < nv; ++iv)
        g[ix * nv + iv] = sp(vat(iv) - shift);
    });
  };

  auto total_mass = [&] {
    double acc = 0;
    for (int ix = 0; ix < nx; ++ix) {
      const double* col = g.data() + static_cast<std::size_t>(ix) * nv;
      for (int iv = 0; iv < nv; ++iv) acc += ((iv == 0 || iv == nv - 1) ? 0.5 : 1.0) * col[iv];
    }
    return acc * dv * xg.dx();
  };
  auto total_l2 = [&] {
    double acc = 0;
    for (double x : g) acc += x * x;
    return std::sqrt(acc);
  };

  SemiLagrangianResult res;
  res.xgrid = xg;
  res.nv = nv;
  res.vmax = cfg.vmax;
  const double mass0 = total_mass(), l20 = total_l2();

  const int nsteps = static_cast<int>(std::round(cfg.t_max / cfg.dt));
  std::vector<double> rho(nx), efield(nx);
  auto maybe_save = [&](int step) {
    if (step % cfg.save_stride == 0 || step == nsteps) {
      density(rho);
      res.times.push_back(step * cfg.dt);
      res.rho.insert(res.rho.end(), rho.begin(), rho.end());
    }
    const double t = step * cfg.dt;
    for (double ts : cfg.f_snapshot_times) {
      if (std::abs(t - ts) < 0.5 * cfg.dt) {
        res.snapshot_times.push_back(t);
        std::vector<double> pert(g.size());
        for (int ix = 0; ix < nx; ++ix)
          for (int iv = 0; iv < nv; ++iv)
            pert[static_cast<std::size_t>(ix) * nv + iv] =
                g[static_cast<std::size_t>(ix) * nv + iv] - mu_row[iv];
        res.f_snapshots.push_back(std::move(pert));
      }
    }
  };
  maybe_save(0);

  for (int step = 1; step <= nsteps; ++step) {
    advect_x(0.5 * cfg.dt);
    density(rho);
    efield = field_from_density_1d(xg, rho);
    advect_v(efield, cfg.dt);
    advect_x(0.5 * cfg.dt);
    maybe_save(step);
  }

  res.mass_drift = std::abs(total_mass() - mass0) / std::abs(mass0);
  res.l2_drift = std::abs(total_l2() - l20) / l20;
  return res;
}

// ---------------------------------------------------------------------------
// d = 2 phase space (x, y, vx, vy); smoke-scale cross-check path

struct SemiLagrangian2DConfig {
  double L = 20.0;
  int nx = 32;
  double vmax = 6.0;
  int nv = 32;
  double dt = 0.05;
  double t_max = 2.0;
  double theta = 1.0;
  double amplitude = 1e-3;
  double sigma_x = 1.0, sigma_v = 1.0;
};

struct SemiLagrangian2DResult {
  std::vector<double> times;
  std::vector<double> rho;  // [it * nx * nx + iy * nx + ix]
  double mass_drift = 0.0;
};

inline SemiLagrangian2DResult semi_lagrangian_reference_2d(const SemiLagrangian2DConfig& cfg) {
  const int nx = cfg.nx, nv = cfg.nv;
  const PeriodicGrid1D xg(cfg.L, nx);
  const double dv = 2.0 * cfg.vmax / (nv - 1);
  auto vat = [&](int iv) { return -cfg.vmax + iv * dv; };
  const auto idx = [&](int ix, int iy, int ivx, int ivy) {
    return ((static_cast<std::size_t>(ix) * nx + iy) * nv + ivx) * nv + ivy;
  };

  // maxwellian in 2 velocity dimensions
  std::vector<double> g(static_cast<std::size_t>(nx) * nx * nv * nv);
  auto axform = [&](double x) {
    return periodized_gaussian(x, cfg.L, 1.0, cfg.sigma_x);
  };
  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < nx; ++iy)
      for (int ivx = 0; ivx < nv; ++ivx)
        for (int ivy = 0; ivy < nv; ++ivy) {
          const double v2 = vat(ivx) * vat(ivx) + vat(ivy) * vat(ivy);
          const double mu = std::exp(-0.5 * v2 / cfg.theta) / (2.0 * M_PI * cfg.theta);
          const double pert = cfg.amplitude * axform(xg.x(ix)) * axform(xg.x(iy)) *
                              std::exp(-0.5 * v2 / (cfg.sigma_v * cfg.sigma_v)) /
                              (2.0 * M_PI * cfg.sigma_v * cfg.sigma_v);
          g[idx(ix, iy, ivx, ivy)] = mu + pert;
        }

  std::vector<double> wv(nv, 1.0);
  wv.front() = wv.back() = 0.5;

  auto density = [&](std::vector<double>& rho) {
    rho.assign(static_cast<std::size_t>(nx) * nx, 0.0);
    double bg = 0;
    for (int ivx = 0; ivx < nv; ++ivx)
      for (int ivy = 0; ivy < nv; ++ivy)
        bg += wv[ivx] * wv[ivy] *
              std::exp(-0.5 * (vat(ivx) * vat(ivx) + vat(ivy) * vat(ivy)) / cfg.theta) /
              (2.0 * M_PI * cfg.theta);
    bg *= dv * dv;
    for (int ix = 0; ix < nx; ++ix)
      for (int iy = 0; iy < nx; ++iy) {
        double acc = 0;
        for (int ivx = 0; ivx < nv; ++ivx)
          for (int ivy = 0; ivy < nv; ++ivy)
            acc += wv[ivx] * wv[ivy] * g[idx(ix, iy, ivx, ivy)];
        rho[static_cast<std::size_t>(ix) * nx + iy] = acc * dv * dv - bg;
      }
  };

  // spectral field solve on the 2-d torus
  auto field = [&](const std::vector<double>& rho, std::vector<double>& ex,
                   std::vector<double>& ey) {
    const int half = nx / 2;
    ex.assign(rho.size(), 0.0);
    ey.assign(rho.size(), 0.0);
    for (int mx = -half + 1; mx <= half; ++mx)
      for (int my = -half + 1; my <= half; ++my) {
        if (mx == 0 && my == 0) continue;
        const double kx = 2.0 * M_PI * mx / cfg.L, ky = 2.0 * M_PI * my / cfg.L;
        cplx coeff = 0;
        for (int ix = 0; ix < nx; ++ix)
          for (int iy = 0; iy < nx; ++iy)
            coeff += rho[static_cast<std::size_t>(ix) * nx + iy] *
                     std::exp(cplx(0, -(kx * xg.x(ix) + ky * xg.x(iy))));
        coeff /= double(nx) * double(nx);
        const double k2 = kx * kx + ky * ky;
        const cplx fx = cplx(0, -kx) * coeff / (1.0 + k2);
        const cplx fy = cplx(0, -ky) * coeff / (1.0 + k2);
        for (int ix = 0; ix < nx; ++ix)
          for (int iy = 0; iy < nx; ++iy) {
            const cplx ph = std::exp(cplx(0, kx * xg.x(ix) + ky * xg.x(iy)));
            ex[static_cast<std::size_t>(ix) * nx + iy] += (fx * ph).real();
            ey[static_cast<std::size_t>(ix) * nx + iy] += (fy * ph).real();
          }
      }
  };

  auto advect_space = [&](int axis, double tau) {
    // axis 0: shift ix by vx tau; axis 1: shift iy by vy tau
    par::parallel_for(static_cast<std::size_t>(nx) * nv * nv, [&](std::size_t flat) {
      const int ivy = flat % nv;
      const int ivx = (flat / nv) % nv;
      const int other = static_cast<int>(flat / (static_cast<std::size_t>(nv) * nv));
      std::vector<double> row(nx);
      for (int i = 0; i < nx; ++i)
        row[i] = axis == 0 ? g[idx(i, other, ivx, ivy)] : g[idx(other, i, ivx, ivy)];
      PeriodicCubicSpline sp(row, xg.x(0), xg.dx());
      const double shift = (axis == 0 ? vat(ivx) : vat(ivy)) * tau;
      for (int i = 0; i < nx; ++i) {
        const double val = sp(xg.x(i) - shift);
        (axis == 0 ? g[idx(i, other, ivx, ivy)] : g[idx(other, i, ivx, ivy)]) = val;
      }
    });
  };

  auto advect_velocity = [&](int axis, const std::vector<double>& e, double tau) {
    par::parallel_for(static_cast<std::size_t>(nx) * nx * nv, [&](std::size_t flat) {
      const int ov = flat % nv;  // the other velocity index
      const int iy = (flat / nv) % nx;
      const int ix = static_cast<int>(flat / (static_cast<std::size_t>(nv) * nx));
      std::vector<double> row(nv);
      for (int i = 0; i < nv; ++i)
        row[i] = axis == 0 ? g[idx(ix, iy, i, ov)] : g[idx(ix, iy, ov, i)];
      NaturalCubicSpline sp(row, -cfg.vmax, dv);
      const double shift = e[static_cast<std::size_t>(ix) * nx + iy] * tau;
      for (int i = 0; i < nv; ++i) {
        const double val = sp(vat(i) - shift);
        (axis == 0 ? g[idx(ix, iy, i, ov)] : g[idx(ix, iy, ov, i)]) = val;
      }
    });
  };

  auto total_mass = [&] {
    double acc = 0;
    for (double x : g) acc += x;
    return acc;
  };

  SemiLagrangian2DResult res;
  const double mass0 = total_mass();
  const int nsteps = static_cast<int>(std::round(cfg.t_max / cfg.dt));
  std::vector<double> rho, ex, ey;
  density(rho);
  res.times.push_back(0.0);
  res.rho.insert(res.rho.end(), rho.begin(), rho.end());
  for (int step = 1; step <= nsteps; ++step) {
    advect_space(0, 0.5 * cfg.dt);
    advect_space(1, 0.5 * cfg.dt);
    density(rho);
    field(rho, ex, ey);
    advect_velocity(0, ex, cfg.dt);
    advect_velocity(1, ey, cfg.dt);
    advect_space(1, 0.5 * cfg.dt);
    advect_space(0, 0.5 * cfg.dt);
  }
  density(rho);
  res.times.push_back(cfg.t_max);
  res.rho.insert(res.rho.end(), rho.begin(), rho.end());
  res.mass_drift = std::abs(total_mass() - mass0) / std::abs(mass0);
  return res;
}

}  // namespace svp
