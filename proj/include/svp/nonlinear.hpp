#pragma once

// Global-in-time Picard iteration for the screened system in one phase
// dimension on a periodic box. Each step assembles the source
//     S = I + R_L - R_NL,
//     I(t,x)    = int f0(X_{0,t}(x,v), V_{0,t}(x,v)) dv,
//     R_NL(t,x) = int_0^t int E(s, X_{s,t}) . mu'(V_{s,t}) dv ds,
//     R_L(t,x)  = int_0^t int E(s, x-(t-s)v) . mu'(v) dv ds,
// from the previous iterate's field, solves the per-mode Volterra equation
// for the density, and rebuilds the field. R_L and R_NL share one
// trajectory sweep and identical quadrature nodes, so their O(eps)
// quadrature errors cancel in the difference.
//
// The free-streaming part of the source is known per mode in closed form
// (S_free^(t, k_m) = c_m exp(-(k_m t sigma_v)^2 / 2)); only the correction
// S - S_free is sampled on the coarse source grid and interpolated in time.
// The initial-data quadrature refines its v-grid with t to outrun the
// phase-mixing aliasing of the periodic box.

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "svp/characteristics.hpp"
#include "svp/equilibrium.hpp"
#include "svp/fourier_grid.hpp"
#include "svp/interp.hpp"
#include "svp/parallel.hpp"
#include "svp/transport.hpp"
#include "svp/volterra.hpp"

namespace svp {

struct NonlinearConfig {
  double L = 20.0;
  int nx = 64;
  double t_max = 20.0;
  double dt = 0.025;      // volterra grid spacing
  int source_stride = 8;  // source sampled every source_stride volterra nodes
  double char_dt = 0.1;   // trajectory step = reaction s-quadrature spacing
  double vmax = 7.0;
  double v_coarse_h = 0.1;    // reaction v-quadrature spacing
  double alias_modes = 24.0;  // initial-data v-grid refinement target
  int max_picard = 20;
  double picard_tol = 1e-8;
  double epsilon = 0.05;  // bootstrap threshold
  double theta = 1.0;
  double amplitude = 1e-3;
  double sigma_x = 1.0;
  double sigma_v = 1.0;

  int volterra_nodes() const { return static_cast<int>(std::round(t_max / dt)) + 1; }
  int source_nodes() const { return (volterra_nodes() - 1) / source_stride + 1; }
  double source_dt() const { return dt * source_stride; }
  double f0(double x, double v) const {
    return periodized_gaussian(x, L, amplitude, sigma_x) *
           std::pow(2.0 * M_PI * sigma_v * sigma_v, -0.5) *
           std::exp(-0.5 * v * v / (sigma_v * sigma_v));
  }
  double mu_prime(double v) const {
    return -v / theta * std::pow(2.0 * M_PI * theta, -0.5) * std::exp(-0.5 * v * v / theta);
  }
  // exact Fourier coefficients of the free-streaming source
  cplx source_free_mode(double t, double k) const {
    const double cm = amplitude * std::exp(-0.5 * k * k * sigma_x * sigma_x) / L;
    return cm * std::exp(-0.5 * k * k * t * t * sigma_v * sigma_v);
  }
};

struct BootstrapMonitor {
  double epsilon = 0.0;
  std::vector<double> times;
  std::vector<double> n_of_t;       // running sup of the weighted norms
  std::vector<double> weighted;     // per-node weighted norm (before the sup)
  double breach_time = -1.0;        // first time with N > epsilon; -1 if none
  bool breached = false;
};

struct DensityHistory1D {
  PeriodicGrid1D xgrid;
  double dt = 0.0;
  std::vector<double> values;  // [it * nx + ix]

  int nodes() const { return dt > 0 ? static_cast<int>(values.size() / xgrid.n) : 0; }
  std::span<const double> at(int it) const {
    return {values.data() + static_cast<std::size_t>(it) * xgrid.n,
            static_cast<std::size_t>(xgrid.n)};
  }
};

struct SourceParts {
  std::vector<double> times;     // source nodes
  std::vector<double> initial;   // [j * nx + ix]
  std::vector<double> reaction_l;
  std::vector<double> reaction_nl;
};

struct PicardResult {
  PeriodicGrid1D xgrid;
  DensityHistory1D rho;
  PeriodicFieldHistory1D field;
  SourceParts sources;
  std::vector<double> residuals;  // weighted Y-norm of successive differences
  bool converged = false;
  int iterations = 0;
  BootstrapMonitor monitor;
};

namespace detail {

// v-grid for the initial-data quadrature: spacing tightens like L/(a t) to
// keep the periodic-box aliasing of f0(x - t v + ...) harmless.
inline int fine_v_count(const NonlinearConfig& c, double t) {
  double h = c.v_coarse_h;
  if (t > 0) h = std::min(h, c.L / (c.alias_modes * t));
  return std::max(32, static_cast<int>(std::ceil(2.0 * c.vmax / h)) + 1);
}

// one (t, x) column of the source assembly
template <class Field>
void source_column(const Field& field, const NonlinearConfig& cfg, double t, double x,
                   double& initial, double& reaction_l, double& reaction_nl,
                   bool force_free_nl) {
  initial = reaction_l = reaction_nl = 0.0;
  if (t <= 0.0) {
    const int nv = detail::fine_v_count(cfg, 0.0);
    const double dv = 2.0 * cfg.vmax / (nv - 1);
    for (int iv = 0; iv < nv; ++iv) {
      const double v = -cfg.vmax + iv * dv;
      const double w = (iv == 0 || iv == nv - 1) ? 0.5 : 1.0;
      initial += w * cfg.f0(x, v) * dv;
    }
    return;
  }

  // reaction: coarse v sweep, one trajectory per node, trapezoid in s along
  // the march with the straight-line twin accumulated at the same nodes
  {
    const int nv = static_cast<int>(std::ceil(2.0 * cfg.vmax / cfg.v_coarse_h)) + 1;
    const double dv = 2.0 * cfg.vmax / (nv - 1);
    for (int iv = 0; iv < nv; ++iv) {
      const double v = -cfg.vmax + iv * dv;
      const double wv = ((iv == 0 || iv == nv - 1) ? 0.5 : 1.0) * dv;
      double acc_nl = 0.0, acc_l = 0.0;
      double prev_sigma = 0.0, prev_nl = 0.0, prev_l = 0.0;
      bool first = true;
      Vec<1> x0{x}, v0{v};
      integrate_backward<1>(field, t, 0.0, x0, v0, cfg.char_dt,
                            [&](double sigma, const Vec<1>& xc, const Vec<1>& vc) {
                              Vec<1> e;
                              const double xfree = x - (t - sigma) * v;
                              Vec<1> xf{xfree};
                              field.eval(sigma, force_free_nl ? xf : xc, e);
                              const double fnl = e[0] * cfg.mu_prime(force_free_nl ? v : vc[0]);
                              Vec<1> ef;
                              field.eval(sigma, xf, ef);
                              const double fl = ef[0] * cfg.mu_prime(v);
                              if (!first) {
                                const double h = prev_sigma - sigma;
                                acc_nl += 0.5 * (prev_nl + fnl) * h;
                                acc_l += 0.5 * (prev_l + fl) * h;
                              }
                              prev_sigma = sigma;
                              prev_nl = fnl;
                              prev_l = fl;
                              first = false;
                            });
      reaction_nl += wv * acc_nl;
      reaction_l += wv * acc_l;
    }
  }

  // initial data: fine v sweep, endpoints only
  {
    const int nv = detail::fine_v_count(cfg, t);
    const double dv = 2.0 * cfg.vmax / (nv - 1);
    for (int iv = 0; iv < nv; ++iv) {
      const double v = -cfg.vmax + iv * dv;
      const double wv = ((iv == 0 || iv == nv - 1) ? 0.5 : 1.0) * dv;
      auto [xe, ve] = flow_endpoint<1>(field, t, 0.0, Vec<1>{x}, Vec<1>{v}, cfg.char_dt);
      initial += wv * cfg.f0(xe[0], ve[0]);
    }
  }
}

}  // namespace detail

// I(t, .) on the x-grid.
template <class Field>
std::vector<double> initial_data_term(const Field& field, const NonlinearConfig& cfg, double t) {
  PeriodicGrid1D xg(cfg.L, cfg.nx);
  std::vector<double> out(cfg.nx);
  par::parallel_for(static_cast<std::size_t>(cfg.nx), [&](std::size_t ix) {
    double i0, rl, rnl;
    detail::source_column(field, cfg, t, xg.x(static_cast<int>(ix)), i0, rl, rnl, false);
    out[ix] = i0;
  });
  return out;
}

// (R_L, R_NL)(t, .) on the x-grid. force_free_characteristics replays the
// nonlinear integrand along straight lines, making the two terms bitwise
// equal.
template <class Field>
std::pair<std::vector<double>, std::vector<double>> reaction_term(const Field& field,
                                                                  const NonlinearConfig& cfg,
                                                                  double t,
                                                                  bool force_free_characteristics = false) {
  PeriodicGrid1D xg(cfg.L, cfg.nx);
  std::vector<double> rl(cfg.nx), rnl(cfg.nx);
  par::parallel_for(static_cast<std::size_t>(cfg.nx), [&](std::size_t ix) {
    double i0, l, nl;
    detail::source_column(field, cfg, t, xg.x(static_cast<int>(ix)), i0, l, nl,
                          force_free_characteristics);
    rl[ix] = l;
    rnl[ix] = nl;
  });
  return {std::move(rl), std::move(rnl)};
}

// Linearized solve: the free source alone through the Volterra marching.
inline DensityHistory1D linear_reference_density(const NonlinearConfig& cfg) {
  PeriodicGrid1D xg(cfg.L, cfg.nx);
  const int nt = cfg.volterra_nodes();
  const int nm = xg.half_modes();
  auto mu = EquilibriumProfile::maxwellian(1, cfg.theta);

  std::vector<cplx> rho_modes(static_cast<std::size_t>(nm) * nt);
  par::parallel_for(static_cast<std::size_t>(nm), [&](std::size_t m) {
    const double k = xg.wavenumber(static_cast<int>(m));
    std::vector<cplx> kernel(nt), src(nt), out(nt);
    for (int it = 0; it < nt; ++it) {
      const double t = it * cfg.dt;
      kernel[it] = (k == 0.0) ? 0.0 : -t * k * k / (1.0 + k * k) * mu.fourier_radial(t * k);
      src[it] = cfg.source_free_mode(t, k);
    }
    detail::march_mode(kernel, src, cfg.dt, out);
    for (int it = 0; it < nt; ++it) rho_modes[m * nt + it] = out[it];
  });

  DensityHistory1D rho;
  rho.xgrid = xg;
  rho.dt = cfg.dt;
  rho.values.resize(static_cast<std::size_t>(nt) * cfg.nx);
  par::parallel_for(static_cast<std::size_t>(nt), [&](std::size_t it) {
    std::vector<cplx> c(nm);
    for (int m = 0; m < nm; ++m) c[m] = rho_modes[static_cast<std::size_t>(m) * nt + it];
    auto vals = dft_inverse(xg, c);
    std::copy(vals.begin(), vals.end(), rho.values.begin() + it * cfg.nx);
  });
  return rho;
}

inline BootstrapMonitor bootstrap_monitor(const DensityHistory1D& rho, double epsilon,
                                          int dim_weight = 1) {
  BootstrapMonitor mon;
  mon.epsilon = epsilon;
  const PeriodicGrid1D& xg = rho.xgrid;
  const int nt = rho.nodes();
  mon.times.resize(nt);
  mon.weighted.resize(nt);
  mon.n_of_t.resize(nt);
  double running = 0.0;
  for (int it = 0; it < nt; ++it) {
    const double t = it * rho.dt;
    auto vals = rho.at(it);
    std::vector<double> v(vals.begin(), vals.end());
    auto grad = spectral_derivative_1d(xg, v);
    double l1 = 0, linf = 0, gl1 = 0, glinf = 0;
    for (int ix = 0; ix < xg.n; ++ix) {
      l1 += std::abs(v[ix]) * xg.dx();
      linf = std::max(linf, std::abs(v[ix]));
      gl1 += std::abs(grad[ix]) * xg.dx();
      glinf = std::max(glinf, std::abs(grad[ix]));
    }
    const double s = std::sqrt(1.0 + t * t);
    const double w = (l1 + std::pow(s, dim_weight) * linf + s * gl1 +
                      std::pow(s, dim_weight + 1) * glinf) /
                     std::log(2.0 + t);
    mon.times[it] = t;
    mon.weighted[it] = w;
    running = std::max(running, w);
    mon.n_of_t[it] = running;
    if (!mon.breached && running > epsilon) {
      mon.breached = true;
      mon.breach_time = t;
    }
  }
  return mon;
}

inline PicardResult run_picard(const NonlinearConfig& cfg) {
  PeriodicGrid1D xg(cfg.L, cfg.nx);
  const int nt = cfg.volterra_nodes();
  const int ns = cfg.source_nodes();
  const int nm = xg.half_modes();
  auto mu = EquilibriumProfile::maxwellian(1, cfg.theta);

  // mode kernels on the fine grid
  std::vector<cplx> kernel(static_cast<std::size_t>(nm) * nt);
  for (int m = 0; m < nm; ++m) {
    const double k = xg.wavenumber(m);
    for (int it = 0; it < nt; ++it) {
      const double t = it * cfg.dt;
      kernel[static_cast<std::size_t>(m) * nt + it] =
          (k == 0.0) ? 0.0 : -t * k * k / (1.0 + k * k) * mu.fourier_radial(t * k);
    }
  }

  PicardResult res;
  res.xgrid = xg;
  res.field.xgrid = xg;
  res.field.dt = cfg.dt;
  res.field.values.assign(static_cast<std::size_t>(nt) * cfg.nx, 0.0);
  res.rho.xgrid = xg;
  res.rho.dt = cfg.dt;
  res.rho.values.assign(static_cast<std::size_t>(nt) * cfg.nx, 0.0);
  res.sources.times.resize(ns);
  for (int j = 0; j < ns; ++j) res.sources.times[j] = j * cfg.source_dt();

  std::vector<double> i_part(static_cast<std::size_t>(ns) * cfg.nx);
  std::vector<double> rl_part(i_part.size()), rnl_part(i_part.size());

  for (int iter = 1; iter <= cfg.max_picard; ++iter) {
    // source assembly from the current field history
    par::parallel_for(static_cast<std::size_t>(ns) * cfg.nx, [&](std::size_t flat) {
      const int ix = static_cast<int>(flat % cfg.nx);
      const int j = static_cast<int>(flat / cfg.nx);
      detail::source_column(res.field, cfg, res.sources.times[j], xg.x(ix), i_part[flat],
                            rl_part[flat], rnl_part[flat], false);
    }, 4);

    // per-mode corrections on the source nodes
    std::vector<cplx> corr(static_cast<std::size_t>(nm) * ns);
    {
      std::vector<double> s_total(cfg.nx);
      for (int j = 0; j < ns; ++j) {
        for (int ix = 0; ix < cfg.nx; ++ix) {
          const std::size_t flat = static_cast<std::size_t>(j) * cfg.nx + ix;
          s_total[ix] = i_part[flat] + rl_part[flat] - rnl_part[flat];
        }
        auto c = dft_forward(xg, s_total);
        for (int m = 0; m < nm; ++m)
          corr[static_cast<std::size_t>(m) * ns + j] =
              c[m] - cfg.source_free_mode(res.sources.times[j], xg.wavenumber(m));
      }
    }

    // time interpolation of the correction, full source, volterra solve
    std::vector<cplx> rho_modes(static_cast<std::size_t>(nm) * nt);
    par::parallel_for(static_cast<std::size_t>(nm), [&](std::size_t m) {
      const double k = xg.wavenumber(static_cast<int>(m));
      std::vector<double> re(ns), im(ns);
      for (int j = 0; j < ns; ++j) {
        re[j] = corr[m * ns + j].real();
        im[j] = corr[m * ns + j].imag();
      }
      NaturalCubicSpline sre(re, 0.0, cfg.source_dt()), sim(im, 0.0, cfg.source_dt());
      std::vector<cplx> src(nt), out(nt);
      for (int it = 0; it < nt; ++it) {
        const double t = it * cfg.dt;
        src[it] = cfg.source_free_mode(t, k) + cplx(sre(t), sim(t));
      }
      detail::march_mode(std::span<const cplx>(kernel.data() + m * nt, nt), src, cfg.dt, out);
      for (int it = 0; it < nt; ++it) rho_modes[m * nt + it] = out[it];
    });

    // rebuild density and field histories; measure the residual in the
    // weighted sup norm sup_t (|d rho|_1 + <t> |d rho|_inf)
    double residual = 0.0;
    std::vector<double> new_rho(res.rho.values.size());
    std::vector<double> new_field(res.field.values.size());
    par::parallel_for(static_cast<std::size_t>(nt), [&](std::size_t it) {
      std::vector<cplx> c(nm), e(nm);
      for (int m = 0; m < nm; ++m) c[m] = rho_modes[static_cast<std::size_t>(m) * nt + it];
      auto ef = field_coefficients(xg, c);
      auto rv = dft_inverse(xg, c);
      auto evv = dft_inverse(xg, ef);
      std::copy(rv.begin(), rv.end(), new_rho.begin() + it * cfg.nx);
      std::copy(evv.begin(), evv.end(), new_field.begin() + it * cfg.nx);
    });
    for (int it = 0; it < nt; ++it) {
      double l1 = 0, linf = 0;
      for (int ix = 0; ix < cfg.nx; ++ix) {
        const double d = new_rho[static_cast<std::size_t>(it) * cfg.nx + ix] -
                         res.rho.values[static_cast<std::size_t>(it) * cfg.nx + ix];
        l1 += std::abs(d) * xg.dx();
        linf = std::max(linf, std::abs(d));
      }
      const double t = it * cfg.dt;
      residual = std::max(residual, l1 + std::sqrt(1.0 + t * t) * linf);
    }
    res.rho.values = std::move(new_rho);
    res.field.values = std::move(new_field);
    res.residuals.push_back(residual);
    res.iterations = iter;
    if (residual < cfg.picard_tol) {
      res.converged = true;
      break;
    }
  }

  for (std::size_t f = 0; f < i_part.size(); ++f) {
    res.sources.initial.push_back(i_part[f]);
    res.sources.reaction_l.push_back(rl_part[f]);
    res.sources.reaction_nl.push_back(rnl_part[f]);
  }
  res.monitor = bootstrap_monitor(res.rho, cfg.epsilon, 1);
  return res;
}

}  // namespace svp
