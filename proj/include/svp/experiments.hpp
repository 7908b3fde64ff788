#pragma once

// Experiment orchestration shared by the CLI and the acceptance suite:
// penrose scans, resolvent-kernel decay studies, linearized evolution with
// rate fits, the nonlinear Picard run, and flow-map extraction. Outputs are
// plain structs; serialization lives in io.hpp.

#include <filesystem>
#include <string>
#include <vector>

#include "svp/config.hpp"
#include "svp/decay_fit.hpp"
#include "svp/dispersion.hpp"
#include "svp/io.hpp"
#include "svp/littlewood_paley.hpp"
#include "svp/nonlinear.hpp"
#include "svp/radial_fourier.hpp"
#include "svp/semi_lagrangian.hpp"
#include "svp/volterra.hpp"

namespace svp {

// ---------------------------------------------------------------------------
// penrose

inline PenroseGridSpec penrose_spec_from_config(const RunConfig& c) {
  PenroseGridSpec spec;
  spec.gamma_max = c.penrose_gamma_max;
  spec.tau_max = c.penrose_tau_max;
  spec.xi_max = c.penrose_xi_max;
  spec.n_gamma = std::max(4, c.penrose_grid * 2 / 3);
  spec.n_tau = c.penrose_grid;
  spec.n_xi = c.penrose_grid;
  spec.refine_passes = c.penrose_refine;
  return spec;
}

inline PenroseScan penrose_experiment(const RunConfig& c) {
  return penrose_margin(c.make_profile(), penrose_spec_from_config(c));
}

// ---------------------------------------------------------------------------
// resolvent kernel decay (linear theory, radial reconstruction)

struct KernelDecayResult {
  std::vector<GNormRow> rows;
  std::vector<DecayReport> fits;
  ModeSeries resolvent;  // kept for downstream block studies
};

inline std::vector<double> fit_times(const RunConfig& c) {
  std::vector<double> ts(c.fit_points);
  for (int i = 0; i < c.fit_points; ++i)
    ts[i] = c.fit_t_lo * std::pow(c.fit_t_hi / c.fit_t_lo, i / double(c.fit_points - 1));
  return ts;
}

inline std::vector<GNormRow> g_kernel_norms(const ModeSeries& resolvent, int dim,
                                            const std::vector<double>& times,
                                            const std::vector<double>& radii) {
  std::vector<GNormRow> rows(times.size());
  par::parallel_for(times.size(), [&](std::size_t i) {
    const double t = times[i];
    const int node = std::min(resolvent.nodes() - 1,
                              static_cast<int>(std::round(t / resolvent.grid.dt())));
    std::vector<double> fhat(resolvent.modes());
    for (int m = 0; m < resolvent.modes(); ++m) fhat[m] = resolvent.at(m, node).real();
    auto snap = radial_inverse_fourier(dim, resolvent.xi, fhat, radii, true, t);
    auto n = norms(snap);
    rows[i] = {resolvent.grid.node(node), n.l1, n.linf, n.grad_l1, n.grad_linf};
  }, 1);
  return rows;
}

// Norms of the dyadic block G_q(t): the symbol is cut in space frequency by
// chi(k / 2^q) before reconstruction.
inline Norms gq_block_norms(const ModeSeries& resolvent, int dim, int q, double t,
                            std::span<const double> radii, bool normalized = false,
                            int q_min = -16, int q_max = 8) {
  const int node =
      std::min(resolvent.nodes() - 1, static_cast<int>(std::round(t / resolvent.grid.dt())));
  std::vector<double> fhat(resolvent.modes());
  for (int m = 0; m < resolvent.modes(); ++m) {
    fhat[m] = resolvent.at(m, node).real() * lp_chi_q(resolvent.xi[m], q);
    if (normalized) {
      const double p = lp_partition_sum(resolvent.xi[m], q_min, q_max);
      if (p > 0) fhat[m] /= p;
    }
  }
  auto snap = radial_inverse_fourier(dim, resolvent.xi, fhat, radii, false, t);
  // low-q annuli genuinely extend to radii ~ 2^-q; the covering window and
  // radial truncation are the caller's choice, so no tail audit here
  return norms(snap, 1.0);
}

inline KernelDecayResult kernel_decay_experiment(const RunConfig& c) {
  auto mu = c.make_profile();
  TimeGrid grid(c.t_max, static_cast<int>(std::round(c.t_max / c.dt)));
  auto kernel = mode_sweep(mu, grid, geometric_grid(c.xi_min, c.xi_max, c.modes));
  KernelDecayResult out;
  out.resolvent = resolvent_mode(kernel);
  const auto times = fit_times(c);
  out.rows = g_kernel_norms(out.resolvent, c.dimension, times, default_radii());

  std::vector<double> ts, l1, linf, gl1, glinf;
  for (const auto& r : out.rows) {
    ts.push_back(r.t);
    l1.push_back(r.l1);
    linf.push_back(r.linf);
    gl1.push_back(r.grad_l1);
    glinf.push_back(r.grad_linf);
  }
  const double d = c.dimension;
  out.fits.push_back(fit_decay(ts, l1, -1.0, 0.2, false, "G L1"));
  out.fits.push_back(fit_decay(ts, linf, -(d + 1.0), 0.3, false, "G Linf"));
  out.fits.push_back(fit_decay(ts, gl1, -2.0, 0.3, false, "grad G L1"));
  out.fits.push_back(fit_decay(ts, glinf, -(d + 2.0), 0.4, false, "grad G Linf"));
  return out;
}

// ---------------------------------------------------------------------------
// linearized evolution (gaussian data, d = 3 radial path)

struct LinearEvolveResult {
  ModeSeries density;                 // rho^(t, k) per mode
  std::vector<GNormRow> rows;         // norms of the reconstructed density
  std::vector<DecayReport> fits;      // log-corrected rate fits
  RadialFieldHistory<3> field;        // e(t, r) history for characteristics
};

inline LinearEvolveResult linear_evolve_experiment(const RunConfig& c, bool build_field = false,
                                                   double field_dt = 0.5) {
  if (c.dimension != 3)
    throw config_error("linear-evolve rate fits attach to d = 3 (radial path)");
  auto mu = c.make_profile();
  TimeGrid grid(c.t_max, static_cast<int>(std::round(c.t_max / c.dt)));
  auto xi = geometric_grid(c.xi_min, c.xi_max, c.modes);
  auto kernel = mode_sweep(mu, grid, xi);

  ModeSeries source(grid, xi, SeriesKind::source);
  for (int m = 0; m < source.modes(); ++m) {
    const double k = xi[m];
    const double ahat = c.amplitude * std::exp(-0.5 * k * k * c.sigma_x * c.sigma_x);
    for (int j = 0; j < source.nodes(); ++j) {
      const double t = grid.node(j);
      source.at(m, j) = ahat * std::exp(-0.5 * k * k * t * t * c.sigma_v * c.sigma_v);
    }
  }

  LinearEvolveResult out;
  out.density = solve_mode_volterra(kernel, source);

  const auto times = fit_times(c);
  auto radii = default_radii();
  out.rows.resize(times.size());
  par::parallel_for(times.size(), [&](std::size_t i) {
    const double t = times[i];
    const int node = std::min(out.density.nodes() - 1, static_cast<int>(std::round(t / c.dt)));
    std::vector<double> fhat(out.density.modes());
    for (int m = 0; m < out.density.modes(); ++m) fhat[m] = out.density.at(m, node).real();
    auto snap = radial_inverse_fourier(3, xi, fhat, radii, true, t);
    auto n = norms(snap);
    out.rows[i] = {grid.node(node), n.l1, n.linf, n.grad_l1, n.grad_linf};
  }, 1);

  std::vector<double> ts, linf, glinf;
  for (const auto& r : out.rows) {
    ts.push_back(r.t);
    linf.push_back(r.linf);
    glinf.push_back(r.grad_linf);
  }
  out.fits.push_back(fit_decay(ts, linf, -3.0, 0.25, true, "rho Linf"));
  out.fits.push_back(fit_decay(ts, glinf, -4.0, 0.35, true, "grad rho Linf"));

  if (build_field) {
    // e(t, r) = -d/dr (1 - Lap)^{-1} rho via the gradient reconstruction of
    // the screened symbol rho^ / (1 + k^2)
    auto field_radii = geometric_grid(1e-3, 600.0, 192);
    const int nfield = static_cast<int>(std::floor(c.t_max / field_dt)) + 1;
    out.field.times.resize(nfield);
    out.field.radii = field_radii;
    out.field.values.assign(static_cast<std::size_t>(nfield) * field_radii.size(), 0.0);
    par::parallel_for(static_cast<std::size_t>(nfield), [&](std::size_t j) {
      const double t = j * field_dt;
      out.field.times[j] = t;
      const int node = std::min(out.density.nodes() - 1, static_cast<int>(std::round(t / c.dt)));
      std::vector<double> sym(out.density.modes());
      for (int m = 0; m < out.density.modes(); ++m)
        sym[m] = out.density.at(m, node).real() / (1.0 + xi[m] * xi[m]);
      auto snap = radial_inverse_fourier(3, xi, sym, field_radii, true, t);
      for (std::size_t r = 0; r < field_radii.size(); ++r)
        out.field.values[j * field_radii.size() + r] = -(*snap.gradient)[r];
    }, 1);
  }
  return out;
}

// ---------------------------------------------------------------------------
// nonlinear run

inline NonlinearConfig nonlinear_config_from(const RunConfig& c) {
  if (c.dimension > 2) throw config_error("nonlinear grid path supports d in {1,2}");
  if (c.dimension != 1)
    throw config_error("the picard loop runs at d = 1; use the semi-lagrangian reference for d = 2");
  NonlinearConfig n;
  n.L = c.domain_L;
  n.nx = c.domain_nx;
  n.t_max = c.t_max;
  n.dt = c.dt;
  n.source_stride = c.source_stride;
  n.char_dt = c.char_dt;
  n.max_picard = c.max_picard;
  n.picard_tol = c.picard_tol;
  n.epsilon = c.epsilon;
  n.theta = c.theta;
  n.amplitude = c.amplitude;
  n.sigma_x = c.sigma_x;
  n.sigma_v = c.sigma_v;
  return n;
}

inline SemiLagrangianConfig semi_lagrangian_config_from(const RunConfig& c) {
  SemiLagrangianConfig s;
  s.L = c.domain_L;
  s.nx = c.domain_nx;
  s.nv = c.domain_nv;
  s.vmax = c.domain_vmax;
  s.t_max = c.t_max;
  s.dt = 0.0125;
  s.theta = c.theta;
  s.f0 = SeparableGaussian{1, c.amplitude, c.sigma_x, c.sigma_v};
  return s;
}

// ---------------------------------------------------------------------------
// dispatch used by run_experiment / the CLI

struct ExperimentSummary {
  std::string experiment;
  bool pass = true;
  double wall_seconds = 0.0;
  nlohmann::json metrics;
  std::vector<std::pair<std::string, std::string>> outputs;  // (filename, content)
};

inline ExperimentSummary run_experiment(const RunConfig& c) {
  validate_config(c);
  if (c.threads > 0) par::set_max_threads(c.threads);
  const auto tic = std::chrono::steady_clock::now();
  ExperimentSummary sum;
  sum.experiment = c.experiment;

  if (c.experiment == "penrose") {
    auto scan = penrose_experiment(c);
    sum.metrics = penrose_scan_to_json(scan);
    sum.pass = scan.margin >= 0.0;
    sum.outputs.emplace_back("report.json", sum.metrics.dump(2) + "\n");
  } else if (c.experiment == "kernel-decay") {
    auto res = kernel_decay_experiment(c);
    nlohmann::json fits = nlohmann::json::array();
    for (const auto& f : res.fits) {
      fits.push_back(decay_report_to_json(f));
      sum.pass = sum.pass && f.pass;
    }
    sum.metrics = {{"fits", fits}};
    sum.outputs.emplace_back("decay.csv", gnorm_rows_to_csv(res.rows));
    sum.outputs.emplace_back("decay.json", sum.metrics.dump(2) + "\n");
  } else if (c.experiment == "linear-evolve") {
    auto res = linear_evolve_experiment(c);
    nlohmann::json fits = nlohmann::json::array();
    for (const auto& f : res.fits) {
      fits.push_back(decay_report_to_json(f));
      sum.pass = sum.pass && f.pass;
    }
    sum.metrics = {{"fits", fits}};
    sum.outputs.emplace_back("rho_modes.csv", mode_series_to_csv(res.density));
    sum.outputs.emplace_back("linear.json", sum.metrics.dump(2) + "\n");
    sum.outputs.emplace_back("linear_norms.csv", gnorm_rows_to_csv(res.rows));
  } else if (c.experiment == "nonlinear-evolve") {
    auto res = run_picard(nonlinear_config_from(c));
    sum.pass = res.converged;
    sum.metrics = {{"converged", res.converged},
                   {"iterations", res.iterations},
                   {"final_residual", res.residuals.empty() ? 0.0 : res.residuals.back()}};
    sum.outputs.emplace_back("density.csv", density_history_to_csv(res.rho));
    sum.outputs.emplace_back("monitor.json",
                             monitor_to_json(res.monitor, res.residuals).dump(2) + "\n");
    sum.outputs.emplace_back("field_history.csv", field_history_to_csv(res.field));
  } else {
    throw config_error("run_experiment: experiment '" + c.experiment +
                       "' needs dedicated inputs (use the CLI subcommand)");
  }
  sum.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - tic).count();
  sum.metrics["wall_seconds"] = sum.wall_seconds;
  return sum;
}

// Writes outputs atomically into out_dir, together with the effective config.
inline void write_experiment_outputs(const ExperimentSummary& sum, const RunConfig& c,
                                     const std::filesystem::path& out_dir) {
  for (const auto& [name, content] : sum.outputs) atomic_write_text(out_dir / name, content);
  atomic_write_text(out_dir / "effective_config.txt", emit_config(c));
}

}  // namespace svp
