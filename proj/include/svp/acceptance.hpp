#pragma once

// The acceptance suite: one entry per shipped guarantee, each run at its
// stated tolerance. Shared heavy inputs (the linearized d = 3 run) are
// computed once and reused across criteria.

#include <chrono>
#include <functional>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "svp/characteristics.hpp"
#include "svp/config.hpp"
#include "svp/experiments.hpp"
#include "svp/littlewood_paley.hpp"
#include "svp/nonlinear.hpp"
#include "svp/semi_lagrangian.hpp"
#include "svp/transport.hpp"

namespace svp {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string details;
  double seconds = 0.0;
};

namespace acceptance {

// measured once on this implementation and frozen as regression anchors
inline constexpr double kPenroseMarginMaxwell3 = 0.75125;  // +- 1% under grid doubling
inline constexpr double kBernsteinLowerRef = 0.53;         // |grad u_q| / (2^q |u_q|) bracket
inline constexpr double kBernsteinUpperRef = 2.62;
inline constexpr double kRieszL1Ref = 0.98;                // sup ratios over the random suite
inline constexpr double kRieszLinfRef = 0.45;

struct SharedRuns {
  bool have_linear = false;
  LinearEvolveResult linear;

  const LinearEvolveResult& linear_run() {
    if (!have_linear) {
      RunConfig c;
      c.experiment = "linear-evolve";
      c.dimension = 3;
      c.amplitude = 1e-2;
      c.t_max = 100.0;
      c.dt = 0.05;
      c.modes = 2048;
      c.xi_min = 1e-3;
      c.xi_max = 64.0;
      c.fit_t_lo = 10.0;
      c.fit_t_hi = 100.0;
      c.fit_points = 16;
      linear = linear_evolve_experiment(c, true, 0.25);
      have_linear = true;
    }
    return linear;
  }
};

inline CriterionResult criterion_penrose() {
  CriterionResult res{1, "penrose margin: stable maxwellian, near-critical two-stream"};
  std::ostringstream det;
  auto mx = EquilibriumProfile::maxwellian(3, 1.0);
  PenroseGridSpec spec = default_penrose_spec(mx);
  spec.n_gamma = 32;
  spec.n_tau = 48;
  spec.n_xi = 48;
  auto scan1 = penrose_margin(mx, spec);
  PenroseGridSpec dbl = spec;
  dbl.n_gamma *= 2;
  dbl.n_tau *= 2;
  dbl.n_xi *= 2;
  auto scan2 = penrose_margin(mx, dbl);
  const double rel = std::abs(scan2.margin - scan1.margin) / scan1.margin;
  det << "maxwellian margin " << scan1.margin << " (doubled " << scan2.margin << ", rel "
      << rel << ", anchor " << kPenroseMarginMaxwell3 << ")";

  auto bump = EquilibriumProfile::bi_maxwellian_bump(3, 2.0, 0.5, 0.2, 0.2);
  PenroseGridSpec bspec = default_penrose_spec(bump);
  bspec.n_gamma = 24;
  bspec.n_tau = 48;
  bspec.n_xi = 48;
  auto bscan = penrose_margin(bump, bspec);
  det << "; two-stream margin " << bscan.margin << (bscan.near_root ? " (near root)" : "");

  res.pass = scan1.margin > 0.0 && rel <= 0.01 &&
             std::abs(scan1.margin - kPenroseMarginMaxwell3) < 0.02 &&
             (bscan.margin < 0.05 || bscan.near_root);
  res.details = det.str();
  return res;
}

inline CriterionResult criterion_resolvent_identity(unsigned seed) {
  CriterionResult res{2, "resolvent identity rho = S + G * S (512 steps, 64 modes)"};
  auto mu = EquilibriumProfile::maxwellian(3, 1.0);
  TimeGrid grid(10.0, 512);
  auto xi = geometric_grid(0.05, 8.0, 64);
  auto kernel = mode_sweep(mu, grid, xi);
  auto gres = resolvent_mode(kernel);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(0.2, 2.0);
  double worst = 0;
  for (int trial = 0; trial < 10; ++trial) {
    ModeSeries src(grid, xi, SeriesKind::source);
    for (int m = 0; m < src.modes(); ++m) {
      const double a = ud(rng), c = 2.0 * ud(rng), w = ud(rng), om = 3.0 * ud(rng), b = ud(rng);
      for (int k = 0; k < src.nodes(); ++k) {
        const double t = grid.node(k);
        src.at(m, k) =
            a * std::exp(-std::pow((t - c) / w, 2)) + b * std::cos(om * t) * std::exp(-0.3 * t);
      }
    }
    auto rho = solve_mode_volterra(kernel, src);
    for (int m = 0; m < src.modes(); ++m) {
      auto conv = convolve_trapezoid(gres.mode(m), src.mode(m), grid.dt());
      for (int k = 0; k < src.nodes(); ++k)
        worst = std::max(worst, std::abs(rho.at(m, k) - (src.at(m, k) + conv[k])));
    }
  }
  res.pass = worst < 5e-10;
  res.details = "max deviation " + format_full(worst) + " (tol 5e-10)";
  return res;
}

inline CriterionResult criterion_g_decay() {
  CriterionResult res{3, "resolvent kernel decay rates, maxwellian d = 3"};
  RunConfig c;
  c.experiment = "kernel-decay";
  c.dimension = 3;
  c.t_max = 100.0;
  c.dt = 0.05;
  c.modes = 2048;
  c.xi_min = 1e-3;
  c.xi_max = 64.0;
  c.fit_t_lo = 10.0;
  c.fit_t_hi = 100.0;
  c.fit_points = 16;
  auto out = kernel_decay_experiment(c);
  std::ostringstream det;
  res.pass = true;
  for (const auto& f : out.fits) {
    det << f.quantity << " " << f.fitted_exponent << " (target " << f.target_exponent << " +- "
        << f.tolerance << ") ";
    res.pass = res.pass && f.pass;
  }
  res.details = det.str();
  return res;
}

inline CriterionResult criterion_linear_density(SharedRuns& shared) {
  CriterionResult res{4, "linearized density decay with log correction, d = 3"};
  const auto& lin = shared.linear_run();
  std::ostringstream det;
  res.pass = true;
  for (const auto& f : lin.fits) {
    det << f.quantity << " " << f.fitted_exponent << " (target " << f.target_exponent << " +- "
        << f.tolerance << ", logfit res " << f.residual_logcorr << " vs plain "
        << f.residual_plain << ") ";
    res.pass = res.pass && f.pass && f.log_correction_improves;
  }
  res.details = det.str();
  return res;
}

inline CriterionResult criterion_free_transport() {
  CriterionResult res{5, "free transport: closed form vs quadrature, dispersive exponents"};
  SeparableGaussian f3{3, 1.0, 1.0, 1.0};
  SeparableGaussian f1{1, 0.7, 1.2, 0.9};
  double worst = 0;
  for (double t : {0.5, 2.0, 10.0})
    for (double r : {0.1, 1.0, 3.0}) {
      auto s3 = free_source(f3, t, std::vector<double>{r}, true);
      worst = std::max(worst, std::abs(free_source_quadrature(f3, t, r) - s3.values[0]));
      worst = std::max(worst, std::abs(free_source_quadrature(f3, t, r, true) - (*s3.gradient)[0]));
      auto s1 = free_source(f1, t, std::vector<double>{r}, true);
      worst = std::max(worst, std::abs(free_source_quadrature(f1, t, r) - s1.values[0]));
    }
  auto radii = geometric_grid(1e-3, 500.0, 2500);
  std::vector<double> ts, sup, gsup;
  for (int i = 0; i < 16; ++i) {
    const double t = 5.0 * std::pow(10.0, i / 15.0);
    auto s = free_source(f3, t, radii, true);
    auto n = norms(s);
    ts.push_back(t);
    sup.push_back(n.linf);
    gsup.push_back(n.grad_linf);
  }
  auto fit_s = fit_decay(ts, sup, -3.0, 0.05, false, "S Linf");
  auto fit_g = fit_decay(ts, gsup, -4.0, 0.05, false, "grad S Linf");
  res.pass = worst < 1e-8 && fit_s.pass && fit_g.pass;
  res.details = "closed-form vs quadrature " + format_full(worst) + "; exponents " +
                format_full(fit_s.fitted_exponent) + ", " + format_full(fit_g.fitted_exponent);
  return res;
}

inline CriterionResult criterion_volterra_order(unsigned seed) {
  CriterionResult res{6, "volterra product rule is second order (richardson ratios)"};
  auto mu = EquilibriumProfile::maxwellian(3, 1.0);
  std::mt19937_64 rng(seed + 1);
  std::uniform_real_distribution<double> uk(0.1, 4.0), ud(0.2, 2.0);
  double lo = 1e300, hi = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const double k = uk(rng);
    const double a = ud(rng), cpos = 2.0 * ud(rng), w = ud(rng), om = 3.0 * ud(rng);
    const double T = 8.0;
    auto make_src = [&](const TimeGrid& g) {
      ModeSeries s(g, {k}, SeriesKind::source);
      for (int j = 0; j < g.nodes(); ++j) {
        const double t = g.node(j);
        s.at(0, j) = a * std::exp(-std::pow((t - cpos) / w, 2)) + std::cos(om * t) * std::exp(-0.4 * t);
      }
      return s;
    };
    TimeGrid g1(T, 128), g2(T, 256), g3(T, 512);
    auto r1 = solve_mode_volterra(mode_sweep(mu, g1, {k}), make_src(g1));
    auto r2 = solve_mode_volterra(mode_sweep(mu, g2, {k}), make_src(g2));
    auto r3 = solve_mode_volterra(mode_sweep(mu, g3, {k}), make_src(g3));
    double e12 = 0, e23 = 0;
    for (int j = 0; j < g1.nodes(); ++j)
      e12 = std::max(e12, std::abs(r1.at(0, j) - r2.at(0, 2 * j)));
    for (int j = 0; j < g2.nodes(); ++j)
      e23 = std::max(e23, std::abs(r2.at(0, j) - r3.at(0, 2 * j)));
    const double ratio = e12 / e23;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  res.pass = lo >= 3.5 && hi <= 4.5;
  res.details = "richardson ratios in [" + format_full(lo) + ", " + format_full(hi) + "]";
  return res;
}

inline CriterionResult criterion_characteristics(SharedRuns& shared) {
  CriterionResult res{7, "characteristics oracles: free, constant field, volume, straightening"};
  std::ostringstream det;
  bool pass = true;

  // free transport exactness
  {
    ZeroField<3> zero;
    std::vector<Vec<3>> zs{{0.5, -1.0, 2.0}, {0, 0, 0}}, vs{{1.0, 0.3, -0.7}, {2, 0, 0}};
    auto map = flow<3>(zero, 1.0, 9.0, zs, vs, {0.05});
    double worst = 0;
    for (std::size_t i = 0; i < zs.size(); ++i)
      for (int c = 0; c < 3; ++c)
        worst = std::max({worst, std::abs(map.Y[i][c]), std::abs(map.W[i][c])});
    pass = pass && worst < 1e-12;
    det << "free " << format_full(worst);
  }

  // constant field closed forms
  {
    ConstantField<3> cf{{0.1, -0.2, 0.05}};
    std::vector<Vec<3>> zs{{0.5, -1.0, 2.0}}, vs{{1.0, 0.3, -0.7}};
    const double s = 1.0, t = 6.0;
    auto map = flow<3>(cf, s, t, zs, vs, {0.02});
    double worst = 0;
    for (int c = 0; c < 3; ++c) {
      worst = std::max(worst, std::abs(map.Y[0][c] - cf.e0[c] * (t - s) * (t - s) / 2.0));
      worst = std::max(worst, std::abs(map.W[0][c] + cf.e0[c] * (t - s)));
    }
    auto st = straighten<3>(cf, s, t, zs, vs, {0.02, 1e-12, 60});
    for (int c = 0; c < 3; ++c)
      worst = std::max(worst, std::abs(st.psi[0][c] - (vs[0][c] + cf.e0[c] * (t - s) / 2.0)));
    pass = pass && worst < 1e-10;
    det << "; constant " << format_full(worst);
  }

  // volume preservation and straightening on the linearized d = 3 field
  {
    const auto& field = shared.linear_run().field;
    double worst_det = 0;
    for (double a : {0.5, 2.0})
      for (double b : {-1.5, 1.0}) {
        Vec<3> x{a, 0.3, -0.2}, v{b, 0.5, 0.1};
        const double d = flow_jacobian_determinant<3>(field, 0.0, 20.0, x, v, 0.005, 0.05);
        worst_det = std::max(worst_det, std::abs(d - 1.0));
      }
    pass = pass && worst_det < 1e-6;
    det << "; |det-1| " << format_full(worst_det);

    std::vector<Vec<3>> xs, vs;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        for (int l = 0; l < 4; ++l) {
          xs.push_back({-4.0 + 8.0 * i / 5.0, 1.0 + 0.5 * l, -0.5});
          vs.push_back({-3.0 + 6.0 * j / 5.0, 0.4 * l - 0.6, 0.3});
        }
    auto st = straighten<3>(field, 0.0, 20.0, xs, vs, {0.05, 1e-11, 60});
    int good = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) good += st.residual[i] < 1e-8;
    const double frac = double(good) / xs.size();
    pass = pass && frac >= 0.99 && st.worst_ratio < 0.5;
    det << "; straightening ok on " << format_full(100.0 * frac) << "% (ratio "
        << format_full(st.worst_ratio) << ")";
  }

  res.pass = pass;
  res.details = det.str();
  return res;
}

inline CriterionResult criterion_nonlinear_twin() {
  CriterionResult res{8, "nonlinear twin solvers, d = 1, amplitude 1e-3, t <= 20"};
  NonlinearConfig cfg;
  cfg.nx = 64;
  cfg.t_max = 20.0;
  cfg.dt = 0.025;
  cfg.source_stride = 8;
  cfg.char_dt = 0.1;
  cfg.amplitude = 1e-3;
  cfg.max_picard = 20;
  cfg.picard_tol = 1e-8;
  auto pic = run_picard(cfg);

  bool ratios_ok = true;
  for (std::size_t i = 2; i + 1 < pic.residuals.size(); ++i)
    if (pic.residuals[i] > 1e-13 && pic.residuals[i + 1] / pic.residuals[i] >= 0.5)
      ratios_ok = false;

  // source identity on the stored decomposition
  double id_err = 0;
  for (std::size_t f = 0; f < pic.sources.initial.size(); ++f) {
    const double s = pic.sources.initial[f] + pic.sources.reaction_l[f] - pic.sources.reaction_nl[f];
    const double s2 = pic.sources.initial[f] +
                      (pic.sources.reaction_l[f] - pic.sources.reaction_nl[f]);
    id_err = std::max(id_err, std::abs(s - s2));
  }

  SemiLagrangianConfig sl;
  sl.nx = cfg.nx;
  sl.L = cfg.L;
  sl.nv = 512;
  sl.vmax = 8.0;
  sl.dt = 0.0125;
  sl.t_max = cfg.t_max;
  sl.save_stride = 40;
  sl.f0 = SeparableGaussian{1, cfg.amplitude, cfg.sigma_x, cfg.sigma_v};
  auto ref = semi_lagrangian_reference(sl);

  double scale = 0;
  for (std::size_t it = 0; it < ref.times.size(); ++it) {
    double l2 = 0;
    for (int ix = 0; ix < sl.nx; ++ix) {
      const double v = ref.rho[it * sl.nx + ix];
      l2 += v * v;
    }
    scale = std::max(scale, std::sqrt(l2 * ref.xgrid.dx()));
  }
  double worst = 0;
  for (std::size_t it = 0; it < ref.times.size(); ++it) {
    const int node = static_cast<int>(std::round(ref.times[it] / cfg.dt));
    double l2 = 0;
    for (int ix = 0; ix < sl.nx; ++ix) {
      const double d = ref.rho[it * sl.nx + ix] -
                       pic.rho.values[static_cast<std::size_t>(node) * cfg.nx + ix];
      l2 += d * d;
    }
    worst = std::max(worst, std::sqrt(l2 * ref.xgrid.dx()) / scale);
  }

  res.pass = pic.converged && pic.residuals.back() < 1e-8 && ratios_ok && worst < 1e-3 &&
             id_err < 1e-12 && ref.mass_drift < 1e-10;
  res.details = "picard iters " + std::to_string(pic.iterations) + ", final residual " +
                format_full(pic.residuals.back()) + ", twin rel L2 " + format_full(worst) +
                ", source identity " + format_full(id_err) + ", sl mass drift " +
                format_full(ref.mass_drift);
  return res;
}

inline CriterionResult criterion_scattering(SharedRuns& shared) {
  CriterionResult res{9, "scattering: Y increments rate and the profile formula"};
  const auto& field = shared.linear_run().field;
  std::vector<Vec<3>> zs, vs;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      zs.push_back({-2.0 + 4.0 * i / 3.0, 0.5, -0.3});
      vs.push_back({-2.0 + 4.0 * j / 3.0, 0.7, 0.2});
    }
  std::vector<double> t_list;
  for (int i = 0; i < 12; ++i) t_list.push_back(10.0 * std::pow(10.0, i / 11.0));
  auto sc = scattering_limits<3>(field, zs, vs, t_list, {0.05}, 1e-5, -2.0, 0.4);
  bool rate_ok = sc.rate.has_value() && sc.rate->pass;

  // pointwise profile oracles
  auto mu = EquilibriumProfile::maxwellian(3, 1.0);
  auto muf = [&](const Vec<3>& v) { return mu(std::span<const double>(v.data(), 3)); };
  auto f0 = [](const Vec<3>& x, const Vec<3>& v) {
    double q = 0;
    for (int c = 0; c < 3; ++c) q += x[c] * x[c] + 0.5 * v[c] * v[c];
    return std::exp(-q);
  };
  std::vector<Vec<3>> zero(zs.size(), Vec<3>{0, 0, 0});
  auto same = scattering_profile<3>(f0, muf, zs, vs, zero, zero);
  double worst = 0;
  for (std::size_t i = 0; i < zs.size(); ++i)
    worst = std::max(worst, std::abs(same[i] - f0(zs[i], vs[i])));
  std::vector<Vec<3>> ya(zs.size(), Vec<3>{0.3, -0.1, 0.2}), wb(zs.size(), Vec<3>{-0.2, 0.1, 0.0});
  auto shifted = scattering_profile<3>(f0, muf, zs, vs, ya, wb);
  for (std::size_t i = 0; i < zs.size(); ++i) {
    Vec<3> xa, va;
    for (int c = 0; c < 3; ++c) {
      xa[c] = zs[i][c] + ya[i][c];
      va[c] = vs[i][c] + wb[i][c];
    }
    worst = std::max(worst, std::abs(shifted[i] - (f0(xa, va) + muf(va) - muf(vs[i]))));
  }

  res.pass = rate_ok && worst < 1e-12;
  res.details = std::string("increment exponent ") +
                (sc.rate ? format_full(sc.rate->fitted_exponent) : "n/a") +
                " (target -2 +- 0.4), profile oracle " + format_full(worst);
  return res;
}

inline CriterionResult criterion_bernstein_riesz(unsigned seed) {
  CriterionResult res{10, "bernstein brackets and riesz constants"};
  auto ks = geometric_grid(1e-3, 64.0, 3000);
  auto radii = geometric_grid(1e-3, 2000.0, 1800);
  double bmin = 1e300, bmax = 0;
  for (int q : {-2, 0, 2}) {
    std::vector<double> chi(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) chi[i] = lp_chi_q(ks[i], q);
    auto u = radial_inverse_fourier(3, ks, chi, radii, true);
    auto n = norms(u);
    const double scale = std::pow(2.0, q);
    bmin = std::min({bmin, n.grad_l1 / n.l1 / scale, n.grad_linf / n.linf / scale});
    bmax = std::max({bmax, n.grad_l1 / n.l1 / scale, n.grad_linf / n.linf / scale});
  }
  const bool bern_ok = bmin >= kBernsteinLowerRef / 1.1 && bmax <= kBernsteinUpperRef * 1.1;

  std::mt19937_64 rng(seed + 2);
  std::uniform_real_distribution<double> ud(0.3, 3.0);
  auto riesz_radii = geometric_grid(1e-3, 200.0, 1200);
  double c1 = 0, cinf = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const double a = ud(rng), b = ud(rng), w = ud(rng);
    std::vector<double> u(ks.size()), pu(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) {
      u[i] = std::exp(-0.5 * a * ks[i] * ks[i]) + w * std::exp(-0.5 * b * ks[i] * ks[i]);
      pu[i] = u[i] / (1.0 + ks[i] * ks[i]);
    }
    auto base = radial_inverse_fourier(3, ks, u, riesz_radii, false);
    auto smoothed = radial_inverse_fourier(3, ks, pu, riesz_radii, true);
    auto nb = norms(base);
    RadialSnapshot grad;
    grad.dim = 3;
    grad.radii = riesz_radii;
    grad.values = *smoothed.gradient;
    auto ng = norms(grad);
    c1 = std::max(c1, ng.l1 / nb.l1);
    cinf = std::max(cinf, ng.linf / nb.linf);
  }
  const bool riesz_ok = c1 <= kRieszL1Ref * 1.1 && cinf <= kRieszLinfRef * 1.1 &&
                        c1 >= kRieszL1Ref / 1.5 && cinf >= kRieszLinfRef / 1.5;

  res.pass = bern_ok && riesz_ok;
  res.details = "bernstein ratios/2^q in [" + format_full(bmin) + ", " + format_full(bmax) +
                "] (anchors [" + format_full(kBernsteinLowerRef) + ", " +
                format_full(kBernsteinUpperRef) + "]), riesz C1 " + format_full(c1) +
                " (anchor " + format_full(kRieszL1Ref) + "), Cinf " + format_full(cinf) +
                " (anchor " + format_full(kRieszLinfRef) + ")";
  return res;
}

}  // namespace acceptance

inline std::vector<CriterionResult> run_acceptance(
    unsigned seed = 12345, const std::function<void(const CriterionResult&)>& progress = {}) {
  using clock = std::chrono::steady_clock;
  acceptance::SharedRuns shared;
  std::vector<CriterionResult> out;
  auto push = [&](auto&& fn) {
    const auto tic = clock::now();
    CriterionResult r = fn();
    r.seconds = std::chrono::duration<double>(clock::now() - tic).count();
    if (progress) progress(r);
    out.push_back(std::move(r));
  };
  push([&] { return acceptance::criterion_penrose(); });
  push([&] { return acceptance::criterion_resolvent_identity(seed); });
  push([&] { return acceptance::criterion_g_decay(); });
  push([&] { return acceptance::criterion_linear_density(shared); });
  push([&] { return acceptance::criterion_free_transport(); });
  push([&] { return acceptance::criterion_volterra_order(seed); });
  push([&] { return acceptance::criterion_characteristics(shared); });
  push([&] { return acceptance::criterion_nonlinear_twin(); });
  push([&] { return acceptance::criterion_scattering(shared); });
  push([&] { return acceptance::criterion_bernstein_riesz(seed); });
  return out;
}

}  // namespace svp
