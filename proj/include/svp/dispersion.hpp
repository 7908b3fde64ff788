#pragma once

// The linear response symbol of the screened system. In time, the mode
// kernel is
//     K^(t, xi) = (i xi / (1 + |xi|^2)) . grad_mu^(t xi)
//               = -t |xi|^2 mu^(t xi) / (1 + |xi|^2),
// and its Laplace-Fourier transform K~(tau - i gamma, xi) is evaluated by
// Filon panels: the Gaussian-mixture envelope is interpolated by cubics and
// the full complex exponential (decay and oscillation) is integrated
// exactly, so high tau or gamma costs nothing.
//
// The Penrose margin is the scanned infimum of |1 - K~| over
// gamma >= 0, tau, |xi|, with numeric tail certificates for the exterior of
// the scanned box.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "svp/equilibrium.hpp"
#include "svp/grids.hpp"
#include "svp/parallel.hpp"
#include "svp/quadrature.hpp"

namespace svp {

struct SymbolPoint {
  double gamma = 0.0;
  double tau = 0.0;
  std::vector<double> xi;

  SymbolPoint() = default;
  SymbolPoint(double g, double t, std::vector<double> x) : gamma(g), tau(t), xi(std::move(x)) {
    if (gamma < 0) throw std::invalid_argument("SymbolPoint: gamma must be >= 0");
  }
  double xi_mag() const {
    double s = 0;
    for (double c : xi) s += c * c;
    return std::sqrt(s);
  }
};

inline cplx khat_time(const EquilibriumProfile& mu, double t, std::span<const double> xi) {
  if (t < 0) throw std::invalid_argument("khat_time: t must be >= 0");
  double k2 = 0;
  for (double c : xi) k2 += c * c;
  if (k2 == 0.0) return 0.0;
  std::vector<double> eta(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) eta[i] = t * xi[i];
  return -t * k2 / (1.0 + k2) * mu.fourier_mu(eta);
}

namespace detail {

// int_0^inf t exp(-b t^2 / 2) exp(-z t) dt. Substituting u = t sqrt(b)
// reduces to (1/b) J(zeta) with zeta = z / sqrt(b) and
// J(zeta) = int_0^inf u exp(-u^2/2) exp(-zeta u) du, |J| <= J(0) = 1.
inline cplx gaussian_laplace_moment(double b, cplx z, double rel_tol) {
  if (!(b > 0)) throw std::invalid_argument("gaussian_laplace_moment: b must be > 0");
  const double sb = std::sqrt(b);
  const cplx zeta = z / sb;
  double u_cut = 8.7;  // envelope below ~1e-17 of its peak
  if (zeta.real() > 0) u_cut = std::min(u_cut, 50.0 / zeta.real() + 1.0);
  const double tail = std::exp(-0.5 * u_cut * u_cut) * (1.0 + u_cut);
  auto env = [](double u) { return cplx(u * std::exp(-0.5 * u * u), 0.0); };
  return filon_finite(env, u_cut, zeta, rel_tol, tail).value / b;
}

// Directional Fourier profile m(kappa) = mu^(kappa * xihat) and the shifts
// seen along a direction whose first component is cos1.
struct DirectionalComponents {
  std::vector<double> weight, b, freq_shift;  // envelope exp(-b t^2/2), extra phase u*cos1*k
};

inline DirectionalComponents directional_components(const EquilibriumProfile& mu, double k,
                                                    double cos1) {
  DirectionalComponents dc;
  for (const auto& c : mu.components()) {
    dc.weight.push_back(c.weight);
    dc.b.push_back(c.theta * k * k);
    dc.freq_shift.push_back(c.shift * cos1 * k);
  }
  return dc;
}

}  // namespace detail

// K~(tau - i gamma, xi), eq. of the dielectric response for the screened
// interaction: 1 - K~ is the plasma dielectric function.
inline cplx ktilde(const EquilibriumProfile& mu, const SymbolPoint& p, double rel_tol = 1e-11) {
  if (p.gamma < 0) throw std::invalid_argument("ktilde: gamma must be >= 0");
  const double k = p.xi_mag();
  if (k == 0.0) return 0.0;
  const double pref = -k * k / (1.0 + k * k);

  if (mu.kind() == ProfileKind::tabulated_radial) {
    // generic envelope path: -t k^2 m(t k) / (1+k^2) with m from quadrature
    const double theta_eff = 1.0;  // tabulated profiles carry no scale metadata
    const double t_cut = 9.0 / (k * std::sqrt(theta_eff));
    auto env = [&](double t) { return cplx(t, 0.0) * mu.fourier_radial(t * k); };
    const cplx z(p.gamma, p.tau);
    return pref * filon_finite(env, t_cut, z, rel_tol, 0.0).value;
  }

  const double cos1 = p.xi.empty() ? 1.0 : p.xi[0] / k;
  auto dc = detail::directional_components(mu, k, cos1);
  cplx total = 0.0;
  for (std::size_t j = 0; j < dc.weight.size(); ++j) {
    const cplx z(p.gamma, p.tau + dc.freq_shift[j]);
    total += dc.weight[j] * detail::gaussian_laplace_moment(dc.b[j], z, rel_tol);
  }
  return pref * total;
}

// K~^{h,1}(tau, xi) = int_0^inf exp(-i tau t) i xi . grad_mu^(t xi) dt;
// positively homogeneous of degree zero and equal to (1+|xi|^2) K~.
inline cplx k_h1(const EquilibriumProfile& mu, double tau, std::span<const double> xi,
                 double rel_tol = 1e-11) {
  double k2 = 0;
  for (double c : xi) k2 += c * c;
  if (k2 == 0.0 && tau == 0.0) throw std::invalid_argument("k_h1: (tau, xi) must be nonzero");
  if (k2 == 0.0) return 0.0;
  SymbolPoint p(0.0, tau, std::vector<double>(xi.begin(), xi.end()));
  return (1.0 + k2) * ktilde(mu, p, rel_tol);
}

struct Kh2Decomposition {
  cplx p2 = 0.0;           // the degree-2 polynomial P2(xi)
  cplx contraction = 0.0;  // (xi tensor xi / (i tau)^2) : K~^{h,2}(tau, xi)
};

// Second-order expansion of K~^{h,1} at low |xi| / high tau:
//   K~^{h,1} = P2(xi) / (i tau)^2 + contraction,
// with P2(xi) = i xi . (D grad_mu^)(0) : xi = -|xi|^2 * mass.
inline Kh2Decomposition k_h2_decomposition(const EquilibriumProfile& mu, double tau,
                                           std::span<const double> xi, double rel_tol = 1e-10) {
  if (tau == 0.0) throw std::invalid_argument("k_h2_decomposition: tau must be nonzero");
  const double k = [&] {
    double s = 0;
    for (double c : xi) s += c * c;
    return std::sqrt(s);
  }();
  Kh2Decomposition out;
  out.p2 = -k * k * mu.mass();
  if (k == 0.0) return out;

  const cplx itau2 = cplx(0.0, tau) * cplx(0.0, tau);
  const double cos1 = xi[0] / k;

  if (mu.kind() == ProfileKind::tabulated_radial) {
    // g(t) = -k^2 t m(tk); g'' via the numerical derivatives of m
    auto env = [&](double t) {
      const double u = t * k;
      return -k * k * (2.0 * k * mu.fourier_radial_d1(u) + t * k * k * mu.fourier_radial_d2(u));
    };
    const double t_cut = 9.0 / k;
    out.contraction = filon_finite(env, t_cut, cplx(0.0, tau), rel_tol).value / itau2;
    return out;
  }

  // per component: g_j(t) = -k^2 w phi(t) exp(-i c t), phi = t exp(-b t^2/2);
  // g_j'' = -k^2 w exp(-i c t) (phi'' - 2 i c phi' - c^2 phi)
  cplx r2 = 0.0;
  auto dc = detail::directional_components(mu, k, cos1);
  for (std::size_t j = 0; j < dc.weight.size(); ++j) {
    const double b = dc.b[j], c = dc.freq_shift[j];
    auto env = [b, c](double t) {
      const double e = std::exp(-0.5 * b * t * t);
      const double phi = t * e;
      const double dphi = (1.0 - b * t * t) * e;
      const double ddphi = b * t * (b * t * t - 3.0) * e;
      return cplx(ddphi - c * c * phi, -2.0 * c * dphi);
    };
    const double t_cut = 8.7 / std::sqrt(b);
    const cplx z(0.0, tau + c);
    r2 += -k * k * dc.weight[j] * filon_finite(env, t_cut, z, rel_tol, 0.0).value;
  }
  out.contraction = r2 / itau2;
  return out;
}

// ---------------------------------------------------------------------------
// Penrose stability scan

struct PenroseGridSpec {
  double gamma_min = 0.0;
  double gamma_max = 50.0;
  double tau_max = 50.0;
  double xi_max = 20.0;
  double xi_min = 1e-3;
  int n_gamma = 32;
  int n_tau = 48;
  int n_xi = 48;
  int refine_passes = 2;
  double quad_tol = 1e-9;
};

struct TailCertificate {
  double xi_threshold = 0.0;     // |K~| <= 1/2 for |xi| beyond this
  double gamma_threshold = 0.0;  // ... for gamma beyond this
  double tau_threshold = 0.0;    // ... for |tau| beyond this
  bool covered = false;          // scan box contains all thresholds
};

struct PenroseScan {
  double margin = std::numeric_limits<double>::infinity();
  SymbolPoint argmin;
  struct TraceEntry {
    int level;
    double margin;
  };
  std::vector<TraceEntry> trace;
  TailCertificate tail;
  bool near_root = false;  // margin < 0.05 or a sign change of Re(1 - K~) at small Im
};

namespace detail {

inline TailCertificate tail_certificate(const EquilibriumProfile& mu) {
  TailCertificate tc;
  double b0 = 0, wsum = 0;
  for (const auto& c : mu.components()) {
    b0 += std::abs(c.weight) / c.theta;  // int u exp(-theta u^2/2) du = 1/theta
    wsum += std::abs(c.weight);
  }
  if (mu.kind() == ProfileKind::tabulated_radial) {
    b0 = 2.0;  // conservative placeholder for audit-grade profiles
    wsum = 2.0;
  }
  tc.xi_threshold = std::sqrt(std::max(2.0 * b0 - 1.0, 0.0));
  tc.gamma_threshold = std::sqrt(2.0 * wsum);
  // C_tau = m_env(0) + int (2|m'| + u|m''|) du by coarse quadrature
  double c_tau = 0;
  for (const auto& c : mu.components()) c_tau += std::abs(c.weight);
  const double umax = 30.0 * std::sqrt(mu.max_theta()) + 10.0;
  const int n = 4000;
  double acc = 0;
  for (int i = 0; i <= n; ++i) {
    const double u = umax * i / n;
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    acc += w * (2.0 * std::abs(mu.fourier_radial_d1(u)) + u * std::abs(mu.fourier_radial_d2(u)));
  }
  c_tau += acc * (umax / n);
  tc.tau_threshold = std::sqrt(2.0 * c_tau);
  return tc;
}

struct ScanAxis {
  std::vector<double> pts;
};

inline ScanAxis signed_geometric_axis(double lo, double hi, int n, bool both_signs,
                                      bool include_zero) {
  ScanAxis ax;
  auto pos = geometric_grid(lo, hi, n);
  if (both_signs)
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) ax.pts.push_back(-*it);
  if (include_zero) ax.pts.push_back(0.0);
  for (double p : pos) ax.pts.push_back(p);
  return ax;
}

}  // namespace detail

inline PenroseScan penrose_margin(const EquilibriumProfile& mu, const PenroseGridSpec& spec) {
  if (spec.gamma_min < 0)
    throw std::invalid_argument("penrose_margin: gamma_min must be >= 0 (Laplace half-plane)");
  if (spec.gamma_max < spec.gamma_min || spec.tau_max <= 0 || spec.xi_max <= spec.xi_min ||
      spec.xi_min <= 0)
    throw std::invalid_argument("penrose_margin: invalid grid spec");

  const bool radial = mu.is_radial();
  PenroseScan scan;
  scan.tail = detail::tail_certificate(mu);
  scan.tail.covered = spec.xi_max >= scan.tail.xi_threshold &&
                      spec.gamma_max >= scan.tail.gamma_threshold &&
                      spec.tau_max >= scan.tail.tau_threshold;

  if (mu.kind() == ProfileKind::zero) {
    scan.margin = 1.0;
    scan.argmin = SymbolPoint(0.0, 0.0, {spec.xi_min});
    scan.trace.push_back({0, 1.0});
    return scan;
  }

  auto gamma_ax = detail::signed_geometric_axis(1e-4, spec.gamma_max, spec.n_gamma, false, true);
  auto tau_ax = detail::signed_geometric_axis(1e-4, spec.tau_max, spec.n_tau, !radial, true);
  auto xi_ax = geometric_grid(spec.xi_min, spec.xi_max, spec.n_xi);

  struct Best {
    double value = std::numeric_limits<double>::infinity();
    std::size_t flat = 0;
    double gamma = 0, tau = 0, xi = 0;
  };

  auto evaluate_grid = [&](const std::vector<double>& gs, const std::vector<double>& ts,
                           const std::vector<double>& ks, bool detect_roots) {
    const std::size_t n = gs.size() * ts.size() * ks.size();
    std::vector<double> vals(n);
    std::vector<double> re_vals(detect_roots ? n : 0), im_vals(detect_roots ? n : 0);
    par::parallel_for(n, [&](std::size_t idx) {
      const std::size_t ik = idx % ks.size();
      const std::size_t it = (idx / ks.size()) % ts.size();
      const std::size_t ig = idx / (ks.size() * ts.size());
      SymbolPoint p(gs[ig], ts[it], {ks[ik]});
      const cplx one_minus = 1.0 - ktilde(mu, p, spec.quad_tol);
      vals[idx] = std::abs(one_minus);
      if (detect_roots) {
        re_vals[idx] = one_minus.real();
        im_vals[idx] = one_minus.imag();
      }
    });
    Best best;
    for (std::size_t idx = 0; idx < n; ++idx) {
      if (vals[idx] < best.value) {
        best.value = vals[idx];
        best.flat = idx;
      }
    }
    const std::size_t ik = best.flat % ks.size();
    const std::size_t it = (best.flat / ks.size()) % ts.size();
    const std::size_t ig = best.flat / (ks.size() * ts.size());
    best.gamma = gs[ig];
    best.tau = ts[it];
    best.xi = ks[ik];
    bool sign_change = false;
    if (detect_roots) {
      // along tau at gamma = 0 (first gamma row when it is zero)
      if (!gs.empty() && gs.front() == 0.0) {
        for (std::size_t ikk = 0; ikk < ks.size(); ++ikk) {
          for (std::size_t itt = 0; itt + 1 < ts.size(); ++itt) {
            const std::size_t a = itt * ks.size() + ikk;
            const std::size_t b = (itt + 1) * ks.size() + ikk;
            if (re_vals[a] * re_vals[b] < 0.0 &&
                std::min(std::abs(im_vals[a]), std::abs(im_vals[b])) < 0.2) {
              sign_change = true;
              break;
            }
          }
          if (sign_change) break;
        }
      }
    }
    return std::pair<Best, bool>(best, sign_change);
  };

  auto [best, sign_change] = evaluate_grid(gamma_ax.pts, tau_ax.pts, xi_ax, true);
  scan.trace.push_back({0, best.value});
  scan.near_root = sign_change;

  // two local refinement passes around the argmin
  auto bracket = [](const std::vector<double>& ax, double center) {
    auto it = std::lower_bound(ax.begin(), ax.end(), center);
    std::size_t i = (it == ax.begin()) ? 0 : (it - ax.begin());
    const std::size_t lo = (i >= 2) ? i - 2 : 0;
    const std::size_t hi = std::min(i + 2, ax.size() - 1);
    return std::pair<double, double>(ax[lo], ax[hi]);
  };

  std::vector<double> gs = gamma_ax.pts, ts = tau_ax.pts, ks = xi_ax;
  for (int pass = 1; pass <= spec.refine_passes; ++pass) {
    auto [glo, ghi] = bracket(gs, best.gamma);
    auto [tlo, thi] = bracket(ts, best.tau);
    auto [klo, khi] = bracket(ks, best.xi);
    glo = std::max(glo, 0.0);
    gs = uniform_grid(glo, std::max(ghi, glo + 1e-12), 9);
    ts = uniform_grid(tlo, std::max(thi, tlo + 1e-12), 9);
    ks = uniform_grid(std::max(klo, spec.xi_min * 1e-2), std::max(khi, klo + 1e-12), 9);
    auto [b2, sc2] = evaluate_grid(gs, ts, ks, false);
    (void)sc2;
    if (b2.value < best.value) best = b2;
    scan.trace.push_back({pass, best.value});
  }

  scan.margin = best.value;
  scan.argmin = SymbolPoint(best.gamma, best.tau, {best.xi});
  if (scan.margin < 0.05) scan.near_root = true;
  return scan;
}

inline PenroseGridSpec default_penrose_spec(const EquilibriumProfile& mu) {
  PenroseGridSpec spec;
  const double s = std::max(1.0, std::sqrt(mu.max_theta()));
  spec.gamma_max = 50.0 / s;
  spec.tau_max = 50.0 / s + mu.max_drift() * spec.xi_max;
  return spec;
}

}  // namespace svp
