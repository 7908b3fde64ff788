#pragma once

// Backward characteristics of dX/ds = V, dV/ds = E(s, X) with data at
// s = t, and the derived objects: the deviation maps
//     X_{s,t}(x,v) = x - (t-s) v + Y_{s,t}(x - v t, v),
//     V_{s,t}(x,v) = v + W_{s,t}(x - v t, v),
// the velocity straightening Psi with X_{s,t}(x, Psi(x,v)) = x - (t-s) v
// (damped fixed point on Psi = v - Phi(x, Psi)), and the scattering limits
// of Y_{0,t}, W_{0,t}. Deviation maps are indexed by (z, v) = (x - v t, v).
//
// Fields are supplied as lightweight history objects (radial tables,
// periodic 1-d tables, analytic test fields) sharing eval(t, x, E).

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "svp/decay_fit.hpp"
#include "svp/fourier_grid.hpp"
#include "svp/grids.hpp"
#include "svp/interp.hpp"
#include "svp/parallel.hpp"

namespace svp {

template <std::size_t D>
using Vec = std::array<double, D>;

// ---------------------------------------------------------------------------
// field histories

template <std::size_t D>
struct ZeroField {
  static constexpr std::size_t dim = D;
  void eval(double, const Vec<D>&, Vec<D>& e) const { e.fill(0.0); }
};

template <std::size_t D>
struct ConstantField {
  static constexpr std::size_t dim = D;
  Vec<D> e0{};
  void eval(double, const Vec<D>&, Vec<D>& e) const { e = e0; }
};

struct AnalyticField1D {
  static constexpr int dim = 1;
  std::function<double(double, double)> f;  // (t, x) -> E
  void eval(double t, const Vec<1>& x, Vec<1>& e) const { e[0] = f(t, x[0]); }
};

// Radial field table: E(t, x) = e(t, |x|) x/|x|, linear in t, local cubic in r.
template <std::size_t D>
struct RadialFieldHistory {
  static constexpr std::size_t dim = D;
  std::vector<double> times;   // ascending, uniform not required
  std::vector<double> radii;   // ascending
  std::vector<double> values;  // values[it * radii.size() + ir]

  double horizon() const { return times.empty() ? 0.0 : times.back(); }

  double radial(double t, double r) const {
    if (times.size() < 2) throw std::invalid_argument("RadialFieldHistory: need >= 2 time nodes");
    const double tc = std::clamp(t, times.front(), times.back());
    std::size_t it = 0;
    while (it + 2 < times.size() && times[it + 1] <= tc) ++it;
    const double w = (tc - times[it]) / (times[it + 1] - times[it]);
    auto row = [&](std::size_t j) {
      std::span<const double> vals(values.data() + j * radii.size(), radii.size());
      if (r <= radii.front()) return vals.front() * (r / radii.front());
      return lagrange_cubic(radii, vals, r);
    };
    return (1.0 - w) * row(it) + w * row(it + 1);
  }

  void eval(double t, const Vec<D>& x, Vec<D>& e) const {
    double r2 = 0;
    for (double c : x) r2 += c * c;
    const double r = std::sqrt(r2);
    if (r < 1e-14) {
      e.fill(0.0);
      return;
    }
    const double er = radial(t, r);
    for (std::size_t i = 0; i < D; ++i) e[i] = er * x[i] / r;
  }
};

// Periodic 1-d field table (uniform time nodes), local cubic in x, linear in t.
struct PeriodicFieldHistory1D {
  static constexpr int dim = 1;
  PeriodicGrid1D xgrid;
  double dt = 0.0;  // node spacing, nodes at k * dt
  std::vector<double> values;  // values[it * nx + ix]

  int time_nodes() const { return dt > 0 ? static_cast<int>(values.size() / xgrid.n) : 0; }
  double horizon() const { return (time_nodes() - 1) * dt; }

  double at(double t, double x) const {
    const int nt = time_nodes();
    if (nt < 2) throw std::invalid_argument("PeriodicFieldHistory1D: need >= 2 time nodes");
    double tc = std::clamp(t, 0.0, horizon());
    int it = std::min(static_cast<int>(tc / dt), nt - 2);
    const double w = tc / dt - it;
    std::span<const double> row0(values.data() + static_cast<std::size_t>(it) * xgrid.n, xgrid.n);
    std::span<const double> row1(values.data() + static_cast<std::size_t>(it + 1) * xgrid.n, xgrid.n);
    const double a = catmull_rom_periodic(row0, xgrid.x(0), xgrid.dx(), x);
    const double b = catmull_rom_periodic(row1, xgrid.x(0), xgrid.dx(), x);
    return (1.0 - w) * a + w * b;
  }

  void eval(double t, const Vec<1>& x, Vec<1>& e) const { e[0] = at(t, x[0]); }
};

// ---------------------------------------------------------------------------
// trajectory integration (RK4, fixed step, backward from t to s)

struct FlowOptions {
  double dt = 0.02;
};

namespace detail {

template <std::size_t D, class Field>
inline void phase_rhs(const Field& field, double t, const Vec<D>& x, const Vec<D>& v, Vec<D>& dx,
                      Vec<D>& dv) {
  dx = v;
  field.eval(t, x, dv);
}

}  // namespace detail

// Integrates backward from (x, v) at time t to time s; sink(sigma, X, V) is
// called at every node, including both endpoints, with sigma decreasing.
template <std::size_t D, class Field, class Sink>
void integrate_backward(const Field& field, double t, double s, Vec<D> x, Vec<D> v, double dt,
                        Sink&& sink) {
  if (s > t) throw std::invalid_argument("integrate_backward: requires s <= t");
  sink(t, x, v);
  double sigma = t;
  const int nsteps = std::max(1, static_cast<int>(std::ceil((t - s) / dt - 1e-12)));
  for (int step = 0; step < nsteps && sigma > s + 1e-15; ++step) {
    const double h = -std::min(dt, sigma - s);
    Vec<D> k1x, k1v, k2x, k2v, k3x, k3v, k4x, k4v, xt, vt;
    detail::phase_rhs(field, sigma, x, v, k1x, k1v);
    for (std::size_t i = 0; i < D; ++i) {
      xt[i] = x[i] + 0.5 * h * k1x[i];
      vt[i] = v[i] + 0.5 * h * k1v[i];
    }
    detail::phase_rhs(field, sigma + 0.5 * h, xt, vt, k2x, k2v);
    for (std::size_t i = 0; i < D; ++i) {
      xt[i] = x[i] + 0.5 * h * k2x[i];
      vt[i] = v[i] + 0.5 * h * k2v[i];
    }
    detail::phase_rhs(field, sigma + 0.5 * h, xt, vt, k3x, k3v);
    for (std::size_t i = 0; i < D; ++i) {
      xt[i] = x[i] + h * k3x[i];
      vt[i] = v[i] + h * k3v[i];
    }
    detail::phase_rhs(field, sigma + h, xt, vt, k4x, k4v);
    for (std::size_t i = 0; i < D; ++i) {
      x[i] += h / 6.0 * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i]);
      v[i] += h / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
    }
    sigma += h;
    sink(sigma, x, v);
  }
}

template <std::size_t D, class Field>
std::pair<Vec<D>, Vec<D>> flow_endpoint(const Field& field, double t, double s, const Vec<D>& x,
                                        const Vec<D>& v, double dt) {
  Vec<D> xe = x, ve = v;
  integrate_backward<D>(field, t, s, x, v, dt, [&](double, const Vec<D>& xc, const Vec<D>& vc) {
    xe = xc;
    ve = vc;
  });
  return {xe, ve};
}

// ---------------------------------------------------------------------------
// deviation maps on a list of (z, v) points

template <std::size_t D>
struct FlowMapT {
  double s = 0.0, t = 0.0;
  std::vector<Vec<D>> z, v;  // (z, v) = (x - v t, v) grid
  std::vector<Vec<D>> Y, W;
  std::vector<double> det_psi;  // filled by straighten_flowmap
};

template <std::size_t D, class Field>
FlowMapT<D> flow(const Field& field, double s, double t, std::span<const Vec<D>> zs,
                 std::span<const Vec<D>> vs, const FlowOptions& opts = {}) {
  if (!(0.0 <= s && s <= t)) throw std::invalid_argument("flow: need 0 <= s <= t");
  if (zs.size() != vs.size()) throw std::invalid_argument("flow: z/v size mismatch");
  FlowMapT<D> map;
  map.s = s;
  map.t = t;
  map.z.assign(zs.begin(), zs.end());
  map.v.assign(vs.begin(), vs.end());
  map.Y.resize(zs.size());
  map.W.resize(zs.size());
  par::parallel_for(zs.size(), [&](std::size_t i) {
    Vec<D> x;
    for (std::size_t c = 0; c < D; ++c) x[c] = zs[i][c] + vs[i][c] * t;
    auto [xe, ve] = flow_endpoint<D>(field, t, s, x, vs[i], opts.dt);
    for (std::size_t c = 0; c < D; ++c) {
      map.Y[i][c] = xe[c] - x[c] + (t - s) * vs[i][c];
      map.W[i][c] = ve[c] - vs[i][c];
    }
  });
  return map;
}

// ---------------------------------------------------------------------------
// straightening

struct StraightenOptions {
  double dt = 0.02;
  double tol = 1e-10;
  int max_iters = 60;
};

template <std::size_t D>
struct StraightenResult {
  std::vector<Vec<D>> psi;
  std::vector<double> residual;   // |X(x, psi) - x + (t-s) v|
  std::vector<bool> converged;
  double worst_ratio = 0.0;       // largest observed displacement ratio
};

class straightening_failure : public std::runtime_error {
 public:
  straightening_failure(double ratio)
      : std::runtime_error("straightening fixed point did not contract (ratio " +
                           std::to_string(ratio) + ")"),
        ratio_(ratio) {}
  double ratio() const { return ratio_; }

 private:
  double ratio_;
};

// Solves X_{s,t}(x, Psi) = x - (t-s) v per point. Plain iteration first;
// one fallback with damping 1/2 when the displacement ratio reaches 1/2
// three times in a row.
template <std::size_t D, class Field>
StraightenResult<D> straighten(const Field& field, double s, double t, std::span<const Vec<D>> xs,
                               std::span<const Vec<D>> vs, const StraightenOptions& opts = {}) {
  if (!(0.0 <= s && s <= t)) throw std::invalid_argument("straighten: need 0 <= s <= t");
  if (xs.size() != vs.size()) throw std::invalid_argument("straighten: x/v size mismatch");
  StraightenResult<D> res;
  res.psi.resize(xs.size());
  res.residual.assign(xs.size(), 0.0);
  res.converged.assign(xs.size(), true);
  if (t - s < 1e-14) {
    for (std::size_t i = 0; i < xs.size(); ++i) res.psi[i] = vs[i];
    return res;
  }
  std::vector<double> ratios(xs.size(), 0.0);
  par::parallel_for(xs.size(), [&](std::size_t i) {
    const Vec<D>& x = xs[i];
    const Vec<D>& v = vs[i];
    auto attempt = [&](double damping, double& worst_ratio) {
      Vec<D> psi = v;
      double prev_disp = -1.0;
      int bad_streak = 0;
      for (int it = 0; it < opts.max_iters; ++it) {
        auto [xe, ve] = flow_endpoint<D>(field, t, s, x, psi, opts.dt);
        (void)ve;
        // Phi(x, psi) = (x - X)/(t-s) - psi; update = v - Phi
        Vec<D> update;
        double disp = 0;
        for (std::size_t c = 0; c < D; ++c) {
          const double phi = (x[c] - xe[c]) / (t - s) - psi[c];
          update[c] = v[c] - phi;
          const double dc = update[c] - psi[c];
          disp += dc * dc;
        }
        disp = std::sqrt(disp);
        for (std::size_t c = 0; c < D; ++c) psi[c] += damping * (update[c] - psi[c]);
        if (prev_disp >= 0 && prev_disp > 0) {
          const double ratio = disp / prev_disp;
          worst_ratio = std::max(worst_ratio, ratio);
          bad_streak = (ratio >= 0.5) ? bad_streak + 1 : 0;
          if (bad_streak >= 3) return std::pair<Vec<D>, bool>(psi, false);
        }
        prev_disp = disp;
        if (disp * damping < opts.tol) return std::pair<Vec<D>, bool>(psi, true);
      }
      return std::pair<Vec<D>, bool>(psi, false);
    };
    double worst = 0.0;
    auto [psi, ok] = attempt(1.0, worst);
    if (!ok) {
      double worst2 = 0.0;
      std::tie(psi, ok) = attempt(0.5, worst2);
      worst = std::max(worst, worst2);
    }
    ratios[i] = worst;
    res.psi[i] = psi;
    res.converged[i] = ok;
    auto [xe, ve] = flow_endpoint<D>(field, t, s, x, psi, opts.dt);
    (void)ve;
    double r = 0;
    for (std::size_t c = 0; c < D; ++c) {
      const double e = xe[c] - x[c] + (t - s) * v[c];
      r += e * e;
    }
    res.residual[i] = std::sqrt(r);
  });
  for (double r : ratios) res.worst_ratio = std::max(res.worst_ratio, r);
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (!res.converged[i]) throw straightening_failure(res.worst_ratio);
  return res;
}

// ---------------------------------------------------------------------------
// phase-space volume (finite differences through the flow)

template <std::size_t D, class Field>
double flow_jacobian_determinant(const Field& field, double s, double t, const Vec<D>& x,
                                 const Vec<D>& v, double h, double dt) {
  constexpr std::size_t N = 2 * D;
  double jac[N][N];
  for (std::size_t col = 0; col < N; ++col) {
    Vec<D> xp = x, vp = v, xm = x, vm = v;
    if (col < D) {
      xp[col] += h;
      xm[col] -= h;
    } else {
      vp[col - D] += h;
      vm[col - D] -= h;
    }
    auto [Xp, Vp] = flow_endpoint<D>(field, t, s, xp, vp, dt);
    auto [Xm, Vm] = flow_endpoint<D>(field, t, s, xm, vm, dt);
    for (std::size_t row = 0; row < D; ++row) jac[row][col] = (Xp[row] - Xm[row]) / (2 * h);
    for (std::size_t row = 0; row < D; ++row) jac[D + row][col] = (Vp[row] - Vm[row]) / (2 * h);
  }
  // LU determinant with partial pivoting
  double det = 1.0;
  for (std::size_t i = 0; i < N; ++i) {
    std::size_t piv = i;
    for (std::size_t r = i + 1; r < N; ++r)
      if (std::abs(jac[r][i]) > std::abs(jac[piv][i])) piv = r;
    if (piv != i) {
      for (std::size_t c = 0; c < N; ++c) std::swap(jac[i][c], jac[piv][c]);
      det = -det;
    }
    if (jac[i][i] == 0.0) return 0.0;
    det *= jac[i][i];
    for (std::size_t r = i + 1; r < N; ++r) {
      const double f = jac[r][i] / jac[i][i];
      for (std::size_t c = i; c < N; ++c) jac[r][c] -= f * jac[i][c];
    }
  }
  return det;
}

// ---------------------------------------------------------------------------
// scattering limits of Y_{0,t}, W_{0,t}

template <std::size_t D>
struct ScatteringResult {
  std::vector<Vec<D>> y_inf, w_inf;      // values at the largest time
  std::vector<double> times;             // t_list
  std::vector<double> y_increments;      // sup_i |Y_{0,t_{k+1}} - Y_{0,t_k}|
  std::vector<double> w_increments;
  bool cauchy = false;                   // last increment below tol
  std::optional<DecayReport> rate;       // fit of the Y increments (log-corrected)
};

template <std::size_t D, class Field>
ScatteringResult<D> scattering_limits(const Field& field, std::span<const Vec<D>> zs,
                                      std::span<const Vec<D>> vs, std::span<const double> t_list,
                                      const FlowOptions& opts = {}, double cauchy_tol = 1e-6,
                                      double rate_target = -2.0, double rate_tol = 0.4) {
  if (t_list.size() < 3) throw std::invalid_argument("scattering_limits: need >= 3 times");
  ScatteringResult<D> res;
  res.times.assign(t_list.begin(), t_list.end());
  std::vector<Vec<D>> y_prev, w_prev;
  for (std::size_t k = 0; k < t_list.size(); ++k) {
    auto map = flow<D>(field, 0.0, t_list[k], zs, vs, opts);
    if (k > 0) {
      double dy = 0, dw = 0;
      for (std::size_t i = 0; i < map.Y.size(); ++i)
        for (std::size_t c = 0; c < D; ++c) {
          dy = std::max(dy, std::abs(map.Y[i][c] - y_prev[i][c]));
          dw = std::max(dw, std::abs(map.W[i][c] - w_prev[i][c]));
        }
      res.y_increments.push_back(dy);
      res.w_increments.push_back(dw);
    }
    y_prev = map.Y;
    w_prev = map.W;
    if (k + 1 == t_list.size()) {
      res.y_inf = std::move(map.Y);
      res.w_inf = std::move(map.W);
    }
  }
  res.cauchy = res.y_increments.back() < cauchy_tol;
  if (res.y_increments.size() >= 8) {
    bool positive = true;
    for (double d : res.y_increments) positive = positive && d > 0;
    if (positive) {
      std::vector<double> mid(res.y_increments.size());
      for (std::size_t k = 0; k < mid.size(); ++k) mid[k] = res.times[k + 1];
      res.rate = fit_decay(mid, res.y_increments, rate_target, rate_tol, true, "Y increments");
    }
  }
  return res;
}

// f_inf(x, v) = f0(x + Y, v + W) + mu(v + W) - mu(v), evaluated pointwise.
template <std::size_t D, class F0, class Mu>
std::vector<double> scattering_profile(const F0& f0, const Mu& mu, std::span<const Vec<D>> xs,
                                       std::span<const Vec<D>> vs, std::span<const Vec<D>> y_inf,
                                       std::span<const Vec<D>> w_inf) {
  if (xs.size() != vs.size() || xs.size() != y_inf.size() || xs.size() != w_inf.size())
    throw std::invalid_argument("scattering_profile: size mismatch");
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Vec<D> xa, va;
    for (std::size_t c = 0; c < D; ++c) {
      xa[c] = xs[i][c] + y_inf[i][c];
      va[c] = vs[i][c] + w_inf[i][c];
    }
    out[i] = f0(xa, va) + mu(va) - mu(vs[i]);
  }
  return out;
}

}  // namespace svp
