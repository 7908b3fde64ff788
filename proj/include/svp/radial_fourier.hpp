#pragma once

// Radial (inverse) Fourier transforms in dimension d and the norms taken on
// the reconstructed profiles. With the convention
//     g(x) = (2 pi)^{-d} int exp(i x.xi) f^(|xi|) d xi,
// the radial reductions are
//     d = 1 :  g(r) = (1/pi)        int_0^inf cos(k r) f^(k) dk
//     d = 3 :  g(r) = (2 pi^2 r)^-1 int_0^inf k sin(k r) f^(k) dk
//     d = 2 :  g(r) = (2 pi)^-1     int_0^inf J_0(k r) f^(k) k dk
// Sampled symbols are integrated by Filon panels (piecewise cubic times an
// exact complex exponential), so large radii cost nothing extra; the d = 2
// path subdivides panels against the Bessel oscillation instead.

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "svp/errors.hpp"
#include "svp/grids.hpp"
#include "svp/parallel.hpp"
#include "svp/quadrature.hpp"

namespace svp {

struct RadialSnapshot {
  int dim = 3;
  double time = 0.0;
  std::vector<double> radii;
  std::vector<double> values;
  std::optional<std::vector<double>> gradient;  // signed radial derivative g'(r); |grad g| = |g'|

  void validate() const {
    if (radii.size() != values.size() || radii.size() < 2)
      throw std::invalid_argument("RadialSnapshot: radii/value size mismatch");
    for (std::size_t i = 0; i + 1 < radii.size(); ++i)
      if (!(radii[i] < radii[i + 1]))
        throw std::invalid_argument("RadialSnapshot: radii must be strictly increasing");
  }
};

inline std::vector<double> default_radii() { return geometric_grid(1e-3, 1e3, 1024); }

namespace detail {

inline double bessel_panel_integral(double nu, double r, std::span<const double> ks,
                                    std::span<const double> phi) {
  // int phi(k) J_nu(k r) dk with linear phi per sample interval and
  // oscillation-resolving Gauss-Legendre subpanels.
  static const GaussLegendre gl = gauss_legendre(8);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
    const double a = ks[i], b = ks[i + 1];
    const int sub = std::max(1, static_cast<int>((b - a) * r / 2.0));
    for (int s = 0; s < sub; ++s) {
      const double sa = a + (b - a) * s / sub, sb = a + (b - a) * (s + 1) / sub;
      for (std::size_t q = 0; q < gl.x.size(); ++q) {
        const double k = 0.5 * (sa + sb) + 0.5 * (sb - sa) * gl.x[q];
        const double w = 0.5 * (sb - sa) * gl.w[q];
        const double lam = (k - a) / (b - a);
        const double ph = (1 - lam) * phi[i] + lam * phi[i + 1];
        total += w * ph * std::cyl_bessel_j(nu, k * r);
      }
    }
  }
  return total;
}

}  // namespace detail

// Reconstructs g (and optionally |grad g| = |g'|) at the given radii from a
// sampled radial symbol f^(k).
inline RadialSnapshot radial_inverse_fourier(int d, std::span<const double> ks,
                                             std::span<const double> fhat,
                                             std::span<const double> radii,
                                             bool with_gradient = false, double time = 0.0) {
  if (ks.size() != fhat.size() || ks.size() < 4)
    throw std::invalid_argument("radial_inverse_fourier: need >= 4 symbol samples");
  RadialSnapshot snap;
  snap.dim = d;
  snap.time = time;
  snap.radii.assign(radii.begin(), radii.end());
  snap.values.resize(radii.size());
  if (with_gradient) snap.gradient.emplace(radii.size());

  if (d == 1) {
    std::vector<double> kphi(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) kphi[i] = ks[i] * fhat[i];
    OscillatoryTransform t0(ks, fhat), t1(ks, kphi);
    par::parallel_for(radii.size(), [&](std::size_t j) {
      const double r = radii[j];
      snap.values[j] = t0.cos_integral(r) / M_PI;
      if (with_gradient) (*snap.gradient)[j] = -t1.sin_integral(r) / M_PI;
    });
  } else if (d == 3) {
    std::vector<double> p1(ks.size()), p2(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) {
      p1[i] = ks[i] * fhat[i];
      p2[i] = ks[i] * ks[i] * fhat[i];
    }
    OscillatoryTransform t1(ks, p1), t2(ks, p2);
    par::parallel_for(radii.size(), [&](std::size_t j) {
      const double r = radii[j];
      const double g = t1.sin_integral(r) / (2.0 * M_PI * M_PI * r);
      snap.values[j] = g;
      if (with_gradient)
        (*snap.gradient)[j] = -g / r + t2.cos_integral(r) / (2.0 * M_PI * M_PI * r);
    });
  } else {
    // general d via the Bessel kernel (slow path; d = 2 in practice)
    const double nu = 0.5 * d - 1.0;
    std::vector<double> ph(ks.size());
    par::parallel_for(radii.size(), [&](std::size_t j) {
      const double r = radii[j];
      std::vector<double> p(ks.size()), pg(ks.size());
      for (std::size_t i = 0; i < ks.size(); ++i)
        p[i] = fhat[i] * std::pow(ks[i], 0.5 * d);
      double val = detail::bessel_panel_integral(nu, r, ks, p);
      snap.values[j] = std::pow(2.0 * M_PI, -0.5 * d) * std::pow(r, 1.0 - 0.5 * d) * val;
      if (with_gradient) {
        for (std::size_t i = 0; i < ks.size(); ++i)
          pg[i] = fhat[i] * std::pow(ks[i], 0.5 * d + 1.0);
        double gv = detail::bessel_panel_integral(0.5 * d, r, ks, pg);
        (*snap.gradient)[j] = -std::pow(2.0 * M_PI, -0.5 * d) * std::pow(r, 1.0 - 0.5 * d) * gv;
      }
    });
    (void)ph;
  }
  return snap;
}

// Forward radial transform of sampled g(r): f^(k) = int exp(-i x.xi) g dx.
inline std::vector<double> radial_forward_fourier(int d, std::span<const double> rs,
                                                  std::span<const double> g,
                                                  std::span<const double> ks) {
  if (rs.size() != g.size() || rs.size() < 4)
    throw std::invalid_argument("radial_forward_fourier: need >= 4 samples");
  std::vector<double> out(ks.size());
  if (d == 1) {
    OscillatoryTransform t0(rs, g);
    par::parallel_for(ks.size(), [&](std::size_t j) { out[j] = 2.0 * t0.cos_integral(ks[j]); });
  } else if (d == 3) {
    std::vector<double> p(rs.size());
    for (std::size_t i = 0; i < rs.size(); ++i) p[i] = rs[i] * g[i];
    OscillatoryTransform t1(rs, p);
    par::parallel_for(ks.size(), [&](std::size_t j) {
      const double k = ks[j];
      if (k < 1e-12) {
        double acc = 0;
        for (std::size_t i = 0; i + 1 < rs.size(); ++i)
          acc += 0.5 * (rs[i] * rs[i] * g[i] + rs[i + 1] * rs[i + 1] * g[i + 1]) * (rs[i + 1] - rs[i]);
        out[j] = 4.0 * M_PI * acc;
      } else {
        out[j] = 4.0 * M_PI / k * t1.sin_integral(k);
      }
    });
  } else {
    const double nu = 0.5 * d - 1.0;
    par::parallel_for(ks.size(), [&](std::size_t j) {
      const double k = ks[j];
      std::vector<double> p(rs.size());
      for (std::size_t i = 0; i < rs.size(); ++i) p[i] = g[i] * std::pow(rs[i], 0.5 * d);
      out[j] = std::pow(2.0 * M_PI, 0.5 * d) * std::pow(std::max(k, 1e-300), -nu) *
               detail::bessel_panel_integral(nu, k, rs, p);
    });
  }
  return out;
}

struct Norms {
  double l1 = 0.0;
  double linf = 0.0;
  double grad_l1 = 0.0;
  double grad_linf = 0.0;
  bool linf_diverging = false;  // grid max sits at the smallest radius and keeps growing
  bool has_gradient = false;
};

namespace detail {

inline double refined_max(std::span<const double> r, std::span<const double> v, std::size_t* arg) {
  double best = 0.0;
  std::size_t bi = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > best) {
      best = std::abs(v[i]);
      bi = i;
    }
  }
  if (arg) *arg = bi;
  if (bi == 0 || bi + 1 >= v.size()) return best;
  // parabola through the three nearest samples
  const double x0 = r[bi - 1], x1 = r[bi], x2 = r[bi + 1];
  const double y0 = std::abs(v[bi - 1]), y1 = std::abs(v[bi]), y2 = std::abs(v[bi + 1]);
  const double d1 = (y1 - y0) / (x1 - x0), d2 = (y2 - y1) / (x2 - x1);
  const double a = (d2 - d1) / (x2 - x0);
  if (a >= 0.0) return best;
  const double xv = 0.5 * (x0 + x1 - d1 / a);
  if (xv <= x0 || xv >= x2) return best;
  const double yv = y0 + d1 * (xv - x0) + a * (xv - x0) * (xv - x1);
  return std::max(best, yv);
}

inline double weighted_l1(int d, std::span<const double> r, std::span<const double> v) {
  const double wd = sphere_surface_area(d);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    const double f0 = std::abs(v[i]) * std::pow(r[i], d - 1);
    const double f1 = std::abs(v[i + 1]) * std::pow(r[i + 1], d - 1);
    acc += 0.5 * (f0 + f1) * (r[i + 1] - r[i]);
  }
  return wd * acc;
}

}  // namespace detail

inline Norms norms(const RadialSnapshot& snap, double tail_tolerance = 0.01) {
  snap.validate();
  const auto& r = snap.radii;
  const auto& v = snap.values;
  Norms out;
  out.l1 = detail::weighted_l1(snap.dim, r, v);

  // tail audit: the last twentieth of the grid must not carry the integral
  if (out.l1 > 0) {
    const std::size_t cut = r.size() - std::max<std::size_t>(2, r.size() / 20);
    double tail = 0;
    const double wd = sphere_surface_area(snap.dim);
    for (std::size_t i = cut; i + 1 < r.size(); ++i) {
      tail += 0.5 *
              (std::abs(v[i]) * std::pow(r[i], snap.dim - 1) +
               std::abs(v[i + 1]) * std::pow(r[i + 1], snap.dim - 1)) *
              (r[i + 1] - r[i]) * wd;
    }
    if (tail > tail_tolerance * out.l1)
      throw accuracy_error("norms: tail-dominated integral, extend the radial grid",
                           tail / out.l1, tail_tolerance);
  }

  std::size_t arg = 0;
  out.linf = detail::refined_max(r, v, &arg);
  if (arg == 0 && v.size() > 8) {
    // compare against the value one decade out; a big ratio flags r -> 0 divergence
    const double r_ref = r.front() * 10.0;
    std::size_t j = 0;
    while (j + 1 < r.size() && r[j] < r_ref) ++j;
    if (std::abs(v.front()) > 10.0 * std::abs(v[j])) out.linf_diverging = true;
  }

  if (snap.gradient) {
    out.has_gradient = true;
    out.grad_l1 = detail::weighted_l1(snap.dim, r, *snap.gradient);
    out.grad_linf = detail::refined_max(r, *snap.gradient, nullptr);
  }
  return out;
}

}  // namespace svp
