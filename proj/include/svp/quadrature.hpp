#pragma once

// Quadrature kernels used across the library:
//  - Gauss-Legendre nodes/weights,
//  - Filon-type panels: a polynomial interpolant of a smooth envelope is
//    multiplied by exp(z t) and integrated exactly, so oscillation or decay
//    in the exponential costs nothing in panel count,
//  - an adaptive semi-infinite driver for Laplace/Fourier integrals of
//    rapidly decaying envelopes (degree-7 panels, eighth-order refinement),
//  - a piecewise-cubic oscillatory integrator for tabulated symbols.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "svp/errors.hpp"

namespace svp {

using cplx = std::complex<double>;

struct GaussLegendre {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

inline GaussLegendre gauss_legendre(int n) {
  GaussLegendre q;
  q.x.resize(n);
  q.w.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton from the Chebyshev-like initial guess.
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p0 = 0, p1 = 0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1);
      }
      double dp = n * (t * p0 - p1) / (t * t - 1.0);
      double dt = p0 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    p0 = 1.0;
    p1 = 0.0;
    for (int j = 0; j < n; ++j) {
      double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1);
    }
    double dp = n * (t * p0 - p1) / (t * t - 1.0);
    q.x[i] = t;
    q.w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
  return q;
}

namespace detail {

// Moments M_j = int_0^h s^j exp(z s) ds for j = 0..n-1 (n <= 8).
inline void exp_moments(double h, cplx z, cplx* m, int n) {
  const cplx zh = z * h;
  if (std::abs(zh) < 4.0) {
    for (int j = 0; j < n; ++j) {
      cplx term = 1.0;
      cplx sum = 1.0 / double(j + 1);
      for (int it = 1; it < 60; ++it) {
        term *= zh / double(it);
        const cplx add = term / double(j + it + 1);
        sum += add;
        if (std::abs(add) < 1e-18 * std::abs(sum)) break;
      }
      m[j] = std::pow(h, j + 1) * sum;
    }
    return;
  }
  const cplx ezh = std::exp(zh);
  m[0] = (ezh - 1.0) / z;
  double hj = 1.0;
  for (int j = 1; j < n; ++j) {
    hj *= h;
    m[j] = (hj * ezh - double(j) * m[j - 1]) / z;
  }
}

// Monomial coefficients (about s = 0) of the interpolating polynomial
// through (s_i, f_i), i = 0..n-1, via Newton divided differences.
template <class T>
inline void poly_monomial_coeffs(const double* s, const T* f, T* a, int n) {
  std::array<T, 8> dd;
  for (int i = 0; i < n; ++i) dd[i] = f[i];
  std::array<T, 8> newton;
  newton[0] = dd[0];
  for (int lvl = 1; lvl < n; ++lvl) {
    for (int i = 0; i + lvl < n; ++i) dd[i] = (dd[i + 1] - dd[i]) / (s[i + lvl] - s[i]);
    newton[lvl] = dd[0];
  }
  // expand P(s) = sum_l newton[l] prod_{i<l} (s - s_i)
  std::array<T, 8> acc{};  // coefficients of the running product polynomial
  for (int i = 0; i < n; ++i) a[i] = T(0);
  acc[0] = T(1);
  int deg = 0;
  a[0] = newton[0];
  for (int lvl = 1; lvl < n; ++lvl) {
    // multiply acc by (s - s_{lvl-1})
    for (int i = deg + 1; i > 0; --i) acc[i] = acc[i - 1] - s[lvl - 1] * acc[i];
    acc[0] = -s[lvl - 1] * acc[0];
    ++deg;
    for (int i = 0; i <= deg; ++i) a[i] += newton[lvl] * acc[i];
  }
}

}  // namespace detail

// int_{t0}^{t0+h} P(t) exp(z t) dt where P interpolates f at n equispaced
// nodes t0 + j h/(n-1).
template <class T>
inline cplx panel_poly_exp(double t0, double h, const T* f, int n, cplx z) {
  std::array<double, 8> s;
  for (int j = 0; j < n; ++j) s[j] = j * h / (n - 1);
  std::array<T, 8> a;
  detail::poly_monomial_coeffs(s.data(), f, a.data(), n);
  std::array<cplx, 8> m;
  detail::exp_moments(h, z, m.data(), n);
  cplx sum = 0.0;
  for (int j = 0; j < n; ++j) sum += cplx(a[j]) * m[j];
  return std::exp(z * t0) * sum;
}

template <class T>
inline cplx panel_cubic_exp(double t0, double h, const T f[4], cplx z) {
  return panel_poly_exp(t0, h, f, 4, z);
}

struct FilonResult {
  cplx value{0.0, 0.0};
  double error = 0.0;  // estimated absolute error (refinement difference + tail)
  int panels = 0;
};

// int_0^{t_cut} g(t) exp(-z t) dt for a smooth (possibly complex) envelope
// g, with degree-7 panels and panel-count doubling. The eighth-order error
// model |I - I_2N| ~ |I_2N - I_N| / 255 drives acceptance. `tail` is an
// externally supplied bound for the discarded [t_cut, inf) part.
template <class G>
FilonResult filon_finite(G&& g, double t_cut, cplx z, double abs_tol, double tail = 0.0,
                         int base_panels = 8, int max_doublings = 8) {
  constexpr int kNodes = 8;
  FilonResult res;
  cplx prev = 0.0;
  bool have_prev = false;
  int n = base_panels;
  for (int lvl = 0; lvl <= max_doublings; ++lvl, n *= 2) {
    const double h = t_cut / n;
    cplx total = 0.0;
    for (int i = 0; i < n; ++i) {
      const double a = i * h;
      cplx f[kNodes];
      for (int j = 0; j < kNodes; ++j) f[j] = cplx(g(a + j * h / (kNodes - 1)));
      total += panel_poly_exp(a, h, f, kNodes, -z);
    }
    if (have_prev) {
      const double diff = std::abs(total - prev);
      if (diff / 255.0 <= abs_tol || diff <= 1e-16 * std::abs(total)) {
        res.value = total;
        res.error = diff / 255.0 + tail;
        res.panels = n;
        return res;
      }
    }
    prev = total;
    have_prev = true;
  }
  res.value = prev;
  res.error = abs_tol * 1e3 + tail;  // did not converge; report pessimistically
  res.panels = n / 2;
  throw accuracy_error("filon_finite: panel refinement did not converge", res.error, abs_tol);
}

// Piecewise-cubic model of tabulated data phi(k_i), integrated against
// exp(i r k). Panel coefficients are r-independent and precomputed, so a
// single tabulation serves many r.
class OscillatoryTransform {
 public:
  OscillatoryTransform(std::span<const double> ks, std::span<const double> phi) {
    const std::size_t n = ks.size();
    if (n < 4 || phi.size() != n) throw std::invalid_argument("OscillatoryTransform: need >= 4 samples");
    k_.assign(ks.begin(), ks.end());
    coeff_.resize(4 * (n - 1));
    for (std::size_t p = 0; p + 1 < n; ++p) {
      std::size_t i0 = (p == 0) ? 0 : (p + 2 < n ? p - 1 : n - 4);
      double s[4];
      double f[4];
      for (int j = 0; j < 4; ++j) {
        s[j] = ks[i0 + j] - ks[p];
        f[j] = phi[i0 + j];
      }
      detail::poly_monomial_coeffs(s, f, &coeff_[4 * p], 4);
    }
  }

  // int_{k_0}^{k_last} phi(k) exp(i r k) dk
  cplx integral(double r) const {
    const cplx z(0.0, r);
    cplx total = 0.0;
    for (std::size_t p = 0; p + 1 < k_.size(); ++p) {
      const double h = k_[p + 1] - k_[p];
      cplx m[4];
      detail::exp_moments(h, z, m, 4);
      cplx sum = 0.0;
      for (int j = 0; j < 4; ++j) sum += coeff_[4 * p + j] * m[j];
      total += std::exp(z * k_[p]) * sum;
    }
    return total;
  }

  double sin_integral(double r) const { return integral(r).imag(); }
  double cos_integral(double r) const { return integral(r).real(); }

 private:
  std::vector<double> k_;
  std::vector<double> coeff_;  // per panel: monomial coeffs about k_p
};

// Plain trapezoid over tabulated samples.
inline double trapezoid(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) s += 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
  return s;
}

}  // namespace svp
