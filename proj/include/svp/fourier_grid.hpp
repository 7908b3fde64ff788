#pragma once

// 1-d periodic grid with spectral helpers. Grids are small (<= a few
// hundred points), so the transforms are plain DFTs; coefficients follow
// the Fourier-series convention f(x) = sum_m c_m exp(i k_m x) with
// k_m = 2 pi m / L, and only m = 0..n/2 is stored for real data.

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

namespace svp {

using cplx = std::complex<double>;

struct PeriodicGrid1D {
  double L = 2.0 * M_PI;
  int n = 64;

  PeriodicGrid1D() = default;
  PeriodicGrid1D(double box, int points) : L(box), n(points) {
    if (!(box > 0) || points < 4) throw std::invalid_argument("PeriodicGrid1D: bad box/points");
  }
  double dx() const { return L / n; }
  double x(int i) const { return -0.5 * L + L * i / n; }
  double wavenumber(int m) const { return 2.0 * M_PI * m / L; }
  int half_modes() const { return n / 2 + 1; }
  double wrap(double x) const {
    double y = std::fmod(x + 0.5 * L, L);
    if (y < 0) y += L;
    return y - 0.5 * L;
  }
};

// real samples -> Fourier coefficients c_m, m = 0..n/2
inline std::vector<cplx> dft_forward(const PeriodicGrid1D& g, std::span<const double> f) {
  if (static_cast<int>(f.size()) != g.n) throw std::invalid_argument("dft_forward: size mismatch");
  std::vector<cplx> c(g.half_modes());
  for (int m = 0; m < g.half_modes(); ++m) {
    cplx acc = 0;
    const double k = g.wavenumber(m);
    for (int j = 0; j < g.n; ++j) acc += f[j] * std::exp(cplx(0.0, -k * g.x(j)));
    c[m] = acc / double(g.n);
  }
  return c;
}

// Fourier coefficients -> real samples
inline std::vector<double> dft_inverse(const PeriodicGrid1D& g, std::span<const cplx> c) {
  if (static_cast<int>(c.size()) != g.half_modes())
    throw std::invalid_argument("dft_inverse: size mismatch");
  std::vector<double> f(g.n);
  for (int j = 0; j < g.n; ++j) {
    double acc = c[0].real();
    for (int m = 1; m < g.half_modes(); ++m) {
      const double k = g.wavenumber(m);
      const double scale = (2 * m == g.n) ? 1.0 : 2.0;  // Nyquist mode is its own conjugate
      acc += scale * (c[m] * std::exp(cplx(0.0, k * g.x(j)))).real();
    }
    f[j] = acc;
  }
  return f;
}

// E = -d/dx (1 - d^2/dx^2)^{-1} rho on the grid (spectral symbol).
inline std::vector<cplx> field_coefficients(const PeriodicGrid1D& g, std::span<const cplx> rho_c) {
  std::vector<cplx> e(rho_c.size());
  for (std::size_t m = 0; m < rho_c.size(); ++m) {
    const double k = g.wavenumber(static_cast<int>(m));
    e[m] = cplx(0.0, -k) * rho_c[m] / (1.0 + k * k);
  }
  return e;
}

inline std::vector<double> field_from_density_1d(const PeriodicGrid1D& g,
                                                 std::span<const double> rho) {
  auto c = dft_forward(g, rho);
  auto e = field_coefficients(g, c);
  return dft_inverse(g, e);
}

// spectral derivative d/dx
inline std::vector<double> spectral_derivative_1d(const PeriodicGrid1D& g,
                                                  std::span<const double> f) {
  auto c = dft_forward(g, f);
  for (std::size_t m = 0; m < c.size(); ++m) {
    // drop the Nyquist mode in the derivative (its ik coefficient is ambiguous)
    if (2 * static_cast<int>(m) == g.n)
      c[m] = 0.0;
    else
      c[m] *= cplx(0.0, g.wavenumber(static_cast<int>(m)));
  }
  return dft_inverse(g, c);
}

}  // namespace svp
