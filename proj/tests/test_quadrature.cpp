#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <complex>

#include "svp/grids.hpp"
#include "svp/quadrature.hpp"

using svp::cplx;

TEST_CASE("gauss_legendre integrates polynomials exactly") {
  auto gl = svp::gauss_legendre(8);
  double s = 0;
  for (std::size_t i = 0; i < gl.x.size(); ++i) s += gl.w[i] * std::pow(gl.x[i], 10);
  REQUIRE(s == Catch::Approx(2.0 / 11.0).epsilon(1e-12));
  double w = 0;
  for (double wi : gl.w) w += wi;
  REQUIRE(w == Catch::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("panel moments match closed forms at small and large |z|h") {
  // int_0^h s e^{zs} ds against the analytic antiderivative
  for (cplx z : {cplx(0.3, 0.1), cplx(0.0, 40.0), cplx(-2.0, 5.0), cplx(1e-9, 1e-9)}) {
    const double h = 0.7;
    cplx f[4];
    for (int j = 0; j < 4; ++j) {
      double s = j * h / 3.0;
      f[j] = s;  // envelope g(s) = s is cubic-exact
    }
    cplx got = svp::panel_cubic_exp(0.0, h, f, z);
    cplx want;
    if (std::abs(z) < 1e-6) {
      want = h * h / 2.0 + z * h * h * h / 3.0;  // series to first order
      REQUIRE(std::abs(got - want) < 1e-12);
    } else {
      want = (std::exp(z * h) * (z * h - 1.0) + 1.0) / (z * z);
      REQUIRE(std::abs(got - want) < 1e-12 * (1.0 + std::abs(want)));
    }
  }
}

TEST_CASE("filon_finite handles a Gaussian envelope against closed form") {
  // int_0^inf t exp(-t^2/2) dt = 1, with oscillation handled exactly
  auto env = [](double t) { return cplx(t * std::exp(-0.5 * t * t), 0.0); };
  auto res = svp::filon_finite(env, 9.0, cplx(0.0, 0.0), 1e-12);
  REQUIRE(std::abs(res.value - cplx(1.0, 0.0)) < 1e-10);

  // int_0^inf t exp(-t^2/2) exp(-i tau t) dt, checked against brute force
  const double tau = 7.3;
  auto fine = [&] {
    cplx acc = 0;
    const int n = 400000;
    const double T = 12.0;
    for (int i = 0; i < n; ++i) {
      double t0 = T * i / n, t1 = T * (i + 1) / n;
      auto f = [&](double t) { return t * std::exp(-0.5 * t * t) * std::exp(cplx(0, -tau * t)); };
      acc += 0.5 * (f(t0) + f(t1)) * (t1 - t0);
    }
    return acc;
  }();
  auto res2 = svp::filon_finite(env, 12.0, cplx(0.0, tau), 1e-12);
  REQUIRE(std::abs(res2.value - fine) < 1e-8);
}

TEST_CASE("oscillatory transform of a sampled Gaussian matches the analytic transform") {
  // int_0^inf exp(-k^2/2) cos(k r) dk = sqrt(pi/2) exp(-r^2/2)
  const int n = 2000;
  std::vector<double> ks(n), phi(n);
  for (int i = 0; i < n; ++i) {
    ks[i] = 14.0 * i / (n - 1);
    phi[i] = std::exp(-0.5 * ks[i] * ks[i]);
  }
  svp::OscillatoryTransform tr(ks, phi);
  for (double r : {0.0, 0.5, 2.0, 9.0}) {
    const double want = std::sqrt(M_PI / 2.0) * std::exp(-0.5 * r * r);
    REQUIRE(std::abs(tr.cos_integral(r) - want) < 1e-9);
  }
  // large r: the integral is exponentially small and the quadrature must not blow up
  REQUIRE(std::abs(tr.cos_integral(200.0)) < 1e-7);
}

TEST_CASE("oscillatory transform on a geometric grid") {
  const auto ks = svp::geometric_grid(1e-3, 40.0, 3000);
  std::vector<double> phi(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) phi[i] = ks[i] * std::exp(-0.5 * ks[i] * ks[i]);
  svp::OscillatoryTransform tr(ks, phi);
  // int_0^inf k exp(-k^2/2) sin(k r) dk = sqrt(pi/2) r exp(-r^2/2)
  for (double r : {0.3, 1.0, 4.0}) {
    const double want = std::sqrt(M_PI / 2.0) * r * std::exp(-0.5 * r * r);
    REQUIRE(std::abs(tr.sin_integral(r) - want) < 2e-7);
  }
}
