#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>
#include <vector>

#include "svp/equilibrium.hpp"

using svp::cplx;
using svp::EquilibriumProfile;

namespace {

// brute-force d-dimensional trapezoid of the Fourier integral of grad mu
std::vector<cplx> fourier_grad_quadrature(const EquilibriumProfile& mu,
                                          const std::vector<double>& eta, double box, int n) {
  const int d = mu.dimension();
  std::vector<cplx> acc(d, 0.0);
  std::vector<int> idx(d, 0);
  const double h = 2.0 * box / n;
  std::vector<double> v(d);
  for (;;) {
    for (int i = 0; i < d; ++i) v[i] = -box + idx[i] * h;
    double phase = 0;
    for (int i = 0; i < d; ++i) phase += v[i] * eta[i];
    auto g = mu.grad(v);
    const cplx e = std::exp(cplx(0.0, -phase));
    for (int i = 0; i < d; ++i) acc[i] += e * g[i];
    int c = 0;
    while (c < d && ++idx[c] > n) idx[c++] = 0;
    if (c == d) break;
  }
  const double cell = std::pow(h, d);
  for (auto& a : acc) a *= cell;
  return acc;
}

}  // namespace

TEST_CASE("maxwellian point values") {
  auto mu = EquilibriumProfile::maxwellian(3, 1.0);
  std::vector<double> v0{0.0, 0.0, 0.0};
  REQUIRE(mu(v0) == Catch::Approx(std::pow(2.0 * M_PI, -1.5)).epsilon(1e-13));
  std::vector<double> vfar{30.0, 0.0, 0.0};
  REQUIRE(mu(vfar) < 1e-100);
  REQUIRE(mu.mass() == Catch::Approx(1.0));
}

TEST_CASE("maxwellian radiality across random rotations") {
  auto mu = EquilibriumProfile::maxwellian(3, 0.7);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v{nd(rng), nd(rng), nd(rng)};
    const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    std::vector<double> axis{r, 0.0, 0.0};
    REQUIRE(mu(v) == Catch::Approx(mu(axis)).margin(1e-12));
  }
}

TEST_CASE("bi-maxwellian composes two gaussians and keeps unit mass") {
  auto mu = EquilibriumProfile::bi_maxwellian_bump(3, 2.0, 0.4, 1.0, 1.0);
  auto n1 = EquilibriumProfile::maxwellian(3, 1.0);
  std::vector<double> v{0.3, -0.2, 0.5};
  std::vector<double> vs{v[0] - 2.0, v[1], v[2]};
  REQUIRE(mu(v) == Catch::Approx(0.4 * n1(v) + 0.6 * n1(vs)).epsilon(1e-12));
  REQUIRE(mu.mass() == Catch::Approx(1.0));

  // quadrature mass on a box
  double mass = 0;
  const int n = 60;
  const double box = 9.0;
  const double h = 2 * box / n;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      for (int k = 0; k <= n; ++k) {
        std::vector<double> w{-box + i * h + 1.0, -box + j * h, -box + k * h};
        mass += mu(w);
      }
  mass *= h * h * h;
  REQUIRE(mass == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("fourier_grad_mu closed form against d-dimensional quadrature") {
  auto mu = EquilibriumProfile::maxwellian(3, 1.0);
  std::vector<double> eta{1.0, 0.0, 0.0};
  auto fg = mu.fourier_grad_mu(eta);
  REQUIRE(std::abs(fg[0] - cplx(0.0, std::exp(-0.5))) < 1e-12);
  REQUIRE(std::abs(fg[1]) < 1e-15);

  auto q = fourier_grad_quadrature(mu, eta, 9.0, 72);
  for (int i = 0; i < 3; ++i) REQUIRE(std::abs(fg[i] - q[i]) < 1e-6);

  // eta = 0 gives the zero vector
  std::vector<double> zero{0.0, 0.0, 0.0};
  for (auto& c : mu.fourier_grad_mu(zero)) REQUIRE(std::abs(c) == 0.0);
}

TEST_CASE("fourier_grad_mu lambda scaling") {
  auto mu = EquilibriumProfile::maxwellian(3, 1.3);
  std::vector<double> eta{0.4, -0.3, 0.8};
  const double lam = 2.0;
  std::vector<double> eta2{lam * eta[0], lam * eta[1], lam * eta[2]};
  auto f2 = mu.fourier_grad_mu(eta2);
  const double k = std::sqrt(eta[0] * eta[0] + eta[1] * eta[1] + eta[2] * eta[2]);
  const cplx m = mu.fourier_radial(lam * k);
  for (int i = 0; i < 3; ++i)
    REQUIRE(std::abs(f2[i] - cplx(0.0, lam * eta[i]) * m) < 1e-12);
  // cross-check against quadrature at the scaled point
  auto q = fourier_grad_quadrature(mu, eta2, 10.0, 80);
  for (int i = 0; i < 3; ++i) REQUIRE(std::abs(f2[i] - q[i]) < 1e-6);
}

TEST_CASE("fourier profile is smooth and even near zero") {
  auto mu = EquilibriumProfile::maxwellian(3, 1.0);
  REQUIRE(std::abs(mu.fourier_radial(0.0) - cplx(1.0, 0.0)) < 1e-14);
  // |m(k) - m(0) - m''(0) k^2 / 2| = O(k^4)
  const double m2 = mu.fourier_radial_d2(0.0).real();
  for (double k : {0.05, 0.1, 0.2}) {
    const double rem = std::abs(mu.fourier_radial(k).real() - 1.0 - 0.5 * m2 * k * k);
    REQUIRE(rem < 2.0 * std::pow(k, 4));
  }
}

TEST_CASE("mass via radial quadrature over a 12 sigma ball") {
  auto mu = EquilibriumProfile::maxwellian(3, 2.0);
  const double rmax = 12.0 * std::sqrt(2.0);
  const int n = 20000;
  double acc = 0;
  for (int i = 0; i < n; ++i) {
    const double r0 = rmax * i / n, r1 = rmax * (i + 1) / n;
    std::vector<double> a{r0, 0, 0}, b{r1, 0, 0};
    acc += 0.5 * (mu(a) * r0 * r0 + mu(b) * r1 * r1) * (r1 - r0);
  }
  acc *= 4.0 * M_PI;
  REQUIRE(acc == Catch::Approx(1.0).margin(1e-8));
}

TEST_CASE("verify_h1 audits the maxwellian and rejects bad weights") {
  auto mu = EquilibriumProfile::maxwellian(3, 1.0);
  auto rep = svp::verify_h1(mu, 4.0, 16);
  REQUIRE(rep.satisfied);
  REQUIRE(rep.max_order == 11);  // capped at 2d + 5
  for (const auto& row : rep.rows) {
    REQUIRE(std::isfinite(row.weighted_sup));
    REQUIRE(std::isfinite(row.weighted_l1));
  }
  REQUIRE_THROWS_AS(svp::verify_h1(mu, 3.0, 4), std::invalid_argument);

  auto bump = EquilibriumProfile::bi_maxwellian_bump(3, 2.5, 0.3, 1.0, 0.5);
  REQUIRE(svp::verify_h1(bump, 5.0, 8).satisfied);
}

TEST_CASE("tabulated profile extrapolation error") {
  std::vector<double> r{0.0, 1.0, 2.0, 3.0, 4.0};
  std::vector<double> m{1.0, 0.6, 0.2, 0.05, 0.01};
  auto mu = EquilibriumProfile::tabulated_radial(1, r, m);
  std::vector<double> inside{2.5};
  REQUIRE_NOTHROW(mu(inside));
  std::vector<double> outside{5.0};
  REQUIRE_THROWS_AS(mu(outside), std::domain_error);
  REQUIRE_THROWS_AS(svp::verify_h1(mu, 2.0, 4), std::invalid_argument);
}

TEST_CASE("zero profile") {
  auto mu = EquilibriumProfile::zero(3);
  std::vector<double> v{0.1, 0.2, 0.3};
  REQUIRE(mu(v) == 0.0);
  REQUIRE(mu.mass() == 0.0);
  REQUIRE(std::abs(mu.fourier_radial(1.0)) == 0.0);
}
