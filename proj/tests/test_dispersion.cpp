#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "svp/dispersion.hpp"
#include "svp/equilibrium.hpp"

using svp::cplx;
using svp::EquilibriumProfile;
using svp::SymbolPoint;

static const auto maxwell3 = EquilibriumProfile::maxwellian(3, 1.0);

TEST_CASE("khat_time closed form and trivial zeros") {
  std::vector<double> xi{1.0, 0.0, 0.0};
  REQUIRE(std::abs(svp::khat_time(maxwell3, 0.0, xi)) == 0.0);
  const cplx v = svp::khat_time(maxwell3, 1.0, xi);
  REQUIRE(v.real() == Catch::Approx(-0.5 * std::exp(-0.5)).epsilon(1e-12));
  REQUIRE(std::abs(v.imag()) < 1e-15);

  auto zero = EquilibriumProfile::zero(3);
  REQUIRE(std::abs(svp::khat_time(zero, 2.0, xi)) == 0.0);
  REQUIRE_THROWS_AS(svp::khat_time(maxwell3, -1.0, xi), std::invalid_argument);
}

TEST_CASE("ktilde matches the 1d closed form at tau = gamma = 0") {
  // K~(0, |xi|=1) = -(1/2) int_0^inf t exp(-t^2/2) dt = -1/2
  SymbolPoint p(0.0, 0.0, {1.0, 0.0, 0.0});
  const cplx v = svp::ktilde(maxwell3, p);
  REQUIRE(v.real() == Catch::Approx(-0.5).margin(1e-8));
  REQUIRE(std::abs(v.imag()) < 1e-10);

  auto zero = EquilibriumProfile::zero(3);
  REQUIRE(std::abs(svp::ktilde(zero, p)) == 0.0);
}

TEST_CASE("ktilde decays along gamma with a 1/gamma envelope") {
  double prev = 1e300;
  for (double gamma : {1.0, 10.0, 100.0}) {
    SymbolPoint p(gamma, 0.7, {1.0});
    auto mu1 = EquilibriumProfile::maxwellian(1, 1.0);
    const double mag = std::abs(svp::ktilde(mu1, p));
    REQUIRE(mag < prev);
    REQUIRE(mag <= 2.0 / gamma);
    prev = mag;
    // doubled-panel oracle: direct fine trapezoid of the defining integral
    cplx acc = 0;
    const int n = 200000;
    const double T = 12.0;
    for (int i = 0; i < n; ++i) {
      auto f = [&](double t) {
        return -0.5 * t * std::exp(-0.5 * t * t) * std::exp(cplx(-gamma * t, -0.7 * t));
      };
      acc += 0.5 * (f(T * i / n) + f(T * (i + 1) / n)) * (T / n);
    }
    REQUIRE(std::abs(svp::ktilde(mu1, p) - acc) < 1e-7);
  }
}

TEST_CASE("conjugate symmetry in tau for radial profiles") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ud(0.1, 5.0);
  for (int i = 0; i < 12; ++i) {
    const double tau = ud(rng), k = ud(rng), gamma = ud(rng) - 0.1;
    SymbolPoint plus(std::max(gamma, 0.0), tau, {k, 0.0, 0.0});
    SymbolPoint minus(std::max(gamma, 0.0), -tau, {k, 0.0, 0.0});
    const cplx a = svp::ktilde(maxwell3, plus);
    const cplx b = svp::ktilde(maxwell3, minus);
    REQUIRE(std::abs(b - std::conj(a)) < 1e-10);
  }
}

TEST_CASE("symbol bound and high-tau decay") {
  // |K~| stays under a generous multiple of the numeric majorant B0/(1+k^2)
  const double b0 = 1.0;  // int u exp(-u^2/2) du for theta = 1
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ud(0.05, 15.0);
  for (int i = 0; i < 40; ++i) {
    const double k = ud(rng);
    SymbolPoint p(ud(rng) - 0.05 > 7 ? 3.0 : 0.0, ud(rng), {k});
    auto mu1 = EquilibriumProfile::maxwellian(1, 1.0);
    REQUIRE(std::abs(svp::ktilde(mu1, p)) <= 10.0 * b0 / (1.0 + k * k));
  }
  // (1 + tau^2) |K~| bounded along a tau sweep, sup attained at small |tau|
  auto mu1 = EquilibriumProfile::maxwellian(1, 1.0);
  double sup = 0, arg = 0;
  for (double tau = -100.0; tau <= 100.0; tau += 0.5) {
    const double w = (1.0 + tau * tau) * std::abs(svp::ktilde(mu1, SymbolPoint(0.0, tau, {1.0})));
    if (w > sup) {
      sup = w;
      arg = std::abs(tau);
    }
  }
  REQUIRE(std::isfinite(sup));
  REQUIRE(arg < 10.0);
}

TEST_CASE("laplace-time consistency with the sampled kernel") {
  // K~(gamma=0, tau, xi) against the trapezoid Fourier sum of K^(t, xi)
  auto mu1 = EquilibriumProfile::maxwellian(1, 1.0);
  const double k = 1.3, tau = 2.1;
  const int n = 4096;
  const double T = 16.0, dt = T / n;
  cplx acc = 0;
  std::vector<double> xi{k};
  for (int j = 0; j <= n; ++j) {
    const double t = j * dt;
    const double w = (j == 0 || j == n) ? 0.5 : 1.0;
    acc += w * svp::khat_time(mu1, t, xi) * std::exp(cplx(0.0, -tau * t));
  }
  acc *= dt;
  const cplx direct = svp::ktilde(mu1, SymbolPoint(0.0, tau, {k}));
  REQUIRE(std::abs(acc - direct) < 1e-4);  // O(dt^2) + tail
}

TEST_CASE("k_h1 homogeneity and consistency with ktilde") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ud(0.2, 3.0);
  for (int i = 0; i < 20; ++i) {
    const double tau = ud(rng), k = ud(rng);
    std::vector<double> xi{k, 0.0, 0.0};
    const cplx base = svp::k_h1(maxwell3, tau, xi);
    for (double lam : {0.5, 2.0}) {
      std::vector<double> xs{lam * k, 0.0, 0.0};
      REQUIRE(std::abs(svp::k_h1(maxwell3, lam * tau, xs) - base) < 1e-8);
    }
    const cplx kt = svp::ktilde(maxwell3, SymbolPoint(0.0, tau, xi));
    REQUIRE(std::abs((1.0 + k * k) * kt - base) < 1e-9);
  }
  auto zero = EquilibriumProfile::zero(3);
  std::vector<double> xi{1.0, 0.0, 0.0};
  REQUIRE(std::abs(svp::k_h1(zero, 1.0, xi)) == 0.0);
}

TEST_CASE("k_h2 decomposition: P2, identity, and contract errors") {
  std::vector<double> e1{1.0, 0.0, 0.0};
  auto dec = svp::k_h2_decomposition(maxwell3, 1.0, e1);
  REQUIRE(dec.p2.real() == Catch::Approx(-1.0).epsilon(1e-12));
  REQUIRE(std::abs(dec.p2.imag()) < 1e-15);

  // finite-difference oracle on fourier_grad_mu: P2 = [i xi . grad_mu^(h xi)] / h
  const double h = 1e-4;
  std::vector<double> hxi{h, 0.0, 0.0};
  auto fg = maxwell3.fourier_grad_mu(hxi);
  const cplx p2_fd = (cplx(0.0, 1.0) * fg[0]) / h;
  REQUIRE(std::abs(p2_fd - dec.p2) < 1e-6);

  // identity against an independently computed K~^{h,1}
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> uk(0.02, 0.5), ut(0.5, 4.0);
  for (int i = 0; i < 50; ++i) {
    const double k = uk(rng);
    const double tau = (i % 2 ? 1.0 : -1.0) * ut(rng);
    std::vector<double> xi{k, 0.0, 0.0};
    auto d2 = svp::k_h2_decomposition(maxwell3, tau, xi);
    const cplx lhs = d2.p2 / (cplx(0.0, tau) * cplx(0.0, tau)) + d2.contraction;
    const cplx rhs = svp::k_h1(maxwell3, tau, xi);
    REQUIRE(std::abs(lhs - rhs) < 1e-6);
  }

  auto zero = EquilibriumProfile::zero(3);
  auto dz = svp::k_h2_decomposition(zero, 1.0, e1);
  REQUIRE(std::abs(dz.p2) == 0.0);
  REQUIRE(std::abs(dz.contraction) == 0.0);
  REQUIRE_THROWS_AS(svp::k_h2_decomposition(maxwell3, 0.0, e1), std::invalid_argument);
}

TEST_CASE("penrose margin: zero profile and contract errors") {
  auto zero = EquilibriumProfile::zero(3);
  svp::PenroseGridSpec spec;
  spec.n_gamma = 4;
  spec.n_tau = 4;
  spec.n_xi = 4;
  auto scan = svp::penrose_margin(zero, spec);
  REQUIRE(scan.margin == 1.0);

  svp::PenroseGridSpec bad;
  bad.gamma_min = -1.0;
  REQUIRE_THROWS_AS(svp::penrose_margin(maxwell3, bad), std::invalid_argument);
}

TEST_CASE("penrose margin: maxwellian is stable, bump two-stream is near-critical") {
  svp::PenroseGridSpec spec;
  spec.n_gamma = 12;
  spec.n_tau = 24;
  spec.n_xi = 24;
  spec.refine_passes = 2;
  auto scan = svp::penrose_margin(maxwell3, spec);
  REQUIRE(scan.margin > 0.2);
  REQUIRE(scan.tail.covered);
  REQUIRE(scan.trace.size() == 3);
  // refinement never worsens the recorded margin
  for (std::size_t i = 1; i < scan.trace.size(); ++i)
    REQUIRE(scan.trace[i].margin <= scan.trace[i - 1].margin + 1e-15);

  auto bump = EquilibriumProfile::bi_maxwellian_bump(3, 2.0, 0.5, 0.2, 0.2);
  svp::PenroseGridSpec bspec;
  bspec.n_gamma = 10;
  bspec.n_tau = 32;
  bspec.n_xi = 24;
  bspec.tau_max = 60.0;
  auto bscan = svp::penrose_margin(bump, bspec);
  REQUIRE(bscan.margin < 0.05);
  REQUIRE(bscan.near_root);
}
