#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>
#include <vector>

#include "svp/decay_fit.hpp"
#include "svp/grids.hpp"
#include "svp/littlewood_paley.hpp"
#include "svp/radial_fourier.hpp"

namespace {

std::vector<double> sample(const std::vector<double>& xs, double (*f)(double)) {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = f(xs[i]);
  return out;
}

}  // namespace

TEST_CASE("gaussian self-transform in d = 3") {
  auto ks = svp::geometric_grid(1e-3, 40.0, 3000);
  auto fhat = sample(ks, +[](double k) { return std::exp(-0.5 * k * k); });
  auto radii = svp::geometric_grid(1e-3, 20.0, 400);
  auto snap = svp::radial_inverse_fourier(3, ks, fhat, radii, true);
  for (std::size_t j = 0; j < radii.size(); ++j) {
    const double r = radii[j];
    const double want = std::pow(2.0 * M_PI, -1.5) * std::exp(-0.5 * r * r);
    REQUIRE(std::abs(snap.values[j] - want) < 5e-8);
    const double want_grad = -want * r;  // signed radial derivative
    REQUIRE(std::abs((*snap.gradient)[j] - want_grad) < 5e-8);
  }
}

TEST_CASE("zero symbol reconstructs to zero") {
  auto ks = svp::geometric_grid(1e-3, 10.0, 64);
  std::vector<double> fhat(ks.size(), 0.0);
  auto radii = svp::geometric_grid(0.1, 10.0, 16);
  auto snap = svp::radial_inverse_fourier(3, ks, fhat, radii);
  for (double v : snap.values) REQUIRE(v == 0.0);
}

TEST_CASE("screened poisson kernel: 1/(1+k^2) maps to exp(-r)/(4 pi r)") {
  auto ks = svp::geometric_grid(1e-4, 3000.0, 24000);
  auto fhat = sample(ks, +[](double k) { return 1.0 / (1.0 + k * k); });
  auto radii = svp::geometric_grid(0.2, 25.0, 200);
  auto snap = svp::radial_inverse_fourier(3, ks, fhat, radii);
  for (std::size_t j = 0; j < radii.size(); ++j) {
    const double r = radii[j];
    const double want = std::exp(-r) / (4.0 * M_PI * r);
    // the symbol decays only like k^-2, so the truncation tail at k = 3000
    // limits the small-r accuracy to ~1/(2 pi^2 r (k_max r))
    REQUIRE(snap.values[j] == Catch::Approx(want).margin(1e-4).epsilon(2e-3));
  }
}

TEST_CASE("norms of the unit gaussian and the yukawa kernel") {
  auto ks = svp::geometric_grid(1e-3, 40.0, 3000);
  auto fhat = sample(ks, +[](double k) { return std::exp(-0.5 * k * k); });
  auto radii = svp::geometric_grid(1e-3, 50.0, 1200);
  auto snap = svp::radial_inverse_fourier(3, ks, fhat, radii);
  auto n = svp::norms(snap);
  REQUIRE(n.l1 == Catch::Approx(1.0).margin(5e-5));
  REQUIRE(n.linf == Catch::Approx(std::pow(2.0 * M_PI, -1.5)).margin(1e-8));
  REQUIRE_FALSE(n.linf_diverging);

  svp::RadialSnapshot yuk;
  yuk.dim = 3;
  yuk.radii = svp::geometric_grid(1e-4, 60.0, 4000);
  yuk.values.resize(yuk.radii.size());
  for (std::size_t i = 0; i < yuk.radii.size(); ++i)
    yuk.values[i] = std::exp(-yuk.radii[i]) / (4.0 * M_PI * yuk.radii[i]);
  auto ny = svp::norms(yuk);
  REQUIRE(ny.l1 == Catch::Approx(1.0).margin(1e-4));
  REQUIRE(ny.linf_diverging);

  svp::RadialSnapshot zero;
  zero.dim = 3;
  zero.radii = {0.1, 1.0, 2.0};
  zero.values = {0.0, 0.0, 0.0};
  auto nz = svp::norms(zero);
  REQUIRE(nz.l1 == 0.0);
  REQUIRE(nz.linf == 0.0);
}

TEST_CASE("norms flags a tail-dominated integral") {
  svp::RadialSnapshot s;
  s.dim = 3;
  s.radii = svp::geometric_grid(0.1, 100.0, 500);
  s.values.assign(s.radii.size(), 1e-3);  // constant, mass concentrated at large r
  REQUIRE_THROWS_AS(svp::norms(s), svp::accuracy_error);
}

TEST_CASE("plancherel for gaussian symbols") {
  auto ks = svp::geometric_grid(1e-3, 40.0, 4000);
  auto fhat = sample(ks, +[](double k) { return std::exp(-0.5 * k * k); });
  auto radii = svp::geometric_grid(1e-3, 40.0, 2000);
  auto snap = svp::radial_inverse_fourier(3, ks, fhat, radii);
  double lhs = 0, rhs = 0;
  for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
    auto f = [&](std::size_t j) {
      return snap.values[j] * snap.values[j] * radii[j] * radii[j];
    };
    lhs += 0.5 * (f(i) + f(i + 1)) * (radii[i + 1] - radii[i]);
  }
  for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
    auto f = [&](std::size_t j) { return fhat[j] * fhat[j] * ks[j] * ks[j]; };
    rhs += 0.5 * (f(i) + f(i + 1)) * (ks[i + 1] - ks[i]);
  }
  rhs *= std::pow(2.0 * M_PI, -3);
  REQUIRE(lhs == Catch::Approx(rhs).margin(1e-6));
}

TEST_CASE("dilation covariance of the inverse transform") {
  const double lam = 1.7;
  auto ks = svp::geometric_grid(1e-3, 60.0, 4000);
  std::vector<double> f0(ks.size()), fl(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    f0[i] = std::exp(-0.5 * ks[i] * ks[i]) * (1.0 + ks[i]);
    fl[i] = std::exp(-0.5 * lam * lam * ks[i] * ks[i]) * (1.0 + lam * ks[i]);
  }
  auto radii = svp::geometric_grid(0.02, 8.0, 50);
  std::vector<double> scaled(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) scaled[i] = radii[i] / lam;
  auto gl = svp::radial_inverse_fourier(3, ks, fl, radii);
  auto g0 = svp::radial_inverse_fourier(3, ks, f0, scaled);
  for (std::size_t i = 0; i < radii.size(); ++i)
    REQUIRE(std::abs(gl.values[i] - std::pow(lam, -3) * g0.values[i]) < 1e-8);
}

TEST_CASE("forward and inverse radial transforms are mutually consistent") {
  auto radii = svp::geometric_grid(1e-3, 30.0, 2000);
  auto g = sample(radii, +[](double r) { return std::exp(-0.7 * r * r); });
  auto ks = svp::geometric_grid(1e-2, 12.0, 200);
  auto fhat = svp::radial_forward_fourier(3, radii, g, ks);
  // analytic transform of exp(-a r^2): (pi/a)^{3/2} exp(-k^2/(4a))
  const double a = 0.7;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double want = std::pow(M_PI / a, 1.5) * std::exp(-ks[i] * ks[i] / (4 * a));
    REQUIRE(fhat[i] == Catch::Approx(want).margin(1e-7));
  }
}

TEST_CASE("riesz smoothing: gradient of the screened potential is Lp bounded") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> ud(0.3, 3.0);
  auto ks = svp::geometric_grid(1e-3, 60.0, 3000);
  auto radii = svp::geometric_grid(1e-3, 200.0, 1500);
  double c1_max = 0, cinf_max = 0;
  for (int trial = 0; trial < 6; ++trial) {
    const double a = ud(rng), b = ud(rng);
    std::vector<double> u(ks.size()), pu(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) {
      u[i] = std::exp(-0.5 * a * ks[i] * ks[i]) + 0.5 * std::exp(-0.5 * b * ks[i] * ks[i]);
      pu[i] = u[i] / (1.0 + ks[i] * ks[i]);
    }
    auto base = svp::radial_inverse_fourier(3, ks, u, radii, false);
    auto smoothed = svp::radial_inverse_fourier(3, ks, pu, radii, true);
    auto nb = svp::norms(base);
    svp::RadialSnapshot grad;
    grad.dim = 3;
    grad.radii = radii;
    grad.values = *smoothed.gradient;
    auto ng = svp::norms(grad);
    c1_max = std::max(c1_max, ng.l1 / nb.l1);
    cinf_max = std::max(cinf_max, ng.linf / nb.linf);
  }
  REQUIRE(c1_max < 5.0);
  REQUIRE(cinf_max < 5.0);
}

TEST_CASE("littlewood-paley bump and blocks") {
  REQUIRE(svp::lp_chi(0.2) == 0.0);
  REQUIRE(svp::lp_chi(5.0) == 0.0);
  REQUIRE(svp::lp_chi(1.0) == 1.0);
  REQUIRE(svp::lp_chi(0.5) == 1.0);
  REQUIRE(svp::lp_chi(2.0) == 1.0);
  REQUIRE(svp::lp_chi(0.35) > 0.0);
  REQUIRE(svp::lp_chi(0.35) < 1.0);

  // a symbol supported in the plateau annulus passes through block q = 0
  auto ks = svp::geometric_grid(0.5, 2.0, 64);
  std::vector<double> f(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) f[i] = std::sin(ks[i]);
  auto blocked = svp::lp_block(ks, f, 0);
  for (std::size_t i = 0; i < ks.size(); ++i) REQUIRE(blocked[i] == f[i]);

  // scaling: the q-block of f(k) equals the 0-block of f(2^q k)
  auto ks2 = svp::geometric_grid(1e-2, 50.0, 128);
  std::vector<double> g(ks2.size());
  for (std::size_t i = 0; i < ks2.size(); ++i) g[i] = std::exp(-ks2[i]);
  const int q = 2;
  auto bq = svp::lp_block(ks2, g, q);
  for (std::size_t i = 0; i < ks2.size(); ++i) {
    const double scaled_arg = ks2[i] / std::pow(2.0, q);
    const double want = std::exp(-ks2[i]) * svp::lp_chi(scaled_arg);
    REQUIRE(bq[i] == Catch::Approx(want).margin(1e-15));
  }

  // partition sum stays within [1, 3] well inside the covered range
  for (double k : {0.1, 0.7, 1.0, 3.3, 10.0}) {
    const double p = svp::lp_partition_sum(k, -10, 10);
    REQUIRE(p >= 1.0 - 1e-12);
    REQUIRE(p <= 3.0 + 1e-12);
  }
}

TEST_CASE("bernstein ratios for a pure block scale like 2^q") {
  auto ks = svp::geometric_grid(1e-3, 64.0, 4000);
  auto radii = svp::geometric_grid(1e-3, 2000.0, 2200);
  double ratio_q0_l1 = 0;
  for (int q : {-2, 0, 2}) {
    std::vector<double> chi(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) chi[i] = svp::lp_chi_q(ks[i], q);
    auto u = svp::radial_inverse_fourier(3, ks, chi, radii, true);
    auto n = svp::norms(u);
    const double scale = std::pow(2.0, q);
    const double r1 = n.grad_l1 / n.l1 / scale;
    const double rinf = n.grad_linf / n.linf / scale;
    REQUIRE(r1 > 0.3);
    REQUIRE(r1 < 6.0);
    REQUIRE(rinf > 0.3);
    REQUIRE(rinf < 6.0);
    if (q == 0) ratio_q0_l1 = r1;
  }
  REQUIRE(ratio_q0_l1 > 0.0);
}

TEST_CASE("fit_decay on synthetic power laws") {
  std::vector<double> ts, v1, v2;
  for (int i = 0; i < 24; ++i) {
    const double t = 10.0 * std::pow(10.0, i / 23.0);
    ts.push_back(t);
    v1.push_back(std::pow(t, -3.0));
    v2.push_back(std::log(2.0 + t) / std::pow(t, 3.0));
  }
  auto r1 = svp::fit_decay(ts, v1, -3.0, 0.01, false, "pure power");
  REQUIRE(r1.pass);
  REQUIRE(r1.fitted_exponent == Catch::Approx(-3.0).margin(1e-9));

  auto r2 = svp::fit_decay(ts, v2, -3.0, 0.02, true, "log-corrected");
  REQUIRE(r2.pass);
  REQUIRE(r2.log_correction_improves);

  auto r3 = svp::fit_decay(ts, v2, -3.0, 0.02, false, "uncorrected");
  REQUIRE(r3.fitted_exponent > -3.0);
  REQUIRE(r3.fitted_exponent < -2.7);

  REQUIRE_THROWS_AS(svp::fit_decay(std::vector<double>{1, 2, 3}, std::vector<double>{1, 1, 1},
                                   -1.0, 0.1, false, ""),
                    std::invalid_argument);
  std::vector<double> bad_t{0.5, 2, 3, 4, 5, 6, 7, 8};
  std::vector<double> ones(8, 1.0);
  REQUIRE_THROWS_AS(svp::fit_decay(bad_t, ones, -1.0, 0.1, false, ""), std::invalid_argument);
  std::vector<double> neg(8, -1.0);
  std::vector<double> ok_t{1, 2, 3, 4, 5, 6, 7, 8};
  REQUIRE_THROWS_AS(svp::fit_decay(ok_t, neg, -1.0, 0.1, false, ""), std::invalid_argument);
}
