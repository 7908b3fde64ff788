#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "svp/equilibrium.hpp"
#include "svp/volterra.hpp"

using svp::cplx;
using svp::EquilibriumProfile;
using svp::ModeSeries;
using svp::TimeGrid;

namespace {

ModeSeries gaussian_source(const TimeGrid& g, const std::vector<double>& xi) {
  ModeSeries s(g, xi, svp::SeriesKind::source);
  for (int m = 0; m < s.modes(); ++m)
    for (int k = 0; k < s.nodes(); ++k) {
      const double t = g.node(k);
      s.at(m, k) = std::exp(-0.5 * t * t);
    }
  return s;
}

// smooth decaying random source for property tests
ModeSeries random_smooth_source(const TimeGrid& g, const std::vector<double>& xi,
                                std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ud(0.2, 2.0);
  ModeSeries s(g, xi, svp::SeriesKind::source);
  for (int m = 0; m < s.modes(); ++m) {
    const double a = ud(rng), c = ud(rng) * 2.0, w = ud(rng), om = ud(rng) * 3.0, b = ud(rng);
    for (int k = 0; k < s.nodes(); ++k) {
      const double t = g.node(k);
      s.at(m, k) = a * std::exp(-std::pow((t - c) / w, 2)) +
                   b * std::cos(om * t) * std::exp(-0.3 * t);
    }
  }
  return s;
}

double sup_diff_common_nodes(const ModeSeries& coarse, const ModeSeries& fine) {
  // fine has twice the steps of coarse over the same horizon
  double sup = 0;
  for (int m = 0; m < coarse.modes(); ++m)
    for (int k = 0; k < coarse.nodes(); ++k)
      sup = std::max(sup, std::abs(coarse.at(m, k) - fine.at(m, 2 * k)));
  return sup;
}

}  // namespace

TEST_CASE("zero kernel returns the source exactly") {
  TimeGrid g(10.0, 200);
  std::vector<double> xi{0.5, 1.0};
  auto zero = EquilibriumProfile::zero(3);
  auto kernel = svp::mode_sweep(zero, g, xi);
  auto src = gaussian_source(g, xi);
  auto rho = svp::solve_mode_volterra(kernel, src);
  for (int m = 0; m < rho.modes(); ++m)
    for (int k = 0; k < rho.nodes(); ++k) REQUIRE(rho.at(m, k) == src.at(m, k));

  auto res = svp::resolvent_mode(kernel);
  for (const auto& v : res.values) REQUIRE(std::abs(v) == 0.0);
}

TEST_CASE("mode sweep tabulates the closed-form kernel") {
  auto mu = EquilibriumProfile::maxwellian(3, 1.0);
  TimeGrid g(4.0, 400);
  std::vector<double> xi{0.5, 1.0, 2.0};
  auto kernel = svp::mode_sweep(mu, g, xi);
  for (int m = 0; m < kernel.modes(); ++m) REQUIRE(std::abs(kernel.at(m, 0)) == 0.0);
  // entry (|xi| = 1, t = 1)
  REQUIRE(kernel.at(1, 100).real() == Catch::Approx(-0.5 * std::exp(-0.5)).epsilon(1e-12));
  // envelope max sits at t = 1/|xi| for the maxwellian
  for (int m = 0; m < kernel.modes(); ++m) {
    int arg = 0;
    double best = 0;
    for (int k = 0; k < kernel.nodes(); ++k)
      if (std::abs(kernel.at(m, k)) > best) {
        best = std::abs(kernel.at(m, k));
        arg = k;
      }
    REQUIRE(std::abs(g.node(arg) - 1.0 / xi[m]) <= 2.0 * g.dt());
  }
}

TEST_CASE("marching matches a brute-force picard iteration of the discrete equation") {
  auto mu = EquilibriumProfile::maxwellian(3, 1.0);
  TimeGrid g(8.0, 256);
  std::vector<double> xi{1.0};
  auto kernel = svp::mode_sweep(mu, g, xi);
  auto src = gaussian_source(g, xi);
  auto rho = svp::solve_mode_volterra(kernel, src);

  const double dt = g.dt();
  std::vector<cplx> iter(src.mode(0).begin(), src.mode(0).end());
  for (int pass = 0; pass < g.nodes() + 2; ++pass) {
    auto conv = svp::convolve_trapezoid(kernel.mode(0), iter, dt);
    for (int k = 0; k < g.nodes(); ++k) iter[k] = src.at(0, k) + conv[k];
  }
  for (int k = 0; k < g.nodes(); ++k) REQUIRE(std::abs(rho.at(0, k) - iter[k]) < 1e-12);
}

TEST_CASE("linearity of the solve") {
  auto mu = EquilibriumProfile::maxwellian(3, 1.0);
  TimeGrid g(6.0, 128);
  std::vector<double> xi{0.7};
  auto kernel = svp::mode_sweep(mu, g, xi);
  std::mt19937_64 rng(3);
  auto s1 = random_smooth_source(g, xi, rng);
  auto s2 = random_smooth_source(g, xi, rng);
  const double a = 1.7, b = -0.4;
  ModeSeries mix(g, xi, svp::SeriesKind::source);
  for (std::size_t i = 0; i < mix.values.size(); ++i)
    mix.values[i] = a * s1.values[i] + b * s2.values[i];
  auto r1 = svp::solve_mode_volterra(kernel, s1);
  auto r2 = svp::solve_mode_volterra(kernel, s2);
  auto rm = svp::solve_mode_volterra(kernel, mix);
  for (std::size_t i = 0; i < rm.values.size(); ++i)
    REQUIRE(std::abs(rm.values[i] - (a * r1.values[i] + b * r2.values[i])) < 1e-12);
}

TEST_CASE("order-2 convergence: richardson ratio near 4") {
  auto mu = EquilibriumProfile::maxwellian(3, 1.0);
  std::vector<double> xi{1.0};
  const double T = 8.0;
  TimeGrid g1(T, 128), g2(T, 256), g3(T, 512);
  auto k1 = svp::mode_sweep(mu, g1, xi), k2 = svp::mode_sweep(mu, g2, xi),
       k3 = svp::mode_sweep(mu, g3, xi);
  auto r1 = svp::solve_mode_volterra(k1, gaussian_source(g1, xi));
  auto r2 = svp::solve_mode_volterra(k2, gaussian_source(g2, xi));
  auto r3 = svp::solve_mode_volterra(k3, gaussian_source(g3, xi));
  const double e12 = sup_diff_common_nodes(r1, r2);
  const double e23 = sup_diff_common_nodes(r2, r3);
  REQUIRE(e12 / e23 > 3.5);
  REQUIRE(e12 / e23 < 4.5);
}

TEST_CASE("resolvent identity rho = S + G conv S on the grid") {
  auto mu = EquilibriumProfile::maxwellian(3, 1.0);
  TimeGrid g(10.0, 512);
  std::vector<double> xi{0.3, 1.0, 2.5};
  auto kernel = svp::mode_sweep(mu, g, xi);
  auto gres = svp::resolvent_mode(kernel);
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 4; ++trial) {
    auto src = random_smooth_source(g, xi, rng);
    auto rho = svp::solve_mode_volterra(kernel, src);
    for (int m = 0; m < rho.modes(); ++m) {
      auto conv = svp::convolve_trapezoid(gres.mode(m), src.mode(m), g.dt());
      for (int k = 0; k < rho.nodes(); ++k)
        REQUIRE(std::abs(rho.at(m, k) - (src.at(m, k) + conv[k])) < 5e-10);
    }
  }
}

TEST_CASE("resolvent decays and stays bounded for the maxwellian") {
  auto mu = EquilibriumProfile::maxwellian(3, 1.0);
  TimeGrid g(30.0, 1200);
  std::vector<double> xi{1.0};
  auto gres = svp::resolvent_mode(svp::mode_sweep(mu, g, xi));
  double sup = 0, tail = 0;
  for (int k = 0; k < gres.nodes(); ++k) {
    sup = std::max(sup, std::abs(gres.at(0, k)));
    if (g.node(k) > 20.0) tail = std::max(tail, std::abs(gres.at(0, k)));
  }
  REQUIRE(std::isfinite(sup));
  REQUIRE(sup < 1.0);
  REQUIRE(tail < 1e-6 * sup);
}

TEST_CASE("stability constant does not grow when the horizon doubles") {
  auto mu = EquilibriumProfile::maxwellian(3, 1.0);
  std::vector<double> xi{0.25, 0.5, 1.0, 2.0};
  auto measure = [&](double T) {
    TimeGrid g(T, static_cast<int>(T * 40));
    auto kernel = svp::mode_sweep(mu, g, xi);
    auto src = gaussian_source(g, xi);
    auto rho = svp::solve_mode_volterra(kernel, src);
    double sup_rho = 0, sup_src = 0;
    for (const auto& v : rho.values) sup_rho = std::max(sup_rho, std::abs(v));
    for (const auto& v : src.values) sup_src = std::max(sup_src, std::abs(v));
    return sup_rho / sup_src;
  };
  const double c1 = measure(20.0), c2 = measure(40.0);
  REQUIRE(c2 <= 1.05 * c1);
}

TEST_CASE("causality: future source perturbations do not touch the past") {
  auto mu = EquilibriumProfile::maxwellian(3, 1.0);
  TimeGrid g(10.0, 200);
  std::vector<double> xi{1.0};
  auto kernel = svp::mode_sweep(mu, g, xi);
  auto src = gaussian_source(g, xi);
  auto rho = svp::solve_mode_volterra(kernel, src);
  auto src2 = src;
  const int cut = 120;
  for (int k = cut; k < g.nodes(); ++k) src2.at(0, k) += cplx(3.0, -1.0);
  auto rho2 = svp::solve_mode_volterra(kernel, src2);
  for (int k = 0; k < cut; ++k) REQUIRE(rho.at(0, k) == rho2.at(0, k));
  REQUIRE(std::abs(rho.at(0, cut) - rho2.at(0, cut)) > 0.0);
}

TEST_CASE("grid and mode mismatches are contract errors") {
  auto mu = EquilibriumProfile::maxwellian(3, 1.0);
  TimeGrid g1(5.0, 100), g2(5.0, 101);
  std::vector<double> xi{1.0};
  auto k1 = svp::mode_sweep(mu, g1, xi);
  auto s2 = gaussian_source(g2, xi);
  REQUIRE_THROWS_AS(svp::solve_mode_volterra(k1, s2), std::invalid_argument);
}
