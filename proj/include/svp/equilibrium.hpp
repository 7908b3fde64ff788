#pragma once

// Background velocity profiles mu(v) and their Fourier data. The catalogue
// is Gaussian mixtures (Maxwellian, shifted bi-Maxwellian "bump on tail"
// along the e1 axis) plus tabulated radial profiles. All Fourier data uses
// the convention  g^(xi) = int exp(-i x.xi) g(x) dx,  so a Gaussian mixture
// has the closed form
//   mu^(eta) = sum_j w_j exp(-i u_j eta_1) exp(-theta_j |eta|^2 / 2).

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "svp/grids.hpp"
#include "svp/quadrature.hpp"

namespace svp {

struct GaussianComponent {
  double weight = 1.0;  // mass carried by the component
  double theta = 1.0;   // temperature (variance of the Gaussian)
  double shift = 0.0;   // drift along e1
};

enum class ProfileKind { zero, maxwellian, bi_maxwellian_bump, tabulated_radial };

class EquilibriumProfile {
 public:
  static EquilibriumProfile zero(int d) { return EquilibriumProfile(d, ProfileKind::zero, {}); }

  static EquilibriumProfile maxwellian(int d, double theta) {
    if (!(theta > 0)) throw std::invalid_argument("maxwellian: theta must be > 0");
    return EquilibriumProfile(d, ProfileKind::maxwellian, {{1.0, theta, 0.0}});
  }

  static EquilibriumProfile bi_maxwellian_bump(int d, double u, double alpha, double theta1,
                                               double theta2) {
    if (!(u > 0)) throw std::invalid_argument("bi_maxwellian_bump: separation must be > 0");
    if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("bi_maxwellian_bump: alpha in (0,1)");
    if (!(theta1 > 0 && theta2 > 0)) throw std::invalid_argument("bi_maxwellian_bump: thetas > 0");
    return EquilibriumProfile(d, ProfileKind::bi_maxwellian_bump,
                              {{alpha, theta1, 0.0}, {1.0 - alpha, theta2, u}});
  }

  static EquilibriumProfile tabulated_radial(int d, std::vector<double> radii,
                                             std::vector<double> values) {
    if (radii.size() != values.size() || radii.size() < 4)
      throw std::invalid_argument("tabulated_radial: need >= 4 matching samples");
    EquilibriumProfile p(d, ProfileKind::tabulated_radial, {});
    p.tab_r_ = std::move(radii);
    p.tab_mu_ = std::move(values);
    return p;
  }

  int dimension() const { return dim_; }
  ProfileKind kind() const { return kind_; }
  const std::vector<GaussianComponent>& components() const { return comps_; }
  bool is_radial() const {
    for (const auto& c : comps_)
      if (c.shift != 0.0) return false;
    return true;
  }

  double mass() const {
    if (kind_ == ProfileKind::tabulated_radial) {
      double m = 0;
      for (std::size_t i = 0; i + 1 < tab_r_.size(); ++i) {
        double r0 = tab_r_[i], r1 = tab_r_[i + 1];
        m += 0.5 * (tab_mu_[i] * std::pow(r0, dim_ - 1) + tab_mu_[i + 1] * std::pow(r1, dim_ - 1)) *
             (r1 - r0);
      }
      return m * sphere_surface_area(dim_);
    }
    double m = 0;
    for (const auto& c : comps_) m += c.weight;
    return m;
  }

  // mu(v)
  double operator()(std::span<const double> v) const {
    check_dim(v.size());
    if (kind_ == ProfileKind::tabulated_radial) return tab_eval(norm(v));
    double total = 0;
    for (const auto& c : comps_) {
      double q = 0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        double vi = (i == 0) ? v[i] - c.shift : v[i];
        q += vi * vi;
      }
      total += c.weight * std::pow(2.0 * M_PI * c.theta, -0.5 * dim_) * std::exp(-q / (2.0 * c.theta));
    }
    return total;
  }

  // grad mu(v)
  std::vector<double> grad(std::span<const double> v) const {
    check_dim(v.size());
    std::vector<double> g(dim_, 0.0);
    if (kind_ == ProfileKind::tabulated_radial) {
      const double r = norm(v);
      const double dr = tab_eval_d1(r);
      if (r > 0)
        for (int i = 0; i < dim_; ++i) g[i] = dr * v[i] / r;
      return g;
    }
    for (const auto& c : comps_) {
      double q = 0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        double vi = (i == 0) ? v[i] - c.shift : v[i];
        q += vi * vi;
      }
      const double val =
          c.weight * std::pow(2.0 * M_PI * c.theta, -0.5 * dim_) * std::exp(-q / (2.0 * c.theta));
      for (int i = 0; i < dim_; ++i) {
        double vi = (i == 0) ? v[i] - c.shift : v[i];
        g[i] -= vi / c.theta * val;
      }
    }
    return g;
  }

  // mu^(eta)
  cplx fourier_mu(std::span<const double> eta) const {
    check_dim(eta.size());
    if (kind_ == ProfileKind::tabulated_radial) return fourier_radial(norm(eta));
    cplx total = 0;
    const double k2 = dot(eta, eta);
    for (const auto& c : comps_)
      total += c.weight * std::exp(cplx(-0.5 * c.theta * k2, -c.shift * eta[0]));
    return total;
  }

  // Fourier transform of grad_v mu at eta:  i eta mu^(eta).
  std::vector<cplx> fourier_grad_mu(std::span<const double> eta) const {
    const cplx mh = fourier_mu(eta);
    std::vector<cplx> out(dim_);
    for (int i = 0; i < dim_; ++i) out[i] = cplx(0.0, eta[i]) * mh;
    return out;
  }

  // Axis profile m(kappa) = mu^(kappa e1) and derivatives. Real for radial
  // profiles; complex when a drifted component is present.
  cplx fourier_radial(double kappa) const {
    if (kind_ == ProfileKind::tabulated_radial) return tab_fourier(kappa);
    cplx total = 0;
    for (const auto& c : comps_)
      total += c.weight * std::exp(cplx(-0.5 * c.theta * kappa * kappa, -c.shift * kappa));
    return total;
  }

  cplx fourier_radial_d1(double kappa) const {
    if (kind_ == ProfileKind::tabulated_radial) return tab_fourier_fd(kappa, 1);
    cplx total = 0;
    for (const auto& c : comps_) {
      const cplx base = c.weight * std::exp(cplx(-0.5 * c.theta * kappa * kappa, -c.shift * kappa));
      total += base * cplx(-c.theta * kappa, -c.shift);
    }
    return total;
  }

  cplx fourier_radial_d2(double kappa) const {
    if (kind_ == ProfileKind::tabulated_radial) return tab_fourier_fd(kappa, 2);
    cplx total = 0;
    for (const auto& c : comps_) {
      const cplx base = c.weight * std::exp(cplx(-0.5 * c.theta * kappa * kappa, -c.shift * kappa));
      const cplx lin(-c.theta * kappa, -c.shift);
      total += base * (lin * lin - c.theta);
    }
    return total;
  }

  // Largest temperature, used for scan compactification defaults.
  double max_theta() const {
    double t = 0;
    for (const auto& c : comps_) t = std::max(t, c.theta);
    return t > 0 ? t : 1.0;
  }

  double max_drift() const {
    double u = 0;
    for (const auto& c : comps_) u = std::max(u, std::abs(c.shift));
    return u;
  }

 private:
  EquilibriumProfile(int d, ProfileKind k, std::vector<GaussianComponent> comps)
      : dim_(d), kind_(k), comps_(std::move(comps)) {
    if (d < 1) throw std::invalid_argument("EquilibriumProfile: dimension must be >= 1");
  }

  void check_dim(std::size_t n) const {
    if (static_cast<int>(n) != dim_)
      throw std::invalid_argument("EquilibriumProfile: vector has wrong dimension");
  }

  static double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  }
  static double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

  double tab_eval(double r) const {
    if (r < tab_r_.front() - 1e-12 || r > tab_r_.back() + 1e-12)
      throw std::domain_error("tabulated profile: |v| = " + std::to_string(r) +
                              " outside sample range");
    // linear interpolation is enough for an audit-grade profile
    auto it = std::lower_bound(tab_r_.begin(), tab_r_.end(), r);
    std::size_t i = (it == tab_r_.begin()) ? 0 : (it - tab_r_.begin() - 1);
    i = std::min(i, tab_r_.size() - 2);
    const double w = (r - tab_r_[i]) / (tab_r_[i + 1] - tab_r_[i]);
    return (1 - w) * tab_mu_[i] + w * tab_mu_[i + 1];
  }

  double tab_eval_d1(double r) const {
    auto it = std::lower_bound(tab_r_.begin(), tab_r_.end(), r);
    std::size_t i = (it == tab_r_.begin()) ? 0 : (it - tab_r_.begin() - 1);
    i = std::min(i, tab_r_.size() - 2);
    return (tab_mu_[i + 1] - tab_mu_[i]) / (tab_r_[i + 1] - tab_r_[i]);
  }

  // Radial Fourier transform of the tabulated profile by Gauss-Legendre
  // panels over the sample range (default 256 panels).
  cplx tab_fourier(double kappa, int panels = 256) const {
    static const GaussLegendre gl = gauss_legendre(8);
    const double rmax = tab_r_.back();
    double total = 0;
    for (int p = 0; p < panels; ++p) {
      const double a = rmax * p / panels, b = rmax * (p + 1) / panels;
      for (std::size_t q = 0; q < gl.x.size(); ++q) {
        const double r = 0.5 * (a + b) + 0.5 * (b - a) * gl.x[q];
        const double w = 0.5 * (b - a) * gl.w[q];
        total += w * tab_eval(r) * radial_kernel(kappa, r);
      }
    }
    return total;
  }

  cplx tab_fourier_fd(double kappa, int order) const {
    const double h = 1e-4 * std::max(1.0, std::abs(kappa));
    if (order == 1) return (tab_fourier(kappa + h) - tab_fourier(kappa - h)) / (2 * h);
    return (tab_fourier(kappa + h) - 2.0 * tab_fourier(kappa) + tab_fourier(kappa - h)) / (h * h);
  }

  // Kernel of the d-dimensional radial transform: mu^(k) = int mu(r) ker(k,r) dr.
  double radial_kernel(double k, double r) const {
    const double x = k * r;
    if (dim_ == 1) return 2.0 * std::cos(x);
    if (dim_ == 3) {
      if (x < 1e-8) return 4.0 * M_PI * r * r * (1.0 - x * x / 6.0);
      return 4.0 * M_PI * r * std::sin(x) / k;
    }
    // general d: (2 pi)^{d/2} k^{1-d/2} J_{d/2-1}(kr) r^{d/2};
    // the k -> 0 limit is w_d r^{d-1}.
    const double nu = 0.5 * dim_ - 1.0;
    if (x < 1e-10) return sphere_surface_area(dim_) * std::pow(r, dim_ - 1);
    return std::pow(2.0 * M_PI, 0.5 * dim_) * std::pow(k, 1.0 - 0.5 * dim_) *
           std::cyl_bessel_j(nu, x) * std::pow(r, 0.5 * dim_);
  }

  int dim_;
  ProfileKind kind_;
  std::vector<GaussianComponent> comps_;
  std::vector<double> tab_r_, tab_mu_;
};

// ---------------------------------------------------------------------------
// (H1) audit: weighted sup/L1 norms of radial derivatives along the symmetry
// axis, on a dyadic grid out to 12 sqrt(theta) past the largest drift.

struct H1Row {
  int order = 0;
  double weighted_sup = 0.0;  // sup <r>^k |d^j mu / dr^j|
  double weighted_l1 = 0.0;   // int <r>^{4d+6} |d^j mu / dr^j| w_d r^{d-1} dr
};

struct H1Report {
  bool satisfied = false;
  double k = 0.0;
  int max_order = 0;
  std::vector<H1Row> rows;
  std::string message;
};

namespace detail {

// j-th derivative of a Gaussian mixture profile along the axis, via the
// probabilists' Hermite recurrence.
inline double axis_derivative(const EquilibriumProfile& p, double r, int j) {
  double total = 0;
  for (const auto& c : p.components()) {
    const double s = std::sqrt(c.theta);
    const double x = (r - c.shift) / s;
    double he0 = 1.0, he1 = x;
    double he = (j == 0) ? he0 : he1;
    for (int m = 1; m < j; ++m) {
      double next = x * he1 - m * he0;
      he0 = he1;
      he1 = next;
      he = next;
    }
    const double norm = c.weight * std::pow(2.0 * M_PI * c.theta, -0.5 * p.dimension());
    total += norm * std::pow(-1.0 / s, j) * he * std::exp(-0.5 * x * x);
  }
  return total;
}

}  // namespace detail

inline H1Report verify_h1(const EquilibriumProfile& p, double k, int max_order) {
  if (!(k > p.dimension()))
    throw std::invalid_argument("verify_h1: weight exponent k must exceed the dimension");
  if (p.kind() == ProfileKind::tabulated_radial)
    throw std::invalid_argument("verify_h1: tabulated profiles carry no smoothness metadata");

  const int d = p.dimension();
  const int cap = std::min(max_order, 2 * d + 5);
  const double rmax = 12.0 * std::sqrt(p.max_theta()) + p.max_drift();
  const double wd = sphere_surface_area(d);

  H1Report rep;
  rep.k = k;
  rep.max_order = cap;
  const int ngrid = 4096;
  for (int j = 1; j <= cap + 1; ++j) {
    H1Row row;
    row.order = j;
    double prev_r = 0.0, prev_f = 0.0;
    for (int i = 0; i <= ngrid; ++i) {
      const double r = rmax * i / ngrid;
      const double df = std::abs(detail::axis_derivative(p, r, j));
      row.weighted_sup = std::max(row.weighted_sup, std::pow(1.0 + r * r, 0.5 * k) * df);
      const double f = std::pow(1.0 + r * r, 0.5 * (4 * d + 6)) * df * wd * std::pow(r, d - 1);
      if (i > 0) row.weighted_l1 += 0.5 * (prev_f + f) * (r - prev_r);
      prev_r = r;
      prev_f = f;
    }
    rep.rows.push_back(row);
    if (!std::isfinite(row.weighted_sup) || !std::isfinite(row.weighted_l1)) {
      rep.satisfied = false;
      rep.message = "non-finite weighted norm at derivative order " + std::to_string(j);
      return rep;
    }
  }
  rep.satisfied = true;
  rep.message = "all weighted norms finite (radial audit along the symmetry axis)";
  return rep;
}

}  // namespace svp
