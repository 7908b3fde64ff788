#pragma once

// Dyadic frequency blocks. chi(zeta) = psi(|zeta|) with psi a fixed C-inf
// bump built from the exp(-1/x) mollifier: 0 outside [1/4, 4], 1 on
// [1/2, 2]. The same psi is used everywhere so block tests reproduce
// bit-for-bit. The shifted copies chi(zeta / 2^q) overlap, so the blocks
// sum to P(zeta) * fhat with P between 1 and 3; tests normalise by P.

#include <cmath>
#include <span>
#include <vector>

namespace svp {

namespace detail {

inline double mollifier_ramp(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

// smooth 0 -> 1 transition on [0, 1]
inline double smooth_step(double x) {
  const double a = mollifier_ramp(x);
  const double b = mollifier_ramp(1.0 - x);
  return a / (a + b);
}

}  // namespace detail

inline double lp_chi(double zeta) {
  const double r = std::abs(zeta);
  if (r <= 0.25 || r >= 4.0) return 0.0;
  if (r >= 0.5 && r <= 2.0) return 1.0;
  if (r < 0.5) return detail::smooth_step((r - 0.25) / 0.25);
  return 1.0 - detail::smooth_step((r - 2.0) / 2.0);
}

inline double lp_chi_q(double zeta, int q) { return lp_chi(zeta * std::pow(2.0, -q)); }

// fhat restricted to the dyadic annulus 2^q.
inline std::vector<double> lp_block(std::span<const double> ks, std::span<const double> fhat,
                                    int q) {
  std::vector<double> out(fhat.size());
  for (std::size_t i = 0; i < ks.size(); ++i) out[i] = fhat[i] * lp_chi_q(ks[i], q);
  return out;
}

// sum_q chi_q over a q-window; the partition profile P(zeta).
inline double lp_partition_sum(double zeta, int q_min, int q_max) {
  double s = 0;
  for (int q = q_min; q <= q_max; ++q) s += lp_chi_q(zeta, q);
  return s;
}

// q-range whose annuli cover [k_lo, k_hi].
inline std::pair<int, int> lp_covering_range(double k_lo, double k_hi) {
  const int q_min = static_cast<int>(std::floor(std::log2(k_lo / 4.0)));
  const int q_max = static_cast<int>(std::ceil(std::log2(k_hi * 4.0)));
  return {q_min, q_max};
}

}  // namespace svp
