// Sweeps the bump-on-tail separation and prints the stability margin:
// around u ~ 2 thermal widths the screened two-stream configuration grazes
// the Penrose boundary.

#include <cstdio>

#include "svp/dispersion.hpp"

int main() {
  std::printf("%8s %10s %10s\n", "u", "margin", "near_root");
  for (double u = 0.5; u <= 3.51; u += 0.5) {
    auto mu = svp::EquilibriumProfile::bi_maxwellian_bump(3, u, 0.5, 0.2, 0.2);
    svp::PenroseGridSpec spec = svp::default_penrose_spec(mu);
    spec.n_gamma = 16;
    spec.n_tau = 32;
    spec.n_xi = 32;
    auto scan = svp::penrose_margin(mu, spec);
    std::printf("%8.2f %10.5f %10s\n", u, scan.margin, scan.near_root ? "yes" : "no");
  }
  return 0;
}
