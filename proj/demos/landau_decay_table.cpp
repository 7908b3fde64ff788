// Prints the resolvent kernel norms over time for a maxwellian background:
// the L1 norm falls like 1/t and the sup norm like 1/t^4 in three
// dimensions, the screened Landau damping rates.

#include <cstdio>

#include "svp/experiments.hpp"

int main() {
  svp::RunConfig c;
  c.experiment = "kernel-decay";
  c.dimension = 3;
  c.t_max = 60.0;
  c.dt = 0.1;
  c.modes = 768;
  c.fit_t_lo = 8.0;
  c.fit_t_hi = 60.0;
  c.fit_points = 10;
  auto res = svp::kernel_decay_experiment(c);
  std::printf("%8s %12s %12s %12s %12s\n", "t", "|G|_1", "|G|_inf", "|dG|_1", "|dG|_inf");
  for (const auto& r : res.rows)
    std::printf("%8.2f %12.4e %12.4e %12.4e %12.4e\n", r.t, r.l1, r.linf, r.grad_l1, r.grad_linf);
  for (const auto& f : res.fits)
    std::printf("fit %-12s exponent %7.3f (target %.1f +- %.2f) %s\n", f.quantity.c_str(),
                f.fitted_exponent, f.target_exponent, f.tolerance, f.pass ? "ok" : "off");
  return 0;
}
