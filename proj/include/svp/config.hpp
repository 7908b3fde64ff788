#pragma once

// Flat key=value run configuration with dotted sections. Unknown keys and
// malformed values are rejected with the offending line; the effective
// (defaults-filled) configuration can be emitted and re-parsed losslessly.

#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "svp/equilibrium.hpp"

namespace svp {

class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string experiment = "penrose";
  long seed = 12345;
  int threads = 0;  // 0 = hardware default

  // equilibrium block
  std::string equilibrium_kind = "maxwellian";  // maxwellian | bi_maxwellian_bump | zero
  int dimension = 3;
  double theta = 1.0;
  double bump_u = 2.0, bump_alpha = 0.5, bump_theta1 = 0.2, bump_theta2 = 0.2;

  // initial data block
  std::string initial_kind = "gaussian";
  double sigma_x = 1.0, sigma_v = 1.0, amplitude = 1e-3;

  // domain block (periodic grid path)
  double domain_L = 20.0;
  int domain_nx = 64;
  int domain_nv = 512;
  double domain_vmax = 8.0;

  // solver block
  double t_max = 20.0;
  double dt = 0.025;
  int modes = 2048;
  double xi_min = 1e-3, xi_max = 64.0;
  int max_picard = 20;
  double picard_tol = 1e-8;
  double epsilon = 0.05;
  double char_dt = 0.1;
  int source_stride = 8;

  // penrose block
  double penrose_gamma_max = 50.0, penrose_tau_max = 50.0, penrose_xi_max = 20.0;
  int penrose_grid = 48;
  int penrose_refine = 2;

  // fit block
  double fit_t_lo = 10.0, fit_t_hi = 100.0;
  int fit_points = 16;

  EquilibriumProfile make_profile() const {
    if (equilibrium_kind == "maxwellian") return EquilibriumProfile::maxwellian(dimension, theta);
    if (equilibrium_kind == "zero") return EquilibriumProfile::zero(dimension);
    if (equilibrium_kind == "bi_maxwellian_bump")
      return EquilibriumProfile::bi_maxwellian_bump(dimension, bump_u, bump_alpha, bump_theta1,
                                                    bump_theta2);
    throw config_error("unknown equilibrium.kind '" + equilibrium_kind + "'");
  }
};

inline std::string emit_config(const RunConfig& c) {
  std::ostringstream out;
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << "experiment=" << c.experiment << "\n";
  out << "seed=" << c.seed << "\n";
  out << "threads=" << c.threads << "\n";
  out << "equilibrium.kind=" << c.equilibrium_kind << "\n";
  out << "equilibrium.dimension=" << c.dimension << "\n";
  out << "equilibrium.theta=" << num(c.theta) << "\n";
  out << "equilibrium.bump.u=" << num(c.bump_u) << "\n";
  out << "equilibrium.bump.alpha=" << num(c.bump_alpha) << "\n";
  out << "equilibrium.bump.theta1=" << num(c.bump_theta1) << "\n";
  out << "equilibrium.bump.theta2=" << num(c.bump_theta2) << "\n";
  out << "initial.kind=" << c.initial_kind << "\n";
  out << "initial.sigma_x=" << num(c.sigma_x) << "\n";
  out << "initial.sigma_v=" << num(c.sigma_v) << "\n";
  out << "initial.amplitude=" << num(c.amplitude) << "\n";
  out << "domain.L=" << num(c.domain_L) << "\n";
  out << "domain.nx=" << c.domain_nx << "\n";
  out << "domain.nv=" << c.domain_nv << "\n";
  out << "domain.vmax=" << num(c.domain_vmax) << "\n";
  out << "solver.t_max=" << num(c.t_max) << "\n";
  out << "solver.dt=" << num(c.dt) << "\n";
  out << "solver.modes=" << c.modes << "\n";
  out << "solver.xi_min=" << num(c.xi_min) << "\n";
  out << "solver.xi_max=" << num(c.xi_max) << "\n";
  out << "solver.max_picard=" << c.max_picard << "\n";
  out << "solver.picard_tol=" << num(c.picard_tol) << "\n";
  out << "solver.epsilon=" << num(c.epsilon) << "\n";
  out << "solver.char_dt=" << num(c.char_dt) << "\n";
  out << "solver.source_stride=" << c.source_stride << "\n";
  out << "penrose.gamma_max=" << num(c.penrose_gamma_max) << "\n";
  out << "penrose.tau_max=" << num(c.penrose_tau_max) << "\n";
  out << "penrose.xi_max=" << num(c.penrose_xi_max) << "\n";
  out << "penrose.grid=" << c.penrose_grid << "\n";
  out << "penrose.refine=" << c.penrose_refine << "\n";
  out << "fit.t_lo=" << num(c.fit_t_lo) << "\n";
  out << "fit.t_hi=" << num(c.fit_t_hi) << "\n";
  out << "fit.points=" << c.fit_points << "\n";
  return out.str();
}

inline void validate_config(const RunConfig& c) {
  static const std::set<std::string> experiments = {
      "penrose",          "kernel-decay", "linear-evolve",
      "nonlinear-evolve", "characteristics", "accept"};
  if (!experiments.count(c.experiment))
    throw config_error("unknown experiment '" + c.experiment + "'");
  if (c.dimension < 1) throw config_error("equilibrium.dimension must be >= 1");
  if (c.experiment == "nonlinear-evolve" && c.dimension > 2)
    throw config_error("nonlinear grid path supports d in {1,2}");
  if (c.initial_kind != "gaussian") throw config_error("initial.kind must be 'gaussian'");
  if (!(c.theta > 0)) throw config_error("equilibrium.theta must be > 0");
  if (!(c.t_max > 0) || !(c.dt > 0)) throw config_error("solver.t_max and solver.dt must be > 0");
  if (c.threads < 0) throw config_error("threads must be >= 0");
}

inline RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto as_double = [&](const std::string& v) {
    std::size_t pos = 0;
    double d;
    try {
      d = std::stod(v, &pos);
    } catch (...) {
      throw config_error("line " + std::to_string(lineno) + ": expected a number, got '" + v + "'");
    }
    if (pos != v.size())
      throw config_error("line " + std::to_string(lineno) + ": trailing junk in number '" + v + "'");
    return d;
  };
  auto as_int = [&](const std::string& v) {
    const double d = as_double(v);
    if (d != std::floor(d))
      throw config_error("line " + std::to_string(lineno) + ": expected an integer, got '" + v + "'");
    return static_cast<int>(d);
  };

  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto strip = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      const auto b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    line = strip(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("line " + std::to_string(lineno) + ": expected key=value, got '" + line + "'");
    const std::string key = strip(line.substr(0, eq));
    const std::string val = strip(line.substr(eq + 1));

    if (key == "experiment") c.experiment = val;
    else if (key == "seed") c.seed = static_cast<long>(as_double(val));
    else if (key == "threads") c.threads = as_int(val);
    else if (key == "equilibrium.kind") c.equilibrium_kind = val;
    else if (key == "equilibrium.dimension") c.dimension = as_int(val);
    else if (key == "equilibrium.theta") c.theta = as_double(val);
    else if (key == "equilibrium.bump.u") c.bump_u = as_double(val);
    else if (key == "equilibrium.bump.alpha") c.bump_alpha = as_double(val);
    else if (key == "equilibrium.bump.theta1") c.bump_theta1 = as_double(val);
    else if (key == "equilibrium.bump.theta2") c.bump_theta2 = as_double(val);
    else if (key == "initial.kind") c.initial_kind = val;
    else if (key == "initial.sigma_x") c.sigma_x = as_double(val);
    else if (key == "initial.sigma_v") c.sigma_v = as_double(val);
    else if (key == "initial.amplitude") c.amplitude = as_double(val);
    else if (key == "domain.L") c.domain_L = as_double(val);
    else if (key == "domain.nx") c.domain_nx = as_int(val);
    else if (key == "domain.nv") c.domain_nv = as_int(val);
    else if (key == "domain.vmax") c.domain_vmax = as_double(val);
    else if (key == "solver.t_max") c.t_max = as_double(val);
    else if (key == "solver.dt") c.dt = as_double(val);
    else if (key == "solver.modes") c.modes = as_int(val);
    else if (key == "solver.xi_min") c.xi_min = as_double(val);
    else if (key == "solver.xi_max") c.xi_max = as_double(val);
    else if (key == "solver.max_picard") c.max_picard = as_int(val);
    else if (key == "solver.picard_tol") c.picard_tol = as_double(val);
    else if (key == "solver.epsilon") c.epsilon = as_double(val);
    else if (key == "solver.char_dt") c.char_dt = as_double(val);
    else if (key == "solver.source_stride") c.source_stride = as_int(val);
    else if (key == "penrose.gamma_max") c.penrose_gamma_max = as_double(val);
    else if (key == "penrose.tau_max") c.penrose_tau_max = as_double(val);
    else if (key == "penrose.xi_max") c.penrose_xi_max = as_double(val);
    else if (key == "penrose.grid") c.penrose_grid = as_int(val);
    else if (key == "penrose.refine") c.penrose_refine = as_int(val);
    else if (key == "fit.t_lo") c.fit_t_lo = as_double(val);
    else if (key == "fit.t_hi") c.fit_t_hi = as_double(val);
    else if (key == "fit.points") c.fit_points = as_int(val);
    else
      throw config_error("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  validate_config(c);
  return c;
}

}  // namespace svp
