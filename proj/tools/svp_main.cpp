// svp: desk-scale studies of Landau damping for the screened system.
// Subcommands: penrose, kernel-decay, linear-evolve, nonlinear-evolve,
// characteristics, accept. Exit codes: 0 ok, 2 acceptance failure,
// 3 numeric accuracy failure, 4 configuration error.

#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "svp/acceptance.hpp"
#include "svp/characteristics.hpp"
#include "svp/config.hpp"
#include "svp/experiments.hpp"
#include "svp/io.hpp"

namespace fs = std::filesystem;

namespace {

struct GlobalArgs {
  std::string config_path;
  std::string out_dir = ".";
  int threads = 0;
  long seed = 12345;
};

svp::RunConfig load_config(const GlobalArgs& g, const std::string& subcommand) {
  svp::RunConfig cfg;
  if (!g.config_path.empty()) {
    cfg = svp::parse_config(svp::read_text_file(g.config_path));
    // "penrose" is the default; any other explicit experiment must agree
    if (cfg.experiment != subcommand && cfg.experiment != "penrose")
      throw svp::config_error("config experiment '" + cfg.experiment +
                              "' does not match subcommand '" + subcommand + "'");
  }
  cfg.experiment = subcommand;
  if (g.threads > 0) cfg.threads = g.threads;
  cfg.seed = g.seed;
  svp::validate_config(cfg);
  if (cfg.threads > 0) svp::par::set_max_threads(cfg.threads);
  return cfg;
}

void write_outputs(const svp::ExperimentSummary& sum, const svp::RunConfig& cfg,
                   const GlobalArgs& g,
                   const std::vector<std::pair<std::string, std::string>>& renames = {}) {
  svp::ExperimentSummary renamed = sum;
  for (auto& [name, content] : renamed.outputs)
    for (const auto& [from, to] : renames)
      if (name == from && !to.empty()) name = to;
  svp::write_experiment_outputs(renamed, cfg, g.out_dir);
}

int dispatch(int argc, char** argv) {
  CLI::App app{"screened Vlasov-Poisson Landau damping toolkit"};
  app.require_subcommand(1);
  GlobalArgs g;
  app.add_option("--config", g.config_path, "run configuration file (key=value)");
  app.add_option("--out-dir", g.out_dir, "output directory");
  app.add_option("--threads", g.threads, "worker thread cap (0 = hardware)");
  app.add_option("--seed", g.seed, "seed for randomized suites");

  // penrose
  auto* pen = app.add_subcommand("penrose", "scan the stability margin inf |1 - K~|");
  double gamma_max = -1, tau_max = -1, xi_max = -1;
  int grid_n = 0, refine = -1;
  std::string pen_out = "report.json";
  pen->add_option("--gamma-max", gamma_max, "Laplace abscissa range");
  pen->add_option("--tau-max", tau_max, "time-frequency range");
  pen->add_option("--xi-max", xi_max, "space-frequency range");
  pen->add_option("--grid", grid_n, "scan points per axis");
  pen->add_option("--refine", refine, "refinement passes around the argmin");
  pen->add_option("--out", pen_out, "JSON report path");

  // kernel-decay
  auto* kd = app.add_subcommand("kernel-decay", "resolvent kernel norms and decay fits");
  std::string kd_tlist, kd_window, kd_out = "decay.csv", kd_report = "decay.json";
  kd->add_option("--t-list", kd_tlist, "comma-separated evaluation times");
  kd->add_option("--fit-window", kd_window, "fit window t_lo:t_hi");
  kd->add_option("--out", kd_out, "norms CSV path");
  kd->add_option("--report", kd_report, "fit report JSON path");

  // linear-evolve
  auto* le = app.add_subcommand("linear-evolve", "linearized density evolution and rate fits");
  std::string le_out = "rho_modes.csv", le_report = "linear.json", le_window;
  le->add_option("--out", le_out, "mode series CSV path");
  le->add_option("--report", le_report, "fit report JSON path");
  le->add_option("--fit-window", le_window, "fit window t_lo:t_hi");

  // nonlinear-evolve
  auto* nl = app.add_subcommand("nonlinear-evolve", "picard loop on the periodic box (d = 1)");
  int nl_max_picard = -1;
  double nl_tol = -1;
  std::string nl_density = "density.csv", nl_monitor = "monitor.json";
  nl->add_option("--max-picard", nl_max_picard, "iteration cap");
  nl->add_option("--picard-tol", nl_tol, "residual tolerance");
  nl->add_option("--out-density", nl_density, "density history CSV path");
  nl->add_option("--out-monitor", nl_monitor, "bootstrap monitor JSON path");

  // characteristics
  auto* ch = app.add_subcommand("characteristics", "flow maps through a stored field history");
  std::string ch_field, ch_grid = "16:16", ch_out = "flowmap.csv";
  double ch_s = 0.0, ch_t = 10.0, ch_vmax = 4.0;
  ch->add_option("--field-history", ch_field, "field history CSV (t,x,e)")->required();
  ch->add_option("--s", ch_s, "start time of the flow map");
  ch->add_option("--t", ch_t, "end time of the flow map");
  ch->add_option("--grid", ch_grid, "phase grid nx:nv");
  ch->add_option("--vmax", ch_vmax, "velocity half-width of the grid");
  ch->add_option("--out", ch_out, "flow map CSV path");

  // accept
  auto* acc = app.add_subcommand("accept", "run the acceptance suite");
  std::string acc_out;
  acc->add_option("--out", acc_out, "optional JSON results path");

  CLI11_PARSE(app, argc, argv);

  if (pen->parsed()) {
    auto cfg = load_config(g, "penrose");
    if (gamma_max > 0) cfg.penrose_gamma_max = gamma_max;
    if (tau_max > 0) cfg.penrose_tau_max = tau_max;
    if (xi_max > 0) cfg.penrose_xi_max = xi_max;
    if (grid_n > 0) cfg.penrose_grid = grid_n;
    if (refine >= 0) cfg.penrose_refine = refine;
    auto sum = svp::run_experiment(cfg);
    write_outputs(sum, cfg, g, {{"report.json", pen_out}});
    std::printf("penrose margin %.12g (%.2f s)\n", sum.metrics["margin"].get<double>(),
                sum.wall_seconds);
    return 0;
  }
  if (kd->parsed()) {
    auto cfg = load_config(g, "kernel-decay");
    if (!kd_window.empty()) {
      if (std::sscanf(kd_window.c_str(), "%lf:%lf", &cfg.fit_t_lo, &cfg.fit_t_hi) != 2)
        throw svp::config_error("--fit-window expects t_lo:t_hi");
    }
    auto sum = svp::run_experiment(cfg);
    write_outputs(sum, cfg, g, {{"decay.csv", kd_out}, {"decay.json", kd_report}});
    std::printf("kernel-decay %s (%.2f s)\n", sum.pass ? "fits pass" : "FITS FAIL",
                sum.wall_seconds);
    return sum.pass ? 0 : 2;
  }
  if (le->parsed()) {
    auto cfg = load_config(g, "linear-evolve");
    if (!le_window.empty()) {
      if (std::sscanf(le_window.c_str(), "%lf:%lf", &cfg.fit_t_lo, &cfg.fit_t_hi) != 2)
        throw svp::config_error("--fit-window expects t_lo:t_hi");
    }
    cfg.t_max = std::max(cfg.t_max, cfg.fit_t_hi);
    auto sum = svp::run_experiment(cfg);
    write_outputs(sum, cfg, g, {{"rho_modes.csv", le_out}, {"linear.json", le_report}});
    std::printf("linear-evolve %s (%.2f s)\n", sum.pass ? "fits pass" : "FITS FAIL",
                sum.wall_seconds);
    return sum.pass ? 0 : 2;
  }
  if (nl->parsed()) {
    auto cfg = load_config(g, "nonlinear-evolve");
    cfg.dimension = 1;
    if (nl_max_picard > 0) cfg.max_picard = nl_max_picard;
    if (nl_tol > 0) cfg.picard_tol = nl_tol;
    auto sum = svp::run_experiment(cfg);
    write_outputs(sum, cfg, g,
                  {{"density.csv", nl_density}, {"monitor.json", nl_monitor}});
    std::printf("nonlinear-evolve %s after %d iterations (%.2f s)\n",
                sum.pass ? "converged" : "DID NOT CONVERGE",
                sum.metrics["iterations"].get<int>(), sum.wall_seconds);
    return sum.pass ? 0 : 2;
  }
  if (ch->parsed()) {
    auto cfg = load_config(g, "characteristics");
    auto field = svp::field_history_from_csv(svp::read_text_file(ch_field));
    if (!(ch_s >= 0 && ch_s <= ch_t && ch_t <= field.horizon() + 1e-9))
      throw svp::config_error("characteristics: need 0 <= s <= t <= field horizon");
    int nz = 0, nv = 0;
    if (std::sscanf(ch_grid.c_str(), "%d:%d", &nz, &nv) != 2 || nz < 2 || nv < 2)
      throw svp::config_error("--grid expects nx:nv");
    std::vector<svp::Vec<1>> zs, vs;
    for (int i = 0; i < nz; ++i)
      for (int j = 0; j < nv; ++j) {
        zs.push_back({field.xgrid.x(0) + field.xgrid.L * i / nz});
        vs.push_back({-ch_vmax + 2.0 * ch_vmax * j / (nv - 1)});
      }
    auto map = svp::flow<1>(field, ch_s, ch_t, zs, vs, {std::min(0.05, cfg.char_dt)});
    // straighten at the same points to fill the jacobian column
    std::vector<svp::Vec<1>> xs(zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) xs[i][0] = zs[i][0] + vs[i][0] * ch_t;
    auto st = svp::straighten<1>(field, ch_s, ch_t, xs, vs, {std::min(0.05, cfg.char_dt), 1e-10, 60});
    map.det_psi.resize(zs.size());
    const double h = 1e-4;
    for (std::size_t i = 0; i < zs.size(); ++i) {
      std::vector<svp::Vec<1>> xp{xs[i]}, vp{{vs[i][0] + h}}, vm{{vs[i][0] - h}};
      auto rp = svp::straighten<1>(field, ch_s, ch_t, xp, vp, {0.05, 1e-10, 60});
      auto rm = svp::straighten<1>(field, ch_s, ch_t, xp, vm, {0.05, 1e-10, 60});
      map.det_psi[i] = (rp.psi[0][0] - rm.psi[0][0]) / (2 * h);
    }
    (void)st;
    svp::atomic_write_text(fs::path(g.out_dir) / ch_out, svp::flowmap_to_csv<1>(map));
    svp::atomic_write_text(fs::path(g.out_dir) / "effective_config.txt", svp::emit_config(cfg));
    std::printf("characteristics: %zu phase points written\n", zs.size());
    return 0;
  }
  if (acc->parsed()) {
    auto cfg = load_config(g, "accept");
    auto results = svp::run_acceptance(static_cast<unsigned>(cfg.seed));
    bool all = true;
    nlohmann::json jout = nlohmann::json::array();
    for (const auto& r : results) {
      std::printf("[%s] %2d %s (%.1f s)\n    %s\n", r.pass ? "PASS" : "FAIL", r.id,
                  r.name.c_str(), r.seconds, r.details.c_str());
      all = all && r.pass;
      jout.push_back({{"id", r.id},
                      {"name", r.name},
                      {"pass", r.pass},
                      {"seconds", r.seconds},
                      {"details", r.details}});
    }
    if (!acc_out.empty())
      svp::atomic_write_text(fs::path(g.out_dir) / acc_out, jout.dump(2) + "\n");
    std::printf("%s\n", all ? "acceptance: all criteria passed" : "acceptance: FAILURES present");
    return all ? 0 : 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const svp::accuracy_error& e) {
    std::fprintf(stderr, "accuracy failure: %s\n", e.what());
    return 3;
  } catch (const svp::config_error& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 4;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
}
