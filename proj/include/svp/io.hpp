#pragma once

// CSV/JSON emission and parsing. All numeric output is written in full
// round-trip precision ("%.17g"); files are written atomically (temp file
// in the target directory, then rename).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "svp/decay_fit.hpp"
#include "svp/dispersion.hpp"
#include "svp/nonlinear.hpp"
#include "svp/volterra.hpp"

namespace svp {

inline std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  if (!dir.empty() && !fs::exists(dir)) fs::create_directories(dir, ec);
  const fs::path tmp = dir / (path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for write: " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      fs::remove(tmp, ec);
      throw std::runtime_error("write failed: " + tmp.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("atomic rename failed for " + path.string());
  }
}

// ---------------------------------------------------------------------------
// mode series CSV: header t,xi,re,im; row-major by mode then time

inline std::string mode_series_to_csv(const ModeSeries& series) {
  std::string out = "t,xi,re,im\n";
  for (int m = 0; m < series.modes(); ++m)
    for (int k = 0; k < series.nodes(); ++k) {
      out += format_full(series.grid.node(k));
      out += ',';
      out += format_full(series.xi[m]);
      out += ',';
      out += format_full(series.at(m, k).real());
      out += ',';
      out += format_full(series.at(m, k).imag());
      out += '\n';
    }
  return out;
}

inline ModeSeries mode_series_from_csv(const std::string& text, SeriesKind kind) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,xi,re,im", 0) != 0)
    throw std::invalid_argument("mode series csv: missing t,xi,re,im header");
  std::vector<double> ts, xs, re, im;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double a, b, c, d;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &a, &b, &c, &d) != 4)
      throw std::invalid_argument("mode series csv: bad row '" + line + "'");
    ts.push_back(a);
    xs.push_back(b);
    re.push_back(c);
    im.push_back(d);
  }
  if (ts.empty()) throw std::invalid_argument("mode series csv: no rows");
  // infer the time grid from the first mode block
  std::size_t nt = 1;
  while (nt < xs.size() && xs[nt] == xs[0]) ++nt;
  if (ts.size() % nt != 0) throw std::invalid_argument("mode series csv: ragged blocks");
  const std::size_t nm = ts.size() / nt;
  TimeGrid grid(ts[nt - 1], static_cast<int>(nt - 1));
  std::vector<double> modes(nm);
  for (std::size_t m = 0; m < nm; ++m) modes[m] = xs[m * nt];
  ModeSeries out(grid, modes, kind);
  for (std::size_t m = 0; m < nm; ++m)
    for (std::size_t k = 0; k < nt; ++k)
      out.at(static_cast<int>(m), static_cast<int>(k)) = cplx(re[m * nt + k], im[m * nt + k]);
  return out;
}

// ---------------------------------------------------------------------------
// decay tables and reports

struct GNormRow {
  double t = 0, l1 = 0, linf = 0, grad_l1 = 0, grad_linf = 0;
};

inline std::string gnorm_rows_to_csv(const std::vector<GNormRow>& rows) {
  std::string out = "t,l1,linf,grad_l1,grad_linf\n";
  for (const auto& r : rows) {
    out += format_full(r.t) + "," + format_full(r.l1) + "," + format_full(r.linf) + "," +
           format_full(r.grad_l1) + "," + format_full(r.grad_linf) + "\n";
  }
  return out;
}

inline nlohmann::json decay_report_to_json(const DecayReport& r) {
  return {{"quantity", r.quantity},
          {"t_lo", r.t_lo},
          {"t_hi", r.t_hi},
          {"points", r.points},
          {"fitted_exponent", r.fitted_exponent},
          {"target_exponent", r.target_exponent},
          {"tolerance", r.tolerance},
          {"log_correction", r.log_correction},
          {"log_correction_improves", r.log_correction_improves},
          {"residual", r.residual},
          {"residual_plain", r.residual_plain},
          {"residual_logcorr", r.residual_logcorr},
          {"pass", r.pass}};
}

inline nlohmann::json penrose_scan_to_json(const PenroseScan& scan) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& t : scan.trace) trace.push_back({{"level", t.level}, {"margin", t.margin}});
  return {{"margin", scan.margin},
          {"argmin",
           {{"gamma", scan.argmin.gamma},
            {"tau", scan.argmin.tau},
            {"xi", scan.argmin.xi.empty() ? 0.0 : scan.argmin.xi[0]}}},
          {"near_root", scan.near_root},
          {"tail_certificate",
           {{"xi_threshold", scan.tail.xi_threshold},
            {"gamma_threshold", scan.tail.gamma_threshold},
            {"tau_threshold", scan.tail.tau_threshold},
            {"covered", scan.tail.covered}}},
          {"grid_trace", trace}};
}

inline nlohmann::json monitor_to_json(const BootstrapMonitor& mon,
                                      const std::vector<double>& picard_residuals) {
  return {{"epsilon", mon.epsilon},
          {"N_of_t", mon.n_of_t},
          {"times", mon.times},
          {"breach_time", mon.breach_time},
          {"breached", mon.breached},
          {"picard_residuals", picard_residuals}};
}

// ---------------------------------------------------------------------------
// density histories and flow maps

inline std::string density_history_to_csv(const DensityHistory1D& rho) {
  std::string out = "t,x,value\n";
  for (int it = 0; it < rho.nodes(); ++it)
    for (int ix = 0; ix < rho.xgrid.n; ++ix)
      out += format_full(it * rho.dt) + "," + format_full(rho.xgrid.x(ix)) + "," +
             format_full(rho.values[static_cast<std::size_t>(it) * rho.xgrid.n + ix]) + "\n";
  return out;
}

inline std::string field_history_to_csv(const PeriodicFieldHistory1D& f) {
  std::string out = "t,x,e\n";
  for (int it = 0; it < f.time_nodes(); ++it)
    for (int ix = 0; ix < f.xgrid.n; ++ix)
      out += format_full(it * f.dt) + "," + format_full(f.xgrid.x(ix)) + "," +
             format_full(f.values[static_cast<std::size_t>(it) * f.xgrid.n + ix]) + "\n";
  return out;
}

inline PeriodicFieldHistory1D field_history_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,x,e", 0) != 0)
    throw std::invalid_argument("field history csv: missing t,x,e header");
  std::vector<double> ts, xs, es;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double a, b, c;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &a, &b, &c) != 3)
      throw std::invalid_argument("field history csv: bad row '" + line + "'");
    ts.push_back(a);
    xs.push_back(b);
    es.push_back(c);
  }
  std::size_t nx = 1;
  while (nx < ts.size() && ts[nx] == ts[0]) ++nx;
  if (nx < 4 || ts.size() % nx != 0)
    throw std::invalid_argument("field history csv: ragged time blocks");
  const std::size_t nt = ts.size() / nx;
  if (nt < 2) throw std::invalid_argument("field history csv: need >= 2 time nodes");
  PeriodicFieldHistory1D out;
  const double L = (xs[nx - 1] - xs[0]) * nx / (nx - 1.0);
  out.xgrid = PeriodicGrid1D(L, static_cast<int>(nx));
  out.dt = ts[nx] - ts[0];
  out.values = std::move(es);
  return out;
}

template <std::size_t D>
std::string flowmap_to_csv(const FlowMapT<D>& map) {
  std::string out;
  auto col = [&](const char* base, std::size_t c) {
    std::string s(base);
    if constexpr (D > 1) s += std::to_string(c + 1);
    return s;
  };
  for (std::size_t c = 0; c < D; ++c) out += col("x", c) + ",";
  for (std::size_t c = 0; c < D; ++c) out += col("v", c) + ",";
  for (std::size_t c = 0; c < D; ++c) out += col("Yx", c) + ",";
  for (std::size_t c = 0; c < D; ++c) out += col("Wv", c) + ",";
  out += "detPsi\n";
  for (std::size_t i = 0; i < map.z.size(); ++i) {
    for (std::size_t c = 0; c < D; ++c) out += format_full(map.z[i][c]) + ",";
    for (std::size_t c = 0; c < D; ++c) out += format_full(map.v[i][c]) + ",";
    for (std::size_t c = 0; c < D; ++c) out += format_full(map.Y[i][c]) + ",";
    for (std::size_t c = 0; c < D; ++c) out += format_full(map.W[i][c]) + ",";
    out += (i < map.det_psi.size() ? format_full(map.det_psi[i]) : std::string("nan"));
    out += "\n";
  }
  return out;
}

inline std::string read_text_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace svp
