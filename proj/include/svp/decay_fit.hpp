#pragma once

// Power-law fits on (t, value) series: least squares of log(value) against
// log(t), with an optional log(2+t) pre-division for rates that carry a
// logarithmic correction.

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace svp {

struct DecayReport {
  std::string quantity;
  double t_lo = 0.0, t_hi = 0.0;
  double fitted_exponent = 0.0;
  double target_exponent = 0.0;
  double tolerance = 0.0;
  bool log_correction = false;        // was the fit done on value / log(2+t)?
  bool log_correction_improves = false;  // did dividing by log(2+t) lower the residual?
  double residual = 0.0;              // rms residual of the reported fit
  double residual_plain = 0.0;
  double residual_logcorr = 0.0;
  int points = 0;
  bool pass = false;
};

namespace detail {

struct LineFit {
  double slope = 0.0, intercept = 0.0, rms = 0.0;
};

inline LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LineFit f;
  const double det = n * sxx - sx * sx;
  f.slope = (n * sxy - sx * sy) / det;
  f.intercept = (sy - f.slope * sx) / n;
  double acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (f.slope * x[i] + f.intercept);
    acc += e * e;
  }
  f.rms = std::sqrt(acc / n);
  return f;
}

}  // namespace detail

inline DecayReport fit_decay(std::span<const double> times, std::span<const double> values,
                             double target_exponent, double tolerance, bool log_correction,
                             std::string quantity = {}) {
  if (times.size() != values.size()) throw std::invalid_argument("fit_decay: size mismatch");
  if (times.size() < 8) throw std::invalid_argument("fit_decay: need at least 8 samples");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 1.0)) throw std::invalid_argument("fit_decay: times must be >= 1");
    if (!(values[i] > 0.0)) throw std::invalid_argument("fit_decay: values must be positive");
  }

  std::vector<double> x(times.size()), y_plain(times.size()), y_log(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    x[i] = std::log(times[i]);
    y_plain[i] = std::log(values[i]);
    y_log[i] = std::log(values[i] / std::log(2.0 + times[i]));
  }
  const auto plain = detail::least_squares(x, y_plain);
  const auto logc = detail::least_squares(x, y_log);

  DecayReport rep;
  rep.quantity = std::move(quantity);
  rep.t_lo = times.front();
  rep.t_hi = times.back();
  rep.points = static_cast<int>(times.size());
  rep.target_exponent = target_exponent;
  rep.tolerance = tolerance;
  rep.log_correction = log_correction;
  rep.residual_plain = plain.rms;
  rep.residual_logcorr = logc.rms;
  rep.log_correction_improves = logc.rms <= plain.rms;
  rep.fitted_exponent = log_correction ? logc.slope : plain.slope;
  rep.residual = log_correction ? logc.rms : plain.rms;
  rep.pass = std::abs(rep.fitted_exponent - target_exponent) <= tolerance;
  return rep;
}

}  // namespace svp
