#include "fidsus/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fidsus/error.hpp"
#include "fidsus/regression.hpp"

namespace fidsus {

namespace {

struct LogData {
  std::vector<double> x;  // ln L
  std::vector<double> y;  // ln chi
};

LogData log_data(const SizeSweep& sweep) {
  LogData d;
  for (const auto& s : sweep.samples) {
    d.x.push_back(std::log(s.size));
    d.y.push_back(std::log(s.chi));
  }
  return d;
}

std::vector<double> distances(const ParamSweep& sweep) {
  std::vector<double> x;
  for (const auto& s : sweep.samples) x.push_back(std::log(std::abs(s.lambda - sweep.lambda_c)));
  return x;
}

}  // namespace

void SizeSweep::validate(std::size_t min_samples) const {
  if (samples.size() < min_samples) {
    throw Error(ErrorKind::InvalidParams, "size sweep needs at least " + std::to_string(min_samples) + " samples");
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].size > 0.0)) throw Error(ErrorKind::InvalidParams, "sizes must be positive");
    if (!(samples[i].chi > 0.0) || !std::isfinite(samples[i].chi)) {
      throw Error(ErrorKind::InvalidParams, "chi must be positive and finite");
    }
    if (i > 0 && !(samples[i].size > samples[i - 1].size)) {
      throw Error(ErrorKind::InvalidParams, "sizes must be strictly increasing");
    }
  }
}

PowerLawFit fit_power_law(const SizeSweep& sweep, bool robust) {
  sweep.validate();
  const LogData d = log_data(sweep);
  const LinearFit f = robust ? theil_sen(d.x, d.y) : ols(d.x, d.y);
  return {f.slope, std::exp(f.intercept), f.r2};
}

QadModels compare_qad_models(const SizeSweep& sweep) {
  sweep.validate();
  const LogData d = log_data(sweep);
  for (double v : d.x) {
    if (!(v > 0.0)) throw Error(ErrorKind::InvalidParams, "ln L factor needs sizes > 1");
  }
  std::vector<double> y_log(d.y.size());
  for (std::size_t i = 0; i < d.y.size(); ++i) y_log[i] = d.y[i] - std::log(d.x[i]);

  const LinearFit power = ols(d.x, d.y);
  const LinearFit logf = ols(d.x, y_log);
  QadModels m;
  m.power_exponent = power.slope;
  m.power_amplitude = std::exp(power.intercept);
  m.power_r2 = power.r2;
  m.power_ssr = power.ssr;
  m.log_exponent = logf.slope;
  m.log_amplitude = std::exp(logf.intercept);
  m.log_r2 = logf.r2;
  m.log_ssr = logf.ssr;

  if (d.x.size() >= 4) {
    const QuadraticFit q = quadratic_fit(d.x, d.y);
    m.curvature = q.c2;
    if (q.c2_stderr > 0.0) {
      m.curvature_t = q.c2 / q.c2_stderr;
    } else if (q.c2 != 0.0) {
      m.curvature_t = std::copysign(std::numeric_limits<double>::infinity(), q.c2);
    }
  }
  return m;
}

QadResult classify_qad(const SizeSweep& sweep, const QadConfig& config) {
  sweep.validate(6);
  if (sweep.samples.back().size < 10.0 * sweep.samples.front().size) {
    throw Error(ErrorKind::InvalidParams, "QAD classification needs sizes spanning at least one decade");
  }
  const QadModels m = compare_qad_models(sweep);
  const double keep = 1.0 - config.ssr_margin;
  // Exact power laws leave only rounding in the residuals.
  const double rounding_floor = 1e-24 * static_cast<double>(sweep.samples.size());

  const bool curved = m.curvature_t < -config.curvature_t;
  const bool flat = std::abs(m.curvature_t) < config.curvature_t;
  const bool log_wins = m.log_ssr <= keep * m.power_ssr;
  const bool power_wins = m.power_ssr <= keep * m.log_ssr;

  QadResult r;
  r.residual_curvature = m.curvature;
  if (m.power_ssr > rounding_floor && log_wins && curved) {
    r.exponent = m.log_exponent;
    r.has_log_factor = true;
    r.amplitude = m.log_amplitude;
    r.fit_r2 = m.log_r2;
    return r;
  }
  if (m.power_ssr <= rounding_floor || power_wins || flat) {
    r.exponent = m.power_exponent;
    r.amplitude = m.power_amplitude;
    r.fit_r2 = m.power_r2;
    return r;
  }
  std::ostringstream msg;
  msg << "neither L^p nor L^p ln L wins (ssr_power=" << m.power_ssr << ", ssr_log=" << m.log_ssr
      << ", curvature_t=" << m.curvature_t << ")";
  throw Error(ErrorKind::Ambiguous, msg.str());
}

std::string format_qad(const QadResult& qad) {
  const double rounded = std::round(2.0 * qad.exponent) / 2.0;
  std::ostringstream out;
  out << (rounded == 0.0 ? 0.0 : rounded);
  if (qad.has_log_factor) out << "+ln";
  return out.str();
}

SizeSweep log_binned_minimum(const SizeSweep& sweep, std::size_t bins) {
  sweep.validate(1);
  if (bins == 0) throw Error(ErrorKind::InvalidParams, "need at least one bin");
  const double lo = std::log(sweep.samples.front().size);
  const double hi = std::log(sweep.samples.back().size);
  const double width = (hi - lo) / static_cast<double>(bins);
  SizeSweep out;
  out.system_dim = sweep.system_dim;
  out.metadata = sweep.metadata;
  std::size_t i = 0;
  for (std::size_t b = 0; b < bins && i < sweep.samples.size(); ++b) {
    const double edge = b + 1 == bins ? INFINITY : lo + width * static_cast<double>(b + 1);
    const SizeSample* best = nullptr;
    double best_scaled = INFINITY;
    for (; i < sweep.samples.size() && std::log(sweep.samples[i].size) < edge; ++i) {
      const auto& s = sweep.samples[i];
      const double scaled = s.chi / std::pow(s.size, sweep.system_dim);
      if (scaled < best_scaled) {
        best_scaled = scaled;
        best = &s;
      }
    }
    if (best != nullptr) out.samples.push_back(*best);
  }
  return out;
}

void ParamSweep::validate() const {
  if (samples.size() < 3) throw Error(ErrorKind::InvalidParams, "parameter sweep needs at least 3 samples");
  for (const auto& s : samples) {
    const double offset = s.lambda - lambda_c;
    if ((side == Side::Above && !(offset > 0.0)) || (side == Side::Below && !(offset < 0.0))) {
      throw Error(ErrorKind::InvalidParams, "sample lambda lies on the wrong side of lambda_c");
    }
    if (!std::isfinite(s.chi_scaled)) throw Error(ErrorKind::InvalidParams, "chi_scaled must be finite");
  }
}

ExponentFit fit_critical_exponent(const ParamSweep& sweep) {
  sweep.validate();
  const std::vector<double> x = distances(sweep);
  std::vector<double> y;
  for (const auto& s : sweep.samples) {
    if (!(s.chi_scaled > 0.0)) throw Error(ErrorKind::InvalidParams, "chi_scaled must be positive");
    y.push_back(std::log(s.chi_scaled));
  }
  const LinearFit f = ols(x, y);
  return {-f.slope, f.r2};
}

LogDivergenceFit fit_log_divergence(const ParamSweep& sweep) {
  sweep.validate();
  const std::vector<double> x = distances(sweep);
  std::vector<double> y;
  for (const auto& s : sweep.samples) y.push_back(s.chi_scaled);
  const LinearFit f = ols(x, y);
  return {f.slope, f.intercept, f.r2};
}

double check_scaling_relation(double mu, double nu, double d_a) {
  if (nu == 0.0 || !std::isfinite(nu)) throw Error(ErrorKind::InvalidNu, "correlation-length exponent must be nonzero");
  return (mu - d_a) / nu;
}

SingularityCheck singularity_condition(double mu, double d_a) {
  constexpr double kEqualTol = 1e-12;
  SingularityCheck c;
  c.log_possible = std::abs(mu - d_a) <= kEqualTol;
  c.singular = mu > d_a || c.log_possible;
  return c;
}

double ExponentSet::residual_plus() const {
  return alpha_plus - check_scaling_relation(mu, nu, d_a_plus.exponent);
}

double ExponentSet::residual_minus() const {
  return alpha_minus - check_scaling_relation(mu, nu, d_a_minus.exponent);
}

ValidityWindow critical_window(double size, double nu, double scale, double upper) {
  if (!(size > 0.0) || !(scale > 0.0) || !(upper > 0.0)) {
    throw Error(ErrorKind::InvalidParams, "window needs positive size, scale and upper edge");
  }
  ValidityWindow w{scale * std::pow(size, -nu), upper};
  if (!(w.lower < w.upper)) throw Error(ErrorKind::InvalidParams, "validity window is empty at this size");
  return w;
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
  if (n == 0 || !(lo > 0.0) || !(hi >= lo)) throw Error(ErrorKind::InvalidParams, "bad geometric grid");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    g[i] = lo * std::pow(hi / lo, t);
  }
  g.back() = hi;
  return g;
}

}  // namespace fidsus
