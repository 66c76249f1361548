#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace fidsus {

struct SizeSample {
  double size = 0.0;  // linear size L, or N for collective models
  double chi = 0.0;
};

/// Finite-size samples of chi_F at fixed couplings.
struct SizeSweep {
  std::vector<SizeSample> samples;
  int system_dim = 1;
  std::string metadata;

  /// Sizes strictly increasing, chi > 0, at least `min_samples` entries.
  void validate(std::size_t min_samples = 4) const;
};

struct PowerLawFit {
  double exponent = 0.0;
  double amplitude = 0.0;
  double r2 = 0.0;
};

/// ln chi = ln a + p ln L by OLS, or by Theil-Sen when `robust`.
PowerLawFit fit_power_law(const SizeSweep& sweep, bool robust = false);

/// Model-selection thresholds for the ln L factor.
struct QadConfig {
  double ssr_margin = 0.2;  // relative SSR improvement a model must win by
  double curvature_t = 3.0; // |t| of the quadratic term that counts as systematic curvature
};

/// Both candidate fits, before any decision.
struct QadModels {
  double power_exponent = 0.0, power_amplitude = 0.0, power_r2 = 0.0, power_ssr = 0.0;
  double log_exponent = 0.0, log_amplitude = 0.0, log_r2 = 0.0, log_ssr = 0.0;
  double curvature = 0.0;    // quadratic coefficient of ln chi in ln L
  double curvature_t = 0.0;  // curvature / standard error (+-inf for exact data)
};

/// Fits chi = a L^p and chi = a L^p ln L on the same sweep.
QadModels compare_qad_models(const SizeSweep& sweep);

/// Quantum-adiabatic dimension of a size sweep.
struct QadResult {
  double exponent = 0.0;  // d_a, unrounded
  bool has_log_factor = false;
  double amplitude = 0.0;
  double fit_r2 = 0.0;
  double residual_curvature = 0.0;
};

/// Picks chi = a L^p ln L only when it cuts the SSR by the margin and the
/// pure power law leaves significant negative curvature; picks the pure power
/// when it wins by the margin or no curvature is visible. Otherwise throws
/// Ambiguous. Needs >= 6 samples spanning at least one decade in size.
QadResult classify_qad(const SizeSweep& sweep, const QadConfig& config = {});

/// Report form: exponent rounded to the nearest 0.5, with "+ln" for a log factor.
std::string format_qad(const QadResult& qad);

/// Per-bin minimum of chi / L^system_dim over `bins` equal-width bins in ln L.
/// Suppresses one-sided upward fluctuations in dense sweeps.
SizeSweep log_binned_minimum(const SizeSweep& sweep, std::size_t bins);

enum class Side { Above, Below };

struct ParamSample {
  double lambda = 0.0;
  double chi_scaled = 0.0;  // chi_F / L^{d_a}
};

struct ParamSweep {
  std::vector<ParamSample> samples;
  double lambda_c = 0.0;
  Side side = Side::Above;

  /// All lambda strictly on `side` of lambda_c, chi_scaled > 0, >= 3 samples.
  void validate() const;
};

struct ExponentFit {
  double alpha = 0.0;
  double r2 = 0.0;
};

/// OLS of ln chi_scaled on ln |lambda - lambda_c|; alpha = -slope.
ExponentFit fit_critical_exponent(const ParamSweep& sweep);

struct LogDivergenceFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// OLS of chi_scaled on ln |lambda - lambda_c|.
LogDivergenceFit fit_log_divergence(const ParamSweep& sweep);

/// alpha = (mu - d_a) / nu. Throws InvalidNu for nu == 0.
double check_scaling_relation(double mu, double nu, double d_a);

struct SingularityCheck {
  bool singular = false;      // mu >= d_a
  bool log_possible = false;  // mu == d_a: only a logarithmic divergence can remain
};

SingularityCheck singularity_condition(double mu, double d_a);

/// One row of critical exponents with its scaling-relation residuals.
struct ExponentSet {
  double mu = 0.0;
  double nu = 1.0;
  QadResult d_a_plus;
  QadResult d_a_minus;
  double alpha_plus = 0.0;
  double alpha_minus = 0.0;
  std::optional<double> zeta;
  std::optional<double> delta_v;

  /// alpha -/+ (mu - d_a -/+) / nu
  double residual_plus() const;
  double residual_minus() const;
};

/// Range of |lambda - lambda_c| trusted as thermodynamic at a given size:
/// [scale * size^(-nu), upper]. Below the lower edge finite-size rounding dominates.
struct ValidityWindow {
  double lower = 0.0;
  double upper = 0.0;
};

ValidityWindow critical_window(double size, double nu, double scale, double upper);

/// n log-spaced points in [lo, hi].
std::vector<double> geometric_grid(double lo, double hi, std::size_t n);

}  // namespace fidsus
