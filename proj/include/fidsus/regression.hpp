#pragma once

#include <span>
#include <vector>

namespace fidsus {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;   // 1 - SSR/SST, clamped to [0, 1]; 1 when SST = SSR = 0
  double ssr = 0.0;  // sum of squared residuals of this line
};

/// Ordinary least squares y = intercept + slope x. Throws DegenerateFit if
/// fewer than two points or all x coincide.
LinearFit ols(std::span<const double> x, std::span<const double> y);

/// Theil-Sen: slope = median of pairwise slopes, intercept = median(y - slope x).
LinearFit theil_sen(std::span<const double> x, std::span<const double> y);

/// y = c0 + c1 (x - center) + c2 (x - center)^2 with the standard error of c2.
struct QuadraticFit {
  double center = 0.0;
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
  double c2_stderr = 0.0;  // 0 for fewer than four points or an exact fit
  double ssr = 0.0;
};

QuadraticFit quadratic_fit(std::span<const double> x, std::span<const double> y);

double median(std::vector<double> values);

/// r^2 of an arbitrary line against (x, y).
double line_r2(std::span<const double> x, std::span<const double> y, double slope, double intercept);

}  // namespace fidsus
