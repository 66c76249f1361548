#pragma once

#include <functional>

namespace fidsus {

/// Adaptive Gauss-Kronrod settings. A result is accepted when its error
/// estimate is at most max(abs_tol, rel_tol * |value|). The panel with the
/// largest error is bisected first; max_depth caps bisections of any one
/// panel and max_panels the total.
struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-12;
  unsigned max_depth = 30;
  unsigned max_panels = 2000;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// One-dimensional adaptive quadrature on [a, b]. Throws QuadratureFailure
/// when the tolerance cannot be met within those limits.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureSpec& spec = {});

/// Iterated adaptive quadrature over [ax, bx] x [ay, by]. The reported error
/// adds the outer estimate to the worst inner estimate times the outer width.
QuadratureResult integrate_2d(const std::function<double(double, double)>& f, double ax, double bx,
                              double ay, double by, const QuadratureSpec& spec = {});

}  // namespace fidsus
