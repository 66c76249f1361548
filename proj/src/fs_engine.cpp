#include "fidsus/fs_engine.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fidsus/error.hpp"
#include "fidsus/summation.hpp"

namespace fidsus {

namespace {

struct Excitations {
  RealVector omega;    // E_n - E_0, n >= 1
  RealVector weight;   // |<n|H_I|0>|^2, n >= 1
  GroundState ground;
};

Excitations excitations(const ParametrizedHamiltonian& p, const SpectralDecomposition& d) {
  Excitations ex{RealVector(d.size() - 1), RealVector(d.size() - 1), ground_state(d)};
  const ComplexVector elements = ground_matrix_elements(d, p.h_i);
  for (Eigen::Index n = 1; n < d.size(); ++n) {
    ex.omega(n - 1) = d.eigenvalues(n) - d.eigenvalues(0);
    ex.weight(n - 1) = std::norm(elements(n));
  }
  return ex;
}

GroundState ground_at(const ParametrizedHamiltonian& p, double coupling) {
  return ground_state(decompose(p.assembled_at(coupling)));
}

// 1 - |<a|b>|^2 as the squared norm of b's component orthogonal to a.
double infidelity_squared(const ComplexVector& a, const ComplexVector& b) {
  const ComplexVector perp = b - a * a.dot(b);
  return perp.squaredNorm() / b.squaredNorm();
}

}  // namespace

std::string_view name(FsMethod method) noexcept {
  switch (method) {
    case FsMethod::Spectral: return "spectral";
    case FsMethod::Overlap: return "overlap";
    case FsMethod::CorrelatorIntegral: return "correlator";
    case FsMethod::ClosedForm: return "closed_form";
  }
  return "unknown";
}

FsEstimate fs_spectral(const ParametrizedHamiltonian& p) {
  return fs_spectral(p, decompose(p.assembled()));
}

FsEstimate fs_spectral(const ParametrizedHamiltonian& p, const SpectralDecomposition& d) {
  const Excitations ex = excitations(p, d);
  CompensatedSum chi;
  for (Eigen::Index n = 0; n < ex.omega.size(); ++n) {
    chi.add(ex.weight(n) / (ex.omega(n) * ex.omega(n)));
  }
  return {chi.value(), FsMethod::Spectral, std::nullopt, std::nullopt};
}

double fidelity_overlap(const ParametrizedHamiltonian& p, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorKind::InvalidParams, "delta must be positive");
  const GroundState a = ground_at(p, p.lambda);
  const GroundState b = ground_at(p, p.lambda + delta);
  return std::min(1.0, std::abs(a.state.dot(b.state)));
}

double overlap_fs_at(const ParametrizedHamiltonian& p, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorKind::InvalidParams, "delta must be positive");
  const GroundState a = ground_at(p, p.lambda - 0.5 * delta);
  const GroundState b = ground_at(p, p.lambda + 0.5 * delta);
  const double s = infidelity_squared(a.state, b.state);
  // -2 ln F = -ln F^2 = -log1p(-(1 - F^2))
  return -std::log1p(-s) / (delta * delta);
}

FsEstimate fs_overlap(const ParametrizedHamiltonian& p, const std::vector<double>& delta_schedule) {
  if (delta_schedule.size() < 2) {
    throw Error(ErrorKind::InvalidParams, "overlap schedule needs at least two steps");
  }
  for (std::size_t i = 0; i < delta_schedule.size(); ++i) {
    if (!(delta_schedule[i] > 0.0) || (i > 0 && !(delta_schedule[i] < delta_schedule[i - 1]))) {
      throw Error(ErrorKind::InvalidParams, "overlap schedule must be positive and strictly decreasing");
    }
  }

  std::vector<double> raw;
  raw.reserve(delta_schedule.size());
  for (double delta : delta_schedule) raw.push_back(overlap_fs_at(p, delta));

  for (std::size_t i = 2; i < raw.size(); ++i) {
    const double prev = std::abs(raw[i - 1] - raw[i - 2]);
    const double cur = std::abs(raw[i] - raw[i - 1]);
    const double scale = std::max(std::abs(raw[i]), 1e-300);
    // Orthogonal amplitudes below ~1e-10 are eigensolver noise, not signal.
    const double noise = 1e-20 / (delta_schedule[i] * delta_schedule[i]);
    if (cur > prev && cur > 1e-8 * scale + noise) {
      throw Error(ErrorKind::NoConvergence, "overlap estimates diverge as delta shrinks (step " +
                                                std::to_string(delta_schedule[i]) + ")");
    }
  }

  std::vector<double> extrapolated;
  for (std::size_t i = 1; i < raw.size(); ++i) {
    const double r2 = std::pow(delta_schedule[i - 1] / delta_schedule[i], 2);
    extrapolated.push_back((r2 * raw[i] - raw[i - 1]) / (r2 - 1.0));
  }

  FsEstimate est;
  est.method = FsMethod::Overlap;
  est.delta_lambda = delta_schedule.back();
  est.value = std::max(0.0, extrapolated.back());
  if (extrapolated.size() >= 2) {
    est.convergence_error = std::abs(extrapolated.back() - extrapolated[extrapolated.size() - 2]);
  } else {
    est.convergence_error = std::abs(extrapolated.back() - raw.back());
  }
  const double scale = std::max(std::abs(est.value), 1e-300);
  if (!std::isfinite(est.value) || *est.convergence_error > 1e-2 * scale + 1e-12) {
    throw Error(ErrorKind::NoConvergence,
                "Richardson extrapolants disagree by " + std::to_string(*est.convergence_error));
  }
  return est;
}

FsEstimate fs_correlator(const ParametrizedHamiltonian& p, const QuadratureSpec& quadrature) {
  const SpectralDecomposition d = decompose(p.assembled());
  const Excitations ex = excitations(p, d);
  const double gap = relevant_gap(d, p.h_i);
  if (std::isinf(gap)) return {0.0, FsMethod::CorrelatorIntegral, std::nullopt, 0.0};
  if (gap < default_degeneracy_tol(d)) {
    throw Error(ErrorKind::UnboundedIntegral, "relevant gap vanishes; tau-integral does not converge");
  }

  auto integrand = [&](double tau) {
    CompensatedSum g;
    for (Eigen::Index n = 0; n < ex.omega.size(); ++n) {
      if (ex.weight(n) != 0.0) g.add(ex.weight(n) * std::exp(-tau * ex.omega(n)));
    }
    return tau * g.value();
  };
  const double horizon = 50.0 / gap;
  // The integrand peaks at tau ~ 1/omega; split at the relevant time scale
  // so the adaptive rule sees both the peak and the tail.
  const double knee = std::min(horizon, 2.0 / gap);
  QuadratureResult head = integrate(integrand, 0.0, knee, quadrature);
  QuadratureResult tail = integrate(integrand, knee, horizon, quadrature);
  const double value = head.value + tail.value;
  return {std::max(0.0, value), FsMethod::CorrelatorIntegral, std::nullopt,
          head.error_estimate + tail.error_estimate};
}

double energy_second_derivative(const ParametrizedHamiltonian& p) {
  const SpectralDecomposition d = decompose(p.assembled());
  const Excitations ex = excitations(p, d);
  CompensatedSum acc;
  for (Eigen::Index n = 0; n < ex.omega.size(); ++n) acc.add(ex.weight(n) / ex.omega(n));
  return -2.0 * acc.value();
}

InequalityBounds inequality_bounds(const ParametrizedHamiltonian& p) {
  const SpectralDecomposition d = decompose(p.assembled());
  const Excitations ex = excitations(p, d);
  InequalityBounds b;
  b.relevant_gap = relevant_gap(d, p.h_i);
  if (std::isinf(b.relevant_gap)) return b;

  b.chi = fs_spectral(p, d).value;

  CompensatedSum first_order;
  for (Eigen::Index n = 0; n < ex.omega.size(); ++n) first_order.add(ex.weight(n) / ex.omega(n));
  const double e2 = -2.0 * first_order.value();
  b.mid = -e2 / (2.0 * b.relevant_gap);

  // Variance directly from the ground state, independent of the excited states.
  const ComplexVector applied = p.h_i.entries() * ex.ground.state;
  const double mean = ex.ground.state.dot(applied).real();
  const double variance = (applied - mean * ex.ground.state).squaredNorm();
  b.upper = variance / (b.relevant_gap * b.relevant_gap);
  return b;
}

}  // namespace fidsus
