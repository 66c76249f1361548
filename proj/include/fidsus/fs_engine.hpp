#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "fidsus/quadrature.hpp"
#include "fidsus/spectral.hpp"

namespace fidsus {

enum class FsMethod { Spectral, Overlap, CorrelatorIntegral, ClosedForm };

std::string_view name(FsMethod method) noexcept;

/// One fidelity-susceptibility value with its provenance.
struct FsEstimate {
  double value = 0.0;
  FsMethod method = FsMethod::Spectral;
  std::optional<double> delta_lambda;       // Overlap only: smallest step used.
  std::optional<double> convergence_error;  // Overlap: |last two extrapolants|; quadrature: error estimate.
};

/// chi_F = sum_{n != 0} |<n|H_I|0>|^2 / (E_n - E_0)^2 at p.lambda.
FsEstimate fs_spectral(const ParametrizedHamiltonian& p);
FsEstimate fs_spectral(const ParametrizedHamiltonian& p, const SpectralDecomposition& d);

/// F(lambda, lambda + delta) = |<Psi_0(lambda)|Psi_0(lambda + delta)>|.
double fidelity_overlap(const ParametrizedHamiltonian& p, double delta);

/// Default step schedule for fs_overlap.
inline const std::vector<double> kDefaultOverlapSchedule{1e-3, 5e-4, 2.5e-4};

/// -2 ln F / delta^2 from the centred overlap F(lambda - delta/2, lambda + delta/2),
/// whose error is even in delta.
double overlap_fs_at(const ParametrizedHamiltonian& p, double delta);

/// Richardson extrapolation of overlap_fs_at over a strictly decreasing schedule,
/// assuming an O(delta^2) error. Throws NoConvergence if successive raw
/// estimates move apart instead of settling.
FsEstimate fs_overlap(const ParametrizedHamiltonian& p,
                      const std::vector<double>& delta_schedule = kDefaultOverlapSchedule);

/// Numerical integral of tau * G(tau) over [0, 50 / Delta], with
/// G(tau) = sum_{n != 0} exp(-tau (E_n - E_0)) |<n|H_I|0>|^2.
FsEstimate fs_correlator(const ParametrizedHamiltonian& p, const QuadratureSpec& quadrature = {});

/// Second-order perturbative d^2 E_0 / d lambda^2.
double energy_second_derivative(const ParametrizedHamiltonian& p);

struct InequalityBounds {
  double chi = 0.0;    // fs_spectral
  double mid = 0.0;    // -(1 / 2 Delta) d^2 E_0 / d lambda^2
  double upper = 0.0;  // Delta^-2 (<H_I^2> - <H_I>^2)
  double relevant_gap = 0.0;
};

/// chi <= mid <= upper. When H_I couples the ground state to nothing the
/// relevant gap is infinite and all three bounds are reported as 0.
InequalityBounds inequality_bounds(const ParametrizedHamiltonian& p);

}  // namespace fidsus
