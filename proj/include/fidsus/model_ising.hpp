#pragma once

#include "fidsus/fs_engine.hpp"
#include "fidsus/quadrature.hpp"
#include "fidsus/spectral.hpp"

namespace fidsus {

/// Periodic transverse-field Ising chain
///   H = -sum_i sx_i sx_{i+1} - h sum_i sz_i,   H_I = -sum_i sz_i.
struct IsingParams {
  int length = 4;
  double field = 0.0;
};

inline constexpr int kIsingMaxEdLength = 12;

enum class IsingSector {
  Full,        // all 2^L states
  EvenParity,  // prod_i sz_i = +1, dim 2^(L-1); holds the ground state for h > 0
};

/// Dense ED operator pair in the sz basis (bit i set = spin i down).
/// Throws TooLarge for L > 12.
ParametrizedHamiltonian build_ising_ed(const IsingParams& params, IsingSector sector = IsingSector::Full);

/// Jordan-Wigner/Bogoliubov result in the even-parity sector:
///   chi_F = sum_{k>0} (1/4) (d theta_k / d h)^2,  tan theta_k = sin k / (h - cos k),
/// with antiperiodic momenta k = (2n+1) pi / L. Needs even L >= 4.
FsEstimate ising_fs_freefermion(const IsingParams& params);

/// lim_{L->inf} chi_F / L = (1/2pi) int_0^pi sin^2 k / (4 (1 + h^2 - 2h cos k)^2) dk
/// by adaptive quadrature. Throws UnboundedIntegral at h = 1.
double ising_fs_density_limit(double field, const QuadratureSpec& quadrature = {});

}  // namespace fidsus
