#pragma once

#include "fidsus/fs_engine.hpp"
#include "fidsus/spectral.hpp"

namespace fidsus {

/// Lipkin-Meshkov-Glick couplings. The driving coupling is the field h.
struct LmgParams {
  int n_spins = 2;
  double gamma = 0.0;
  double field = 0.0;

  /// Throws InvalidParams unless N is positive and even, h >= 0 and |gamma - 1| > 1e-6.
  void validate() const;
};

enum class LmgSector {
  GroundParity,    // the (S - m) mod 2 block holding the ground state, dim ~ N/2 + 1
  FullCollective,  // the whole S = N/2 multiplet, dim N + 1
};

/// H = -(2/N)(S_x^2 + gamma S_y^2) + (1 + gamma)/2 + h H_I with H_I = -2 S_z,
/// in the |S = N/2, m> basis ordered by ascending m. Within a parity block the
/// matrix is real tridiagonal.
ParametrizedHamiltonian build_lmg(const LmgParams& params,
                                  LmgSector sector = LmgSector::GroundParity);

/// Magnetic quantum numbers m of the basis states of build_lmg(params, sector).
RealVector lmg_basis_m(const LmgParams& params, LmgSector sector = LmgSector::GroundParity);

/// fs_spectral on the ground-parity block at lambda = h.
FsEstimate lmg_fs(const LmgParams& params);

}  // namespace fidsus
