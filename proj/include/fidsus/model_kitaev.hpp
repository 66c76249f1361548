#pragma once

#include <string_view>

#include "fidsus/fs_engine.hpp"
#include "fidsus/quadrature.hpp"

namespace fidsus {

struct KitaevCouplings {
  double jx = 0.0;
  double jy = 0.0;
  double jz = 1.0;

  /// The J_x = J_y line on the J_x + J_y + J_z = 1 plane, driven by J_z.
  static KitaevCouplings on_line(double jz) { return {0.5 * (1.0 - jz), 0.5 * (1.0 - jz), jz}; }
};

/// Finite honeycomb lattice with N = 2 L^2 sites, L odd.
struct KitaevParams {
  int side = 1;
  KitaevCouplings couplings;
  bool on_simplex = true;  // enforce jx + jy + jz = 1 within 1e-12

  void validate() const;
};

inline constexpr int kKitaevDeskMaxSide = 4001;
inline constexpr int kKitaevExtendedMaxSide = 20001;
/// Grid points with eps^2 + delta^2 below this are treated as poles.
inline constexpr double kKitaevPoleTol = 1e-300;
/// Minimum of eps^2 + delta^2 below this classifies the couplings as gapless.
inline constexpr double kKitaevGaplessTol = 1e-12;

struct Dispersion {
  double eps = 0.0;    // jx cos qx + jy cos qy + jz
  double delta = 0.0;  // jx sin qx + jy sin qy
};

Dispersion dispersion(double qx, double qy, const KitaevCouplings& j);

struct KitaevSumOptions {
  unsigned workers = 1;
  bool extended = false;  // allow L up to kKitaevExtendedMaxSide
};

/// chi_F = (1/16) sum_q [(sin qx + sin qy) / (eps_q^2 + delta_q^2)]^2 over
/// q = 2 pi n / L, n = -(L-1)/2 .. (L-1)/2. Row-major, compensated, and
/// bit-identical for any worker count. Throws PoleOnGrid or TooLarge.
FsEstimate kitaev_fs_sum(const KitaevParams& params, const KitaevSumOptions& options = {});

struct KitaevIntegral {
  double value = 0.0;  // chi_F / L^2 in the thermodynamic limit; +inf when diverged
  bool diverged = false;
  double error_estimate = 0.0;
};

/// Default target for the thermodynamic integral; the tolerance is on the
/// normalised value.
inline constexpr QuadratureSpec kKitaevIntegralQuadrature{1e-9, 1e-12};

/// (1/64 pi^2) int int [(sin qx + sin qy) / (eps^2 + delta^2)]^2 over the
/// Brillouin zone. Gapless couplings report diverged = true without integrating.
KitaevIntegral kitaev_fs_integral(const KitaevCouplings& couplings,
                                  const QuadratureSpec& quadrature = kKitaevIntegralQuadrature);

enum class KitaevPhase { Gapped, Gapless };

std::string_view name(KitaevPhase phase) noexcept;

/// min over the Brillouin zone of eps^2 + delta^2 (coarse grid + local pattern search).
double kitaev_min_gap_squared(const KitaevCouplings& couplings);

/// Gapless iff kitaev_min_gap_squared < 1e-12; the critical manifold counts as gapless.
KitaevPhase kitaev_phase(const KitaevCouplings& couplings);

}  // namespace fidsus
