#include "fidsus/model_lmg.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "fidsus/error.hpp"

namespace fidsus {

namespace {

struct CollectiveBlock {
  std::vector<double> m;  // ascending
  RealMatrix h0;
  RealVector h_i;
};

// <m+1|S_+|m>
double raise(double s, double m) { return std::sqrt(s * (s + 1.0) - m * (m + 1.0)); }

// parity < 0 selects the full multiplet; otherwise m with (S - m) % 2 == parity.
CollectiveBlock collective_block(const LmgParams& p, int parity) {
  const double n = p.n_spins;
  const double s = 0.5 * n;
  CollectiveBlock b;
  for (int k = 0; k <= p.n_spins; ++k) {
    if (parity < 0 || (p.n_spins - k) % 2 == parity) b.m.push_back(k - s);
  }
  const Eigen::Index dim = static_cast<Eigen::Index>(b.m.size());
  b.h0 = RealMatrix::Zero(dim, dim);
  b.h_i = RealVector(dim);
  const double prefactor = -2.0 / n;
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double m = b.m[i];
    // S_x^2 + gamma S_y^2 = (1+gamma)/2 (S^2 - S_z^2) + (1-gamma)/4 (S_+^2 + S_-^2)
    b.h0(i, i) = prefactor * 0.5 * (1.0 + p.gamma) * (s * (s + 1.0) - m * m) + 0.5 * (1.0 + p.gamma);
    b.h_i(i) = -2.0 * m;
  }
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i + 1; j < std::min(dim, i + 3); ++j) {
      if (std::abs(b.m[j] - b.m[i] - 2.0) > 0.25) continue;
      const double m = b.m[i];
      const double v = prefactor * 0.25 * (1.0 - p.gamma) * raise(s, m) * raise(s, m + 1.0);
      b.h0(i, j) = v;
      b.h0(j, i) = v;
    }
  }
  return b;
}

// Lowest eigenvalue of a real symmetric tridiagonal matrix (eigenvalues only).
double lowest_eigenvalue(const RealMatrix& tri) {
  const lapack_int n = static_cast<lapack_int>(tri.rows());
  std::vector<double> d(n), e(std::max<lapack_int>(n - 1, 1));
  for (lapack_int i = 0; i < n; ++i) d[i] = tri(i, i);
  for (lapack_int i = 0; i + 1 < n; ++i) e[i] = tri(i + 1, i);
  if (LAPACKE_dsterf(n, d.data(), e.data()) != 0) {
    throw Error(ErrorKind::NoConvergence, "dsterf failed on LMG parity block");
  }
  return d[0];
}

int ground_parity(const LmgParams& p) {
  const CollectiveBlock even = collective_block(p, 0);
  const CollectiveBlock odd = collective_block(p, 1);
  RealMatrix he = even.h0 + p.field * RealMatrix(even.h_i.asDiagonal());
  RealMatrix ho = odd.h0 + p.field * RealMatrix(odd.h_i.asDiagonal());
  // Ties (exponentially small splitting) go to the block containing m = S.
  return lowest_eigenvalue(ho) < lowest_eigenvalue(he) ? 1 : 0;
}

}  // namespace

void LmgParams::validate() const {
  if (n_spins <= 0 || n_spins % 2 != 0) {
    throw Error(ErrorKind::InvalidParams, "LMG needs a positive even spin count, got " + std::to_string(n_spins));
  }
  if (!(field >= 0.0) || !std::isfinite(field)) throw Error(ErrorKind::InvalidParams, "LMG field must be >= 0");
  if (!std::isfinite(gamma) || std::abs(gamma - 1.0) <= 1e-6) {
    throw Error(ErrorKind::InvalidParams, "LMG anisotropy must satisfy |gamma - 1| > 1e-6");
  }
}

RealVector lmg_basis_m(const LmgParams& params, LmgSector sector) {
  params.validate();
  const int parity = sector == LmgSector::FullCollective ? -1 : ground_parity(params);
  const CollectiveBlock b = collective_block(params, parity);
  return Eigen::Map<const RealVector>(b.m.data(), static_cast<Eigen::Index>(b.m.size()));
}

ParametrizedHamiltonian build_lmg(const LmgParams& params, LmgSector sector) {
  params.validate();
  const int parity = sector == LmgSector::FullCollective ? -1 : ground_parity(params);
  CollectiveBlock b = collective_block(params, parity);
  return ParametrizedHamiltonian(HermitianOperator(b.h0), HermitianOperator::diagonal(b.h_i), params.field);
}

FsEstimate lmg_fs(const LmgParams& params) {
  return fs_spectral(build_lmg(params));
}

}  // namespace fidsus
