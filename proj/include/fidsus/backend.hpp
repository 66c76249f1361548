#pragma once

#include <string>

namespace fidsus {

/// Result of a one-time probe of the LAPACK eigensolvers on fixed matrices.
/// Some OpenBLAS builds select a faulty GEMM kernel on recent AVX-512 CPUs,
/// which corrupts every blocked eigensolver without raising an error.
struct BackendStatus {
  bool ok = false;
  double real_residual = 0.0;     // max |H v - e v| / ||H|| for dsyevd
  double complex_residual = 0.0;  // same for zheevd
  std::string blas_core;          // OpenBLAS kernel name, empty if unknown
};

const BackendStatus& lapack_backend_status();

/// Throws NoConvergence when the probe failed.
void require_lapack_backend();

/// For executables: when the probe fails and OPENBLAS_CORETYPE is unset,
/// re-executes the program with OPENBLAS_CORETYPE=Haswell. Returns normally
/// when the backend is fine or the override was already tried.
void reexec_with_working_blas(char** argv);

}  // namespace fidsus
