#include "fidsus/backend.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <unistd.h>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <Eigen/Dense>

#include "fidsus/error.hpp"

// Present in OpenBLAS only; resolved weakly so other BLAS builds still link.
extern "C" char* openblas_get_corename() __attribute__((weak));

namespace fidsus {

namespace {

// Big enough to reach the blocked code paths of *syevd / *heevd.
constexpr int kProbeDim = 384;
constexpr double kProbeTol = 1e-10;

template <class Matrix, class Solve>
double probe(const Matrix& m, Solve solve) {
  Matrix v = m;
  Eigen::VectorXd w(m.rows());
  if (solve(v, w) != 0) return INFINITY;
  const double r = (m * v - v * w.asDiagonal()).cwiseAbs().maxCoeff() / m.norm();
  return std::isfinite(r) ? r : INFINITY;
}

BackendStatus run_probe() {
  BackendStatus s;
  const int n = kProbeDim;
  Eigen::MatrixXd a(n, n);
  Eigen::MatrixXcd c(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double x = std::sin(0.37 * (i + 1) * (j + 2) + 0.11 * i);
      a(i, j) = a(j, i) = x;
      const std::complex<double> z(x, i == j ? 0.0 : std::cos(0.23 * (i + 3) * (j + 1)));
      c(i, j) = z;
      c(j, i) = std::conj(z);
    }
  }
  s.real_residual = probe(a, [n](Eigen::MatrixXd& v, Eigen::VectorXd& w) {
    return LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, v.data(), n, w.data());
  });
  s.complex_residual = probe(c, [n](Eigen::MatrixXcd& v, Eigen::VectorXd& w) {
    return LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'U', n, v.data(), n, w.data());
  });
  s.ok = s.real_residual <= kProbeTol && s.complex_residual <= kProbeTol;
  if (openblas_get_corename) s.blas_core = openblas_get_corename();
  return s;
}

}  // namespace

const BackendStatus& lapack_backend_status() {
  static const BackendStatus status = run_probe();
  return status;
}

void require_lapack_backend() {
  const BackendStatus& s = lapack_backend_status();
  if (s.ok) return;
  std::string msg = "LAPACK eigensolver self-test failed (residuals " + std::to_string(s.real_residual) + ", " +
                    std::to_string(s.complex_residual) + ")";
  if (!s.blas_core.empty()) {
    msg += "; OpenBLAS kernel '" + s.blas_core + "' is faulty here, set OPENBLAS_CORETYPE=Haswell";
  }
  throw Error(ErrorKind::NoConvergence, msg);
}

void reexec_with_working_blas(char** argv) {
  if (lapack_backend_status().ok || std::getenv("OPENBLAS_CORETYPE") != nullptr) return;
  ::setenv("OPENBLAS_CORETYPE", "Haswell", 1);
  ::execv("/proc/self/exe", argv);
}

}  // namespace fidsus
