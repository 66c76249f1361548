#include "fidsus/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "fidsus/backend.hpp"
#include "fidsus/error.hpp"

namespace fidsus {

namespace {

void check_hermitian(const ComplexMatrix& m) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw Error(ErrorKind::NonHermitianInput,
                "operator must be square with dim >= 1, got " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()));
  }
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      if (std::abs(m(i, j) - std::conj(m(j, i))) > kHermiticityTol) {
        throw Error(ErrorKind::NonHermitianInput,
                    "entry (" + std::to_string(i) + "," + std::to_string(j) + ") violates Hermiticity");
      }
    }
  }
}

bool is_real(const ComplexMatrix& m) {
  return (m.imag().array() == 0.0).all();
}

bool is_tridiagonal(const ComplexMatrix& m) {
  const Eigen::Index n = m.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if ((i > j + 1 || j > i + 1) && m(i, j) != 0.0) return false;
    }
  }
  return true;
}

void fail_on_info(lapack_int info, const char* driver) {
  if (info < 0) {
    throw Error(ErrorKind::NoConvergence,
                std::string(driver) + ": illegal argument " + std::to_string(-info));
  }
  if (info > 0) {
    throw Error(ErrorKind::NoConvergence,
                std::string(driver) + " failed to converge (info=" + std::to_string(info) + ")");
  }
}

// Rotates each column so its largest-magnitude entry is real positive.
void fix_gauge(ComplexMatrix& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      const double a = std::abs(vectors(r, c));
      if (a > best_abs) {
        best_abs = a;
        best = r;
      }
    }
    if (best_abs > 0.0) {
      const Complex phase = std::conj(vectors(best, c)) / best_abs;
      vectors.col(c) *= phase;
      vectors(best, c) = Complex(std::abs(vectors(best, c)), 0.0);
    }
  }
}

SpectralDecomposition solve_tridiagonal(const ComplexMatrix& m) {
  const lapack_int n = static_cast<lapack_int>(m.rows());
  std::vector<double> diag(n), off(std::max<lapack_int>(n - 1, 1));
  for (lapack_int i = 0; i < n; ++i) diag[i] = m(i, i).real();
  for (lapack_int i = 0; i + 1 < n; ++i) off[i] = m(i + 1, i).real();
  RealMatrix z(n, n);
  fail_on_info(LAPACKE_dstevd(LAPACK_COL_MAJOR, 'V', n, diag.data(), off.data(), z.data(), n),
               "dstevd");
  SpectralDecomposition d;
  d.eigenvalues = Eigen::Map<RealVector>(diag.data(), n);
  d.eigenvectors = z.cast<Complex>();
  return d;
}

SpectralDecomposition solve_real(const ComplexMatrix& m) {
  const lapack_int n = static_cast<lapack_int>(m.rows());
  RealMatrix a = m.real();
  RealVector w(n);
  fail_on_info(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, a.data(), n, w.data()), "dsyevd");
  SpectralDecomposition d;
  d.eigenvalues = std::move(w);
  d.eigenvectors = a.cast<Complex>();
  return d;
}

SpectralDecomposition solve_complex(const ComplexMatrix& m) {
  const lapack_int n = static_cast<lapack_int>(m.rows());
  ComplexMatrix a = m;
  RealVector w(n);
  fail_on_info(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'U', n, a.data(), n, w.data()), "zheevd");
  SpectralDecomposition d;
  d.eigenvalues = std::move(w);
  d.eigenvectors = std::move(a);
  return d;
}

}  // namespace

HermitianOperator::HermitianOperator(ComplexMatrix entries) : entries_(std::move(entries)) {
  check_hermitian(entries_);
}

HermitianOperator::HermitianOperator(const RealMatrix& entries)
    : HermitianOperator(ComplexMatrix(entries.cast<Complex>())) {}

HermitianOperator HermitianOperator::identity(Eigen::Index dim) {
  return HermitianOperator(ComplexMatrix(ComplexMatrix::Identity(dim, dim)));
}

HermitianOperator HermitianOperator::diagonal(const RealVector& diag) {
  return HermitianOperator(RealMatrix(diag.asDiagonal()));
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& other) const {
  if (other.dim() != dim()) {
    throw Error(ErrorKind::InvalidParams, "operator dimensions differ");
  }
  return HermitianOperator(ComplexMatrix(entries_ + other.entries_));
}

HermitianOperator HermitianOperator::scaled(double factor) const {
  return HermitianOperator(ComplexMatrix(entries_ * factor));
}

ParametrizedHamiltonian::ParametrizedHamiltonian(HermitianOperator h0_, HermitianOperator h_i_,
                                                 double lambda_)
    : h0(std::move(h0_)), h_i(std::move(h_i_)), lambda(lambda_) {
  if (h0.dim() != h_i.dim()) {
    throw Error(ErrorKind::InvalidParams, "h0 and h_i must have the same dimension");
  }
}

HermitianOperator ParametrizedHamiltonian::assembled_at(double coupling) const {
  // Sum of two Hermitian matrices; re-symmetrise so rounding never trips the check.
  ComplexMatrix m = h0.entries() + coupling * h_i.entries();
  ComplexMatrix sym = 0.5 * (m + m.adjoint());
  return HermitianOperator(std::move(sym));
}

SpectralDecomposition decompose(const HermitianOperator& h) {
  require_lapack_backend();
  const ComplexMatrix& m = h.entries();
  SpectralDecomposition d;
  if (is_real(m)) {
    d = is_tridiagonal(m) ? solve_tridiagonal(m) : solve_real(m);
  } else {
    d = solve_complex(m);
  }
  fix_gauge(d.eigenvectors);
  return d;
}

double default_degeneracy_tol(const SpectralDecomposition& d) {
  return std::max(kDegeneracyFactor * d.spectral_range(), std::numeric_limits<double>::min());
}

GroundState ground_state(const SpectralDecomposition& d, double degeneracy_tol) {
  if (d.size() < 1) throw Error(ErrorKind::InvalidParams, "empty decomposition");
  if (!(degeneracy_tol > 0.0)) {
    throw Error(ErrorKind::InvalidParams, "degeneracy tolerance must be positive");
  }
  GroundState g;
  g.state = d.eigenvectors.col(0);
  g.energy = d.eigenvalues(0);
  g.gap = d.size() > 1 ? d.eigenvalues(1) - d.eigenvalues(0)
                       : std::numeric_limits<double>::infinity();
  if (g.gap < degeneracy_tol) {
    throw Error(ErrorKind::DegenerateGroundState,
                "E1 - E0 = " + std::to_string(g.gap) + " below tolerance " +
                    std::to_string(degeneracy_tol));
  }
  return g;
}

GroundState ground_state(const SpectralDecomposition& d) {
  return ground_state(d, default_degeneracy_tol(d));
}

ComplexVector ground_matrix_elements(const SpectralDecomposition& d, const HermitianOperator& op) {
  if (op.dim() != d.size()) throw Error(ErrorKind::InvalidParams, "dimension mismatch");
  const ComplexVector applied = op.entries() * d.eigenvectors.col(0);
  return d.eigenvectors.adjoint() * applied;
}

double relevant_gap(const SpectralDecomposition& d, const HermitianOperator& h_i,
                    double element_tol) {
  if (!(element_tol > 0.0)) {
    throw Error(ErrorKind::InvalidParams, "element tolerance must be positive");
  }
  const ComplexVector elements = ground_matrix_elements(d, h_i);
  for (Eigen::Index n = 1; n < d.size(); ++n) {
    if (std::abs(elements(n)) > element_tol) return d.eigenvalues(n) - d.eigenvalues(0);
  }
  return std::numeric_limits<double>::infinity();
}

double relevant_gap(const SpectralDecomposition& d, const HermitianOperator& h_i) {
  return relevant_gap(d, h_i, std::max(kElementFactor * h_i.norm(), std::numeric_limits<double>::min()));
}

}  // namespace fidsus
