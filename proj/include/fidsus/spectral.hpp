#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>

namespace fidsus {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Absolute tolerance for the Hermiticity check on construction.
inline constexpr double kHermiticityTol = 1e-12;
/// Default degeneracy tolerance, relative to the spectral range.
inline constexpr double kDegeneracyFactor = 1e-10;
/// Default matrix-element cutoff for relevant_gap, relative to ||H_I||.
inline constexpr double kElementFactor = 1e-10;

/// Dense Hermitian operator. Construction validates Hermiticity, so every
/// instance satisfies entries(i, j) == conj(entries(j, i)) within 1e-12.
class HermitianOperator {
 public:
  explicit HermitianOperator(ComplexMatrix entries);
  explicit HermitianOperator(const RealMatrix& entries);

  static HermitianOperator identity(Eigen::Index dim);
  static HermitianOperator diagonal(const RealVector& diag);

  Eigen::Index dim() const noexcept { return entries_.rows(); }
  const ComplexMatrix& entries() const noexcept { return entries_; }

  /// Spectral norm bound used for tolerances: the Frobenius norm.
  double norm() const { return entries_.norm(); }

  HermitianOperator operator+(const HermitianOperator& other) const;
  HermitianOperator scaled(double factor) const;

 private:
  ComplexMatrix entries_;
};

/// H(lambda) = h0 + lambda * h_i.
struct ParametrizedHamiltonian {
  HermitianOperator h0;
  HermitianOperator h_i;
  double lambda = 0.0;

  ParametrizedHamiltonian(HermitianOperator h0_, HermitianOperator h_i_, double lambda_);

  HermitianOperator assembled() const { return assembled_at(lambda); }
  HermitianOperator assembled_at(double coupling) const;
  ParametrizedHamiltonian at(double coupling) const { return {h0, h_i, coupling}; }
};

/// Ascending eigenvalues with orthonormal eigenvectors in columns. Each
/// eigenvector is gauge-fixed so that its largest-magnitude component is
/// real and positive (first such index on ties).
struct SpectralDecomposition {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;

  Eigen::Index size() const noexcept { return eigenvalues.size(); }
  double spectral_range() const { return eigenvalues(size() - 1) - eigenvalues(0); }
};

SpectralDecomposition decompose(const HermitianOperator& h);

struct GroundState {
  ComplexVector state;
  double energy = 0.0;
  /// E_1 - E_0; +inf for a one-dimensional operator.
  double gap = 0.0;
};

/// Default tolerance: kDegeneracyFactor * spectral range (floored at the
/// smallest positive normal double for a flat spectrum).
double default_degeneracy_tol(const SpectralDecomposition& d);

/// Throws DegenerateGroundState when E_1 - E_0 < degeneracy_tol.
GroundState ground_state(const SpectralDecomposition& d, double degeneracy_tol);
GroundState ground_state(const SpectralDecomposition& d);

/// Matrix elements <Psi_n|op|Psi_0> for every n (index 0 included).
ComplexVector ground_matrix_elements(const SpectralDecomposition& d, const HermitianOperator& op);

/// Lowest excitation energy E_n - E_0 whose element |<Psi_n|H_I|Psi_0>|
/// exceeds element_tol; +inf if H_I couples the ground state to nothing.
double relevant_gap(const SpectralDecomposition& d, const HermitianOperator& h_i, double element_tol);
double relevant_gap(const SpectralDecomposition& d, const HermitianOperator& h_i);

}  // namespace fidsus
