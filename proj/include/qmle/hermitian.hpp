#pragma once

#include <Eigen/Dense>
#include <cassert>
#include <cmath>
#include <complex>
#include <utility>

#include "qmle/errors.hpp"

namespace qmle {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

class HermitianMatrix;

HermitianMatrix hermitize(const ComplexMatrix& m);

/// Complex square matrix with exact conjugate symmetry:
/// m(j, k) == conj(m(k, j)) holds entrywise, not merely within tolerance.
///
/// Every construction funnels through hermitize(), which averages a matrix
/// with its adjoint. The averaging is exact in IEEE arithmetic, and sums and
/// real scalings of exactly-symmetric matrices stay exactly symmetric, so the
/// invariant survives the arithmetic below without re-projection. Products do
/// not preserve the invariant; callers hermitize product results before
/// storing them.
class HermitianMatrix {
 public:
  static HermitianMatrix zero(Eigen::Index dim) {
    check_dim(dim);
    return HermitianMatrix(ComplexMatrix::Zero(dim, dim));
  }

  static HermitianMatrix identity(Eigen::Index dim) {
    check_dim(dim);
    return HermitianMatrix(ComplexMatrix::Identity(dim, dim));
  }

  static HermitianMatrix scaled_identity(Eigen::Index dim, double value) {
    check_dim(dim);
    ComplexMatrix m = ComplexMatrix::Identity(dim, dim);
    m *= Complex(value, 0.0);
    return HermitianMatrix(std::move(m));
  }

  Eigen::Index dim() const { return entries_.rows(); }

  const ComplexMatrix& matrix() const { return entries_; }

  double trace_real() const { return entries_.diagonal().real().sum(); }

  double frobenius_norm() const { return entries_.norm(); }

  double max_abs() const { return entries_.cwiseAbs().maxCoeff(); }

  HermitianMatrix& operator+=(const HermitianMatrix& other) {
    if (other.dim() != dim()) {
      throw InvalidArgumentError("HermitianMatrix: dimension mismatch in sum");
    }
    entries_ += other.entries_;
    return *this;
  }

  friend HermitianMatrix operator+(HermitianMatrix lhs, const HermitianMatrix& rhs) {
    lhs += rhs;
    return lhs;
  }

  HermitianMatrix scaled(double factor) const {
    return HermitianMatrix(entries_ * Complex(factor, 0.0));
  }

 private:
  explicit HermitianMatrix(ComplexMatrix entries) : entries_(std::move(entries)) {}

  static void check_dim(Eigen::Index dim) {
    if (dim < 1) {
      throw InvalidArgumentError("HermitianMatrix: dimension must be at least 1");
    }
  }

  friend HermitianMatrix hermitize(const ComplexMatrix&);

  ComplexMatrix entries_;
};

/// Eigendecomposition of a Hermitian matrix. Eigenvalues are real and sorted
/// ascending (the mirror step needs the smallest one first); column k of
/// eigenvectors pairs with eigenvalue k.
struct SpectralDecomposition {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
};

/// (M + M*)/2. Idempotent bit-for-bit; removes anti-Hermitian drift exactly.
inline HermitianMatrix hermitize(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw InvalidArgumentError("hermitize: matrix must be square");
  }
  if (m.rows() < 1) {
    throw InvalidArgumentError("hermitize: dimension must be at least 1");
  }
  ComplexMatrix sym = 0.5 * (m + m.adjoint());
  return HermitianMatrix(std::move(sym));
}

inline SpectralDecomposition eig_hermitian(const HermitianMatrix& m) {
  if (m.dim() < 1) {
    throw InvalidArgumentError("eig_hermitian: dimension must be at least 1");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m.matrix());
  if (solver.info() != Eigen::Success) {
    throw DecompositionError("eig_hermitian: eigensolver did not converge");
  }
  return SpectralDecomposition{solver.eigenvalues(), solver.eigenvectors()};
}

/// Real part of tr(AB). For Hermitian A and B the trace is real;
/// tr(AB) = sum_{jk} A(j,k) * conj(B(j,k)), which costs O(d^2).
inline double trace_product(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) {
    throw InvalidArgumentError("trace_product: dimension mismatch");
  }
  const Complex t = (a.matrix().array() * b.matrix().array().conjugate()).sum();
  assert(std::abs(t.imag()) <= 1e-10);
  return t.real();
}

/// U diag(values) U*, hermitized. U must be unitary (checked in debug builds).
inline HermitianMatrix from_spectrum(const ComplexMatrix& u, const RealVector& values) {
  if (u.rows() != u.cols()) {
    throw InvalidArgumentError("from_spectrum: eigenvector matrix must be square");
  }
  if (values.size() != u.rows()) {
    throw InvalidArgumentError("from_spectrum: eigenvalue count does not match dimension");
  }
  if (!values.allFinite()) {
    throw InvalidArgumentError("from_spectrum: eigenvalues must be finite");
  }
#ifndef NDEBUG
  const double unitarity =
      (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
  assert(unitarity <= 1e-10);
#endif
  return hermitize(u * values.asDiagonal() * u.adjoint());
}

}  // namespace qmle
