#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "qmle/errors.hpp"
#include "qmle/hermitian.hpp"

namespace qmle {

/// Any likelihood term at or below this is treated as singular. The solvers
/// keep their iterates full rank, so a trace this small means the caller fed
/// an infeasible state, and the right response is a loud error.
inline constexpr double kSingularTraceFloor = 1e-300;

/// Hermitian, PSD, unit-trace matrix: the optimization variable rho.
///
/// validated() pays one eigendecomposition to check the invariants and is
/// meant for program boundaries (file input, test fixtures). trusted() is for
/// construction sites that guarantee the invariants structurally, e.g. the
/// mirror step, whose output spectrum is known and positive by construction.
class DensityMatrix {
 public:
  static DensityMatrix maximally_mixed(Eigen::Index dim) {
    return DensityMatrix(HermitianMatrix::scaled_identity(dim, 1.0 / static_cast<double>(dim)));
  }

  /// |psi><psi| for a unit vector psi.
  static DensityMatrix pure(const ComplexVector& psi) {
    if (psi.size() < 1) {
      throw InvalidArgumentError("DensityMatrix::pure: empty state vector");
    }
    if (std::abs(psi.norm() - 1.0) > 1e-10) {
      throw InvalidArgumentError("DensityMatrix::pure: state vector must have unit norm");
    }
    return DensityMatrix(hermitize(psi * psi.adjoint()));
  }

  static DensityMatrix validated(HermitianMatrix m, double trace_tol = 1e-10,
                                 double psd_tol = 1e-10) {
    if (std::abs(m.trace_real() - 1.0) > trace_tol) {
      throw InvalidArgumentError("DensityMatrix: trace must equal 1");
    }
    const SpectralDecomposition dec = eig_hermitian(m);
    if (dec.eigenvalues(0) < -psd_tol) {
      throw InvalidArgumentError("DensityMatrix: matrix must be positive semi-definite");
    }
    return DensityMatrix(std::move(m));
  }

  /// Caller guarantees unit trace and positive semi-definiteness.
  static DensityMatrix trusted(HermitianMatrix m) {
    assert(std::abs(m.trace_real() - 1.0) <= 1e-8);
    return DensityMatrix(std::move(m));
  }

  Eigen::Index dim() const { return matrix_.dim(); }
  const HermitianMatrix& hermitian() const { return matrix_; }
  const ComplexMatrix& matrix() const { return matrix_.matrix(); }

 private:
  explicit DensityMatrix(HermitianMatrix m) : matrix_(std::move(m)) {}

  HermitianMatrix matrix_;
};

/// Hermitian PSD matrix A_i encoding one observed measurement outcome.
class MeasurementOperator {
 public:
  static MeasurementOperator validated(HermitianMatrix m, double psd_tol = 1e-10) {
    const SpectralDecomposition dec = eig_hermitian(m);
    if (dec.eigenvalues(0) < -psd_tol) {
      throw InvalidArgumentError("MeasurementOperator: matrix must be positive semi-definite");
    }
    if (m.max_abs() == 0.0) {
      throw InvalidArgumentError("MeasurementOperator: zero matrix is not a valid outcome");
    }
    return MeasurementOperator(std::move(m));
  }

  /// Caller guarantees positive semi-definiteness and non-triviality.
  static MeasurementOperator trusted(HermitianMatrix m) {
    assert(m.max_abs() > 0.0);
    return MeasurementOperator(std::move(m));
  }

  Eigen::Index dim() const { return matrix_.dim(); }
  const HermitianMatrix& hermitian() const { return matrix_; }
  const ComplexMatrix& matrix() const { return matrix_.matrix(); }

 private:
  explicit MeasurementOperator(HermitianMatrix m) : matrix_(std::move(m)) {}

  HermitianMatrix matrix_;
};

/// Compressed multiset of measurement outcomes: unique operators with counts.
/// Uniform sampling over the n underlying shots is realized as count-weighted
/// sampling over the unique entries (see entry_for_shot).
class ShotDataset {
 public:
  struct Entry {
    MeasurementOperator op;
    std::uint64_t count;
  };

  ShotDataset(Eigen::Index dim, std::vector<Entry> entries)
      : dim_(dim), entries_(std::move(entries)) {
    if (dim_ < 1) {
      throw InvalidArgumentError("ShotDataset: dimension must be at least 1");
    }
    cumulative_.reserve(entries_.size());
    std::uint64_t total = 0;
    for (const Entry& e : entries_) {
      if (e.op.dim() != dim_) {
        throw InvalidArgumentError("ShotDataset: operator dimension mismatch");
      }
      if (e.count < 1) {
        throw InvalidArgumentError("ShotDataset: counts must be at least 1");
      }
      total += e.count;
      cumulative_.push_back(total);
    }
    total_shots_ = total;
  }

  Eigen::Index dim() const { return dim_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::uint64_t total_shots() const { return total_shots_; }
  bool empty() const { return entries_.empty(); }

  /// Entry index owning the given shot index in [0, total_shots).
  std::size_t entry_for_shot(std::uint64_t shot) const {
    if (shot >= total_shots_) {
      throw InvalidArgumentError("ShotDataset: shot index out of range");
    }
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), shot);
    return static_cast<std::size_t>(it - cumulative_.begin());
  }

 private:
  Eigen::Index dim_;
  std::vector<Entry> entries_;
  std::vector<std::uint64_t> cumulative_;
  std::uint64_t total_shots_ = 0;
};

namespace detail {

inline double checked_trace(const MeasurementOperator& op, const DensityMatrix& rho,
                            std::size_t operator_index) {
  const double t = trace_product(op.hermitian(), rho.hermitian());
  if (t <= kSingularTraceFloor) {
    throw SingularLikelihoodError(operator_index, t);
  }
  return t;
}

}  // namespace detail

/// -log tr(A rho): the loss of a single shot.
inline double sample_loss(const MeasurementOperator& op, const DensityMatrix& rho) {
  if (op.dim() != rho.dim()) {
    throw InvalidArgumentError("sample_loss: dimension mismatch");
  }
  return -std::log(detail::checked_trace(op, rho, 0));
}

/// Negative log-likelihood (1/n) sum_i count_i * (-log tr(A_i rho)).
inline double nll(const ShotDataset& data, const DensityMatrix& rho) {
  if (data.dim() != rho.dim()) {
    throw InvalidArgumentError("nll: dimension mismatch");
  }
  if (data.empty()) {
    throw InvalidArgumentError("nll: dataset is empty");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < data.entries().size(); ++i) {
    const auto& entry = data.entries()[i];
    acc += static_cast<double>(entry.count) * -std::log(detail::checked_trace(entry.op, rho, i));
  }
  return acc / static_cast<double>(data.total_shots());
}

/// Gradient of the single-shot loss at rho_bar: -A / tr(A rho_bar).
inline HermitianMatrix sample_loss_gradient(const MeasurementOperator& op,
                                            const DensityMatrix& rho_bar) {
  if (op.dim() != rho_bar.dim()) {
    throw InvalidArgumentError("sample_loss_gradient: dimension mismatch");
  }
  const double t = detail::checked_trace(op, rho_bar, 0);
  return op.hermitian().scaled(-1.0 / t);
}

/// Full-batch gradient: count-weighted average of the sample gradients.
inline HermitianMatrix nll_gradient(const ShotDataset& data, const DensityMatrix& rho) {
  if (data.dim() != rho.dim()) {
    throw InvalidArgumentError("nll_gradient: dimension mismatch");
  }
  if (data.empty()) {
    throw InvalidArgumentError("nll_gradient: dataset is empty");
  }
  HermitianMatrix acc = HermitianMatrix::zero(data.dim());
  for (std::size_t i = 0; i < data.entries().size(); ++i) {
    const auto& entry = data.entries()[i];
    const double t = detail::checked_trace(entry.op, rho, i);
    acc += entry.op.hermitian().scaled(-static_cast<double>(entry.count) / t);
  }
  return acc.scaled(1.0 / static_cast<double>(data.total_shots()));
}

/// <psi| rho |psi> for a unit vector psi, clamped to [0, 1].
inline double fidelity_pure(const ComplexVector& psi, const DensityMatrix& rho) {
  if (psi.size() != rho.dim()) {
    throw InvalidArgumentError("fidelity_pure: dimension mismatch");
  }
  if (std::abs(psi.norm() - 1.0) > 1e-10) {
    throw InvalidArgumentError("fidelity_pure: state vector must have unit norm");
  }
  const double value = (psi.adjoint() * rho.matrix() * psi).value().real();
  assert(value >= -1e-10 && value <= 1.0 + 1e-10);
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace qmle
