#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "qmle/errors.hpp"
#include "qmle/hermitian.hpp"
#include "qmle/model.hpp"
#include "qmle/smd.hpp"

namespace qmle {

/// Default step size of the full-batch mirror descent oracle. The negative
/// log-likelihood is 1-smooth relative to the Burg entropy, so any step size
/// up to 1 descends; 0.5 leaves margin.
inline constexpr double kBatchMirrorDefaultEta = 0.5;

/// One fixed-point iteration of the classical R-rho-R scheme:
/// R(rho) = (1/n) sum_i count_i A_i / tr(A_i rho), then rho maps to
/// R rho R / tr(R rho R). R equals the negated likelihood gradient, and the
/// maximum-likelihood estimate is a fixed point. The two-sided product keeps
/// the output positive semi-definite.
inline DensityMatrix rpr_step(const ShotDataset& data, const DensityMatrix& rho) {
  const HermitianMatrix r = nll_gradient(data, rho).scaled(-1.0);
  const HermitianMatrix updated = hermitize(r.matrix() * rho.matrix() * r.matrix());
  const double trace = updated.trace_real();
  if (!(trace > 0.0) || !std::isfinite(trace)) {
    throw NumericDegeneracyError("rpr_step: tr(R rho R) must be positive");
  }
  return DensityMatrix::trusted(updated.scaled(1.0 / trace));
}

/// Deterministic full-batch mirror descent: rho_1 = I/d and
/// rho_{k+1} = mirror_step(full gradient at rho_k, center rho_k). Used as the
/// oracle that estimates the optimal value; no averaging is applied. Returns
/// all iterates rho_1 .. rho_{iterations+1}. The optional callback sees
/// (k, rho_{k+1}) right after step k completes.
inline std::vector<DensityMatrix> batch_mirror_descent(
    const ShotDataset& data, double eta, double newton_eps, std::uint64_t iterations,
    const std::function<void(std::uint64_t, const DensityMatrix&)>& on_iterate = {}) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw InvalidArgumentError("batch_mirror_descent: eta must be positive and finite");
  }
  if (data.empty()) {
    throw InvalidArgumentError("batch_mirror_descent: dataset is empty");
  }
  std::vector<DensityMatrix> iterates;
  iterates.reserve(iterations + 1);
  DensityMatrix rho = DensityMatrix::maximally_mixed(data.dim());
  HermitianMatrix rho_inv =
      HermitianMatrix::scaled_identity(data.dim(), static_cast<double>(data.dim()));
  iterates.push_back(rho);
  for (std::uint64_t k = 1; k <= iterations; ++k) {
    const HermitianMatrix gradient = nll_gradient(data, rho);
    MirrorStepResult step = mirror_step(gradient, rho, rho_inv, eta, newton_eps);
    rho = std::move(step.rho_next);
    rho_inv = std::move(step.rho_next_inv);
    if (on_iterate) {
      on_iterate(k, rho);
    }
    iterates.push_back(rho);
  }
  return iterates;
}

}  // namespace qmle
