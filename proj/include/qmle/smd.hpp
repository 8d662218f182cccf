#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>

#include "qmle/errors.hpp"
#include "qmle/hermitian.hpp"
#include "qmle/model.hpp"
#include "qmle/rng.hpp"

namespace qmle {

/// Parameters of one stochastic mirror descent run.
struct SolverConfig {
  double eta = 0.0;             ///< step size, must be > 0
  std::uint64_t horizon = 1;    ///< number of iterations T
  double newton_eps = 1e-9;     ///< Newton decrement target of the mirror step
  std::uint64_t seed = 0;       ///< seed of the shot-sampling stream
};

/// Step size from the convergence guarantee for a horizon fixed in advance:
/// sqrt(d log T) / (sqrt(T) + sqrt(d log T)). Always in (0, 1). Requires
/// T >= 2 so that log T > 0.
inline double step_size_for_horizon(Eigen::Index dim, std::uint64_t horizon) {
  if (dim < 1) {
    throw InvalidArgumentError("step_size_for_horizon: dimension must be at least 1");
  }
  if (horizon < 2) {
    throw InvalidArgumentError("step_size_for_horizon: horizon must be at least 2");
  }
  const double d_log_t = static_cast<double>(dim) * std::log(static_cast<double>(horizon));
  const double root = std::sqrt(d_log_t);
  return root / (std::sqrt(static_cast<double>(horizon)) + root);
}

/// Expected optimization error guaranteed after T iterations at the step size
/// above: 2 sqrt(d log T / T) + d log T / T.
inline double theoretical_error_bound(Eigen::Index dim, std::uint64_t horizon) {
  if (dim < 1) {
    throw InvalidArgumentError("theoretical_error_bound: dimension must be at least 1");
  }
  if (horizon < 2) {
    throw InvalidArgumentError("theoretical_error_bound: horizon must be at least 2");
  }
  const double ratio =
      static_cast<double>(dim) * std::log(static_cast<double>(horizon)) / static_cast<double>(horizon);
  return 2.0 * std::sqrt(ratio) + ratio;
}

struct SimplexRoot {
  double theta;
  int iterations;
};

/// Root of phi'(theta) = 1 - sum_i 1/(theta + lambda_i) by Newton's method on
/// the real line, stopping once the Newton decrement |phi'| / sqrt(phi'')
/// drops below eps.
///
/// phi(theta) = theta - sum_i log(theta + lambda_i) is convex on the domain
/// theta > -min_i lambda_i, phi' is increasing and concave there, and the
/// initialization theta_0 = 1 - min_i lambda_i sits at or left of the root, so
/// the iteration approaches the root monotonically from below. The domain
/// guard (step halving) is therefore dormant in exact arithmetic; it exists to
/// turn rounding pathologies into diagnosable failures instead of NaNs.
inline SimplexRoot log_barrier_simplex_root(const RealVector& lambdas, double eps) {
  if (lambdas.size() < 1) {
    throw InvalidArgumentError("log_barrier_simplex_root: empty eigenvalue vector");
  }
  if (!(eps > 0.0)) {
    throw InvalidArgumentError("log_barrier_simplex_root: eps must be positive");
  }
  if (!lambdas.allFinite()) {
    throw InvalidArgumentError("log_barrier_simplex_root: eigenvalues must be finite");
  }
  constexpr int kMaxIterations = 200;
  constexpr int kMaxHalvings = 60;

  const double lambda_min = lambdas.minCoeff();
  double theta = 1.0 - lambda_min;
  for (int iter = 0;; ++iter) {
    const auto shifted = (lambdas.array() + theta).eval();
    const double phi1 = 1.0 - shifted.inverse().sum();
    const double phi2 = shifted.inverse().square().sum();
    if (std::abs(phi1) / std::sqrt(phi2) < eps) {
      return SimplexRoot{theta, iter};
    }
    if (iter == kMaxIterations) {
      throw ConvergenceError("log_barrier_simplex_root: iteration cap (200) exceeded");
    }
    double step = phi1 / phi2;
    double candidate = theta - step;
    int halvings = 0;
    while (candidate + lambda_min <= 0.0) {
      if (++halvings > kMaxHalvings) {
        throw ConvergenceError(
            "log_barrier_simplex_root: cannot keep the Newton iterate inside the barrier domain");
      }
      step *= 0.5;
      candidate = theta - step;
    }
    theta = candidate;
  }
}

/// Diagnostics of one mirror step.
struct MirrorStepInternals {
  double theta = 0.0;
  int newton_iterations = 0;
  RealVector shifted_eigenvalues;  ///< theta + lambda_i, ascending; the spectrum of rho_next_inv
};

struct MirrorStepResult {
  DensityMatrix rho_next;
  HermitianMatrix rho_next_inv;
  MirrorStepInternals internals;
};

/// Exact mirror step: argmin_{rho in D} eta tr(g (rho - rho_t)) + D_h(rho, rho_t)
/// with h the Burg entropy -log det.
///
/// Computed spectrally: eigendecompose eta g + rho_t^{-1}, shift the spectrum
/// by the Newton root theta so the inverse shifted spectrum sums to one, and
/// reconstruct. The inverse is maintained spectrally as U diag(theta + lambda) U*
/// rather than by matrix inversion, which also makes the stationarity identity
/// rho_next^{-1} = theta I + eta g + rho_t^{-1} hold to reconstruction accuracy.
inline MirrorStepResult mirror_step(const HermitianMatrix& gradient, const DensityMatrix& rho,
                                    const HermitianMatrix& rho_inv, double eta,
                                    double newton_eps) {
  if (gradient.dim() != rho.dim() || rho_inv.dim() != rho.dim()) {
    throw InvalidArgumentError("mirror_step: dimension mismatch");
  }
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    throw InvalidArgumentError("mirror_step: eta must be non-negative and finite");
  }
  HermitianMatrix target = hermitize(eta * gradient.matrix() + rho_inv.matrix());
  SpectralDecomposition dec = eig_hermitian(target);
  const SimplexRoot root = log_barrier_simplex_root(dec.eigenvalues, newton_eps);

  RealVector shifted = dec.eigenvalues.array() + root.theta;
  const RealVector next_spectrum = shifted.array().inverse();

  MirrorStepResult result{
      DensityMatrix::trusted(from_spectrum(dec.eigenvectors, next_spectrum)),
      from_spectrum(dec.eigenvectors, shifted),
      MirrorStepInternals{root.theta, root.iterations, std::move(shifted)}};
  return result;
}

/// Stochastic mirror descent with the Burg entropy over a shot dataset.
///
/// Per iteration t: accumulate rho_t into the running sum, form the anytime
/// average rho_bar_t = sum/t, report it, sample one shot uniformly over the n
/// recorded shots (count-weighted over unique operators), take the stochastic
/// gradient at rho_bar_t, and mirror-step from Bregman center rho_t. The
/// gradient point and the Bregman center are deliberately different; that is
/// what makes every reported average a valid output.
///
/// Sampling stream: exactly one uniform_index(total_shots) draw per iteration
/// from a SeededRng constructed with config.seed.
class SmdSolver {
 public:
  using AverageCallback = std::function<void(std::uint64_t, const DensityMatrix&)>;

  SmdSolver(const ShotDataset& data, const SolverConfig& config)
      : data_(&data),
        config_(config),
        rng_(config.seed),
        rho_(DensityMatrix::maximally_mixed(data.dim())),
        rho_inv_(HermitianMatrix::scaled_identity(data.dim(), static_cast<double>(data.dim()))),
        iterate_sum_(HermitianMatrix::zero(data.dim())),
        average_(rho_) {
    if (data.empty()) {
      throw InvalidArgumentError("SmdSolver: dataset must contain at least one shot");
    }
    if (!(config.eta > 0.0) || !std::isfinite(config.eta)) {
      throw InvalidArgumentError("SmdSolver: step size must be positive and finite");
    }
    if (!(config.newton_eps > 0.0)) {
      throw InvalidArgumentError("SmdSolver: newton_eps must be positive");
    }
    if (config.horizon < 1) {
      throw InvalidArgumentError("SmdSolver: horizon must be at least 1");
    }
  }

  /// Runs one full iteration. The callback, if any, receives (t, rho_bar_t)
  /// after the average is formed and before the shot is sampled.
  void advance(const AverageCallback& on_average = {}) {
    const std::uint64_t t = completed_ + 1;
    iterate_sum_ += rho_.hermitian();
    average_ = DensityMatrix::trusted(
        hermitize(iterate_sum_.matrix() * (1.0 / static_cast<double>(t))));
    if (on_average) {
      on_average(t, average_);
    }
    last_shot_ = rng_.uniform_index(data_->total_shots());
    last_entry_ = data_->entry_for_shot(last_shot_);
    const HermitianMatrix gradient =
        sample_loss_gradient(data_->entries()[last_entry_].op, average_);
    MirrorStepResult step = mirror_step(gradient, rho_, rho_inv_, config_.eta, config_.newton_eps);
    rho_ = std::move(step.rho_next);
    rho_inv_ = std::move(step.rho_next_inv);
    last_internals_ = std::move(step.internals);
    completed_ = t;
  }

  std::uint64_t completed() const { return completed_; }
  const SolverConfig& config() const { return config_; }

  /// rho_bar_t of the last completed iteration.
  const DensityMatrix& average() const { return average_; }
  /// The next Bregman center rho_{t+1}.
  const DensityMatrix& iterate() const { return rho_; }
  const HermitianMatrix& iterate_inverse() const { return rho_inv_; }
  const HermitianMatrix& iterate_sum() const { return iterate_sum_; }
  const MirrorStepInternals& last_internals() const { return last_internals_; }
  std::uint64_t last_shot() const { return last_shot_; }
  std::size_t last_entry() const { return last_entry_; }

 private:
  const ShotDataset* data_;
  SolverConfig config_;
  SeededRng rng_;
  DensityMatrix rho_;
  HermitianMatrix rho_inv_;
  HermitianMatrix iterate_sum_;
  DensityMatrix average_;
  MirrorStepInternals last_internals_;
  std::uint64_t last_shot_ = 0;
  std::size_t last_entry_ = 0;
  std::uint64_t completed_ = 0;
};

/// Runs config.horizon iterations and returns the final average rho_bar_T.
inline DensityMatrix run_smd(const ShotDataset& data, const SolverConfig& config,
                             const SmdSolver::AverageCallback& on_average = {}) {
  SmdSolver solver(data, config);
  for (std::uint64_t t = 0; t < config.horizon; ++t) {
    solver.advance(on_average);
  }
  return solver.average();
}

}  // namespace qmle
