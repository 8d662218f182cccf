#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "qmle/baselines.hpp"
#include "qmle/pauli.hpp"
#include "qmle/synthetic.hpp"
#include "test_helpers.hpp"

using namespace qmle;
using test_util::max_abs_diff;
using test_util::random_density;
using test_util::trace_distance;

namespace {

constexpr double kBinomialFStar = 0.5623351446188083;  // -(3/4)ln(3/4) - (1/4)ln(1/4)

ShotDataset binomial_dataset() {
  const auto ops = outcome_operators(PauliString("Z"));
  std::vector<ShotDataset::Entry> entries;
  entries.push_back({ops.first, 3});
  entries.push_back({ops.second, 1});
  return ShotDataset(2, std::move(entries));
}

DensityMatrix binomial_mle() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 0.75;
  m(1, 1) = 0.25;
  return DensityMatrix::validated(hermitize(m));
}

ShotDataset identity_dataset(Eigen::Index d, std::uint64_t count) {
  std::vector<ShotDataset::Entry> entries;
  entries.push_back({MeasurementOperator::validated(HermitianMatrix::identity(d)), count});
  return ShotDataset(d, std::move(entries));
}

}  // namespace

TEST_CASE("rpr_step fixes any state under the identity dataset") {
  SeededRng rng(41);
  const ShotDataset data = identity_dataset(3, 7);
  const DensityMatrix rho = random_density(3, rng);
  const DensityMatrix next = rpr_step(data, rho);
  REQUIRE(max_abs_diff(next.matrix(), rho.matrix()) <= 1e-12);
}

TEST_CASE("rpr_step arithmetic on a rank-one dataset") {
  // R = diag(2, 0), R rho R = diag(2, 0), normalized to diag(1, 0).
  std::vector<ShotDataset::Entry> entries;
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 0) = 1.0;
  entries.push_back({MeasurementOperator::validated(hermitize(a)), 1});
  const ShotDataset data(2, std::move(entries));
  const DensityMatrix next = rpr_step(data, DensityMatrix::maximally_mixed(2));
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected(0, 0) = 1.0;
  REQUIRE(max_abs_diff(next.matrix(), expected) <= 1e-14);
}

TEST_CASE("rpr_step preserves the density-matrix constraints") {
  SeededRng rng(42);
  const PureState psi = w_state(2);
  const ShotDataset data =
      build_dataset(sample_shots(DensityMatrix::pure(psi.amplitudes()), 300, 4), 2);
  for (int rep = 0; rep < 10; ++rep) {
    const DensityMatrix next = rpr_step(data, random_density(4, rng));
    REQUIRE(std::abs(next.hermitian().trace_real() - 1.0) <= 1e-10);
    REQUIRE(eig_hermitian(next.hermitian()).eigenvalues.minCoeff() >= -1e-10);
  }
}

TEST_CASE("rpr_step is stationary at the closed-form binomial MLE") {
  const DensityMatrix mle = binomial_mle();
  const DensityMatrix next = rpr_step(binomial_dataset(), mle);
  REQUIRE((next.matrix() - mle.matrix()).norm() <= 1e-8);
}

TEST_CASE("rpr_step alternates on complementary two-outcome data") {
  // With commuting complementary projectors the two-sided update is an
  // involution on the outcome probabilities: from I/2 the diagonal swings
  // between (1/2, 1/2) and (9/10, 1/10) forever instead of contracting
  // toward the fixed point diag(3/4, 1/4).
  const ShotDataset data = binomial_dataset();
  DensityMatrix rho = DensityMatrix::maximally_mixed(2);
  const DensityMatrix first = rpr_step(data, rho);
  REQUIRE(first.matrix()(0, 0).real() == Catch::Approx(0.9).margin(1e-12));
  const DensityMatrix second = rpr_step(data, first);
  REQUIRE(second.matrix()(0, 0).real() == Catch::Approx(0.5).margin(1e-12));

  rho = DensityMatrix::maximally_mixed(2);
  for (int k = 0; k < 200; ++k) {
    rho = rpr_step(data, rho);
  }
  // 200 iterations land back on the p = 0.9 branch, far from the MLE value.
  REQUIRE(rho.matrix()(0, 0).real() == Catch::Approx(0.9).margin(1e-9));
  REQUIRE(nll(data, rho) > kBinomialFStar + 0.05);
}

TEST_CASE("rpr_step propagates singular likelihoods") {
  std::vector<ShotDataset::Entry> entries;
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 0) = 1.0;
  entries.push_back({MeasurementOperator::validated(hermitize(a)), 1});
  const ShotDataset data(2, std::move(entries));
  ComplexMatrix s = ComplexMatrix::Zero(2, 2);
  s(1, 1) = 1.0;
  const DensityMatrix rho = DensityMatrix::validated(hermitize(s));
  REQUIRE_THROWS_AS(rpr_step(data, rho), SingularLikelihoodError);
}

TEST_CASE("batch_mirror_descent stays at I/d on the identity dataset") {
  const ShotDataset data = identity_dataset(4, 5);
  const auto iterates = batch_mirror_descent(data, 0.5, 1e-9, 20);
  REQUIRE(iterates.size() == 21);
  for (const DensityMatrix& rho : iterates) {
    REQUIRE(max_abs_diff(rho.matrix(), DensityMatrix::maximally_mixed(4).matrix()) <= 1e-10);
  }
}

TEST_CASE("batch_mirror_descent converges to the binomial optimum") {
  const ShotDataset data = binomial_dataset();
  const auto iterates = batch_mirror_descent(data, 0.5, 1e-10, 400);
  const double final_f = nll(data, iterates.back());
  REQUIRE(std::abs(final_f - kBinomialFStar) <= 1e-9);
  REQUIRE(trace_distance(iterates.back().hermitian(), binomial_mle().hermitian()) <= 1e-6);
}

TEST_CASE("batch_mirror_descent objective is monotone after burn-in on the binomial instance") {
  const ShotDataset data = binomial_dataset();
  const auto iterates = batch_mirror_descent(data, 0.5, 1e-9, 100);
  double previous = nll(data, iterates[1]);
  for (std::size_t k = 2; k < iterates.size(); ++k) {
    const double value = nll(data, iterates[k]);
    REQUIRE(value <= previous + 1e-12);
    previous = value;
  }
}

TEST_CASE("batch_mirror_descent with zero iterations returns only the initial state") {
  const auto iterates = batch_mirror_descent(binomial_dataset(), 0.5, 1e-9, 0);
  REQUIRE(iterates.size() == 1);
  REQUIRE(max_abs_diff(iterates.front().matrix(),
                       DensityMatrix::maximally_mixed(2).matrix()) == 0.0);
}

TEST_CASE("batch_mirror_descent validates its arguments") {
  REQUIRE_THROWS_AS(batch_mirror_descent(binomial_dataset(), 0.0, 1e-9, 5),
                    InvalidArgumentError);
  const ShotDataset empty(2, {});
  REQUIRE_THROWS_AS(batch_mirror_descent(empty, 0.5, 1e-9, 5), InvalidArgumentError);
}

TEST_CASE("batch mirror descent and the stochastic solver agree on the binomial minimizer") {
  const ShotDataset data = binomial_dataset();
  const auto batch = batch_mirror_descent(data, 0.5, 1e-10, 400);
  REQUIRE(trace_distance(batch.back().hermitian(), binomial_mle().hermitian()) <= 1e-6);

  // The stochastic average approaches the same point; at this horizon the
  // agreement is statistical rather than exact.
  const std::uint64_t horizon = 20000;
  const DensityMatrix avg =
      run_smd(data, SolverConfig{step_size_for_horizon(2, horizon), horizon, 1e-9, 2});
  REQUIRE(trace_distance(avg.hermitian(), binomial_mle().hermitian()) <= 0.05);
}
