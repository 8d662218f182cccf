#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>

#include "qmle/hermitian.hpp"
#include "test_helpers.hpp"

using namespace qmle;
using test_util::max_abs_diff;
using test_util::random_hermitian;
using test_util::relative_frobenius_error;

namespace {

HermitianMatrix diag(std::initializer_list<double> values) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(values.size()),
                                        static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) {
    m(i, i) = v;
    ++i;
  }
  return hermitize(m);
}

}  // namespace

TEST_CASE("eig_hermitian sorts a diagonal spectrum ascending") {
  const SpectralDecomposition dec = eig_hermitian(diag({3.0, 1.0, 2.0}));
  REQUIRE(dec.eigenvalues(0) == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(dec.eigenvalues(1) == Catch::Approx(2.0).margin(1e-12));
  REQUIRE(dec.eigenvalues(2) == Catch::Approx(3.0).margin(1e-12));
  // Eigenvectors of a diagonal matrix form a permutation matrix up to phase.
  for (Eigen::Index c = 0; c < 3; ++c) {
    int nonzero = 0;
    for (Eigen::Index r = 0; r < 3; ++r) {
      const double mag = std::abs(dec.eigenvectors(r, c));
      if (mag > 0.5) {
        ++nonzero;
        REQUIRE(mag == Catch::Approx(1.0).margin(1e-12));
      } else {
        REQUIRE(mag <= 1e-12);
      }
    }
    REQUIRE(nonzero == 1);
  }
}

TEST_CASE("eig_hermitian of the identity is all ones") {
  const SpectralDecomposition dec = eig_hermitian(HermitianMatrix::identity(4));
  for (Eigen::Index i = 0; i < 4; ++i) {
    REQUIRE(dec.eigenvalues(i) == Catch::Approx(1.0).margin(1e-14));
  }
}

TEST_CASE("eig_hermitian reproduces the Pauli-X spectrum") {
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  const SpectralDecomposition dec = eig_hermitian(hermitize(x));
  REQUIRE(dec.eigenvalues(0) == Catch::Approx(-1.0).margin(1e-12));
  REQUIRE(dec.eigenvalues(1) == Catch::Approx(1.0).margin(1e-12));
  // Columns match (1, -1)/sqrt(2) and (1, 1)/sqrt(2) up to a global phase.
  ComplexVector minus(2), plus(2);
  minus << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  REQUIRE(std::abs(minus.dot(dec.eigenvectors.col(0))) == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(std::abs(plus.dot(dec.eigenvectors.col(1))) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("eig_hermitian invariants on random matrices") {
  SeededRng rng(101);
  for (const Eigen::Index d : {1, 2, 3, 5, 8}) {
    for (int rep = 0; rep < 10; ++rep) {
      const HermitianMatrix m = random_hermitian(d, rng);
      const SpectralDecomposition dec = eig_hermitian(m);
      for (Eigen::Index i = 1; i < d; ++i) {
        REQUIRE(dec.eigenvalues(i - 1) <= dec.eigenvalues(i));
      }
      const ComplexMatrix gram = dec.eigenvectors.adjoint() * dec.eigenvectors;
      REQUIRE(max_abs_diff(gram, ComplexMatrix::Identity(d, d)) <= 1e-10);
      const HermitianMatrix rebuilt = from_spectrum(dec.eigenvectors, dec.eigenvalues);
      REQUIRE(relative_frobenius_error(rebuilt.matrix(), m.matrix()) <= 1e-9);
    }
  }
}

TEST_CASE("trace_product closed cases") {
  REQUIRE(trace_product(HermitianMatrix::identity(2), HermitianMatrix::identity(2)) ==
          Catch::Approx(2.0).margin(1e-15));
  REQUIRE(trace_product(diag({1.0, 0.0}), diag({0.0, 1.0})) == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("trace_product matches the entrywise-sum oracle") {
  SeededRng rng(202);
  for (int rep = 0; rep < 20; ++rep) {
    const HermitianMatrix a = random_hermitian(4, rng);
    const HermitianMatrix b = random_hermitian(4, rng);
    Complex expected(0.0, 0.0);
    for (Eigen::Index j = 0; j < 4; ++j) {
      for (Eigen::Index k = 0; k < 4; ++k) {
        expected += a.matrix()(j, k) * b.matrix()(k, j);
      }
    }
    const double got = trace_product(a, b);
    REQUIRE(std::abs(got - expected.real()) <= 1e-12 * std::max(1.0, std::abs(expected.real())));
  }
}

TEST_CASE("trace_product symmetry and identity contraction") {
  SeededRng rng(303);
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::Index d = 2 + rep % 5;
    const HermitianMatrix a = random_hermitian(d, rng);
    const HermitianMatrix b = random_hermitian(d, rng);
    const double ab = trace_product(a, b);
    const double ba = trace_product(b, a);
    REQUIRE(std::abs(ab - ba) <= 1e-12 * std::max(1.0, std::abs(ab)));
    const double against_identity = trace_product(a, HermitianMatrix::identity(d));
    REQUIRE(std::abs(against_identity - a.trace_real()) <= 1e-12);
  }
}

TEST_CASE("trace_product rejects mismatched dimensions") {
  REQUIRE_THROWS_AS(trace_product(HermitianMatrix::identity(2), HermitianMatrix::identity(3)),
                    InvalidArgumentError);
}

TEST_CASE("from_spectrum with the identity basis builds a diagonal matrix") {
  RealVector values(2);
  values << -1.5, 4.0;
  const HermitianMatrix m = from_spectrum(ComplexMatrix::Identity(2, 2), values);
  REQUIRE(max_abs_diff(m.matrix(), diag({-1.5, 4.0}).matrix()) <= 1e-15);
}

TEST_CASE("from_spectrum rebuilds Pauli X from the Hadamard basis") {
  ComplexMatrix hadamard(2, 2);
  hadamard << 1, 1, 1, -1;
  hadamard /= std::sqrt(2.0);
  RealVector values(2);
  values << 1.0, -1.0;
  const HermitianMatrix m = from_spectrum(hadamard, values);
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  REQUIRE(max_abs_diff(m.matrix(), x) <= 1e-14);
}

TEST_CASE("from_spectrum rejects mismatched sizes and non-finite values") {
  RealVector values(3);
  values << 1, 2, 3;
  REQUIRE_THROWS_AS(from_spectrum(ComplexMatrix::Identity(2, 2), values), InvalidArgumentError);
  RealVector bad(2);
  bad << 1.0, std::numeric_limits<double>::infinity();
  REQUIRE_THROWS_AS(from_spectrum(ComplexMatrix::Identity(2, 2), bad), InvalidArgumentError);
}

TEST_CASE("hermitize leaves Hermitian input unchanged") {
  SeededRng rng(404);
  const HermitianMatrix m = random_hermitian(4, rng);
  const HermitianMatrix twice = hermitize(m.matrix());
  REQUIRE(std::memcmp(m.matrix().data(), twice.matrix().data(),
                      sizeof(Complex) * 16) == 0);
}

TEST_CASE("hermitize averages a strictly upper-triangular matrix") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  const HermitianMatrix h = hermitize(m);
  REQUIRE(h.matrix()(0, 1) == Complex(0.5, 0.0));
  REQUIRE(h.matrix()(1, 0) == Complex(0.5, 0.0));
  REQUIRE(h.matrix()(0, 0) == Complex(0.0, 0.0));
}

TEST_CASE("hermitize removes a tiny anti-Hermitian perturbation exactly") {
  // Dyadic entries keep every intermediate sum exactly representable, so the
  // cancellation (M + A) + (M + A)* = 2M is exact, not merely close.
  ComplexMatrix base(3, 3);
  base << Complex(0.25, 0), Complex(0.5, -0.75), Complex(1.0, 0.125),
      Complex(0.5, 0.75), Complex(-1.5, 0), Complex(0.0625, -0.5),
      Complex(1.0, -0.125), Complex(0.0625, 0.5), Complex(0.75, 0);
  // i * (real symmetric) * 2^-50 is anti-Hermitian and sums exactly with base.
  ComplexMatrix anti = ComplexMatrix::Zero(3, 3);
  const double tiny = std::ldexp(1.0, -50);  // ~8.9e-16
  anti(0, 1) = Complex(0.0, 3 * tiny);
  anti(1, 0) = Complex(0.0, 3 * tiny);
  anti(1, 2) = Complex(0.0, -5 * tiny);
  anti(2, 1) = Complex(0.0, -5 * tiny);
  anti(0, 0) = Complex(0.0, 7 * tiny);
  const HermitianMatrix cleaned = hermitize(base + anti);
  REQUIRE(max_abs_diff(cleaned.matrix(), base) == 0.0);
}

TEST_CASE("hermitize is idempotent bit-for-bit") {
  SeededRng rng(606);
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::Index d = 1 + rep % 6;
    const ComplexMatrix raw = test_util::random_complex_matrix(d, rng);
    const HermitianMatrix once = hermitize(raw);
    const HermitianMatrix twice = hermitize(once.matrix());
    REQUIRE(std::memcmp(once.matrix().data(), twice.matrix().data(),
                        sizeof(Complex) * static_cast<std::size_t>(d * d)) == 0);
  }
}

TEST_CASE("hermitize output has exact conjugate symmetry") {
  SeededRng rng(707);
  const HermitianMatrix h = random_hermitian(5, rng);
  for (Eigen::Index j = 0; j < 5; ++j) {
    for (Eigen::Index k = 0; k < 5; ++k) {
      REQUIRE(h.matrix()(j, k) == std::conj(h.matrix()(k, j)));
    }
  }
}

TEST_CASE("hermitize rejects non-square and empty input") {
  REQUIRE_THROWS_AS(hermitize(ComplexMatrix::Zero(2, 3)), InvalidArgumentError);
  REQUIRE_THROWS_AS(hermitize(ComplexMatrix::Zero(0, 0)), InvalidArgumentError);
}

TEST_CASE("round trip through eig_hermitian and from_spectrum") {
  SeededRng rng(808);
  for (int rep = 0; rep < 15; ++rep) {
    const Eigen::Index d = 2 + rep % 7;
    const HermitianMatrix m = random_hermitian(d, rng);
    const SpectralDecomposition dec = eig_hermitian(m);
    const HermitianMatrix rebuilt = from_spectrum(dec.eigenvectors, dec.eigenvalues);
    REQUIRE(relative_frobenius_error(rebuilt.matrix(), m.matrix()) <= 1e-9);
  }
}
