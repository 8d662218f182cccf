#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "qmle/errors.hpp"
#include "qmle/hermitian.hpp"
#include "qmle/model.hpp"

namespace qmle {

/// Tensor-product word over {I, X, Y, Z}, one letter per qubit. Letter k acts
/// on qubit k, and qubit k is the k-th least significant bit of the
/// computational-basis index (little-endian). The base-4 encoding below uses
/// digit k for letter k with I=0, X=1, Y=2, Z=3, so index 0 is the all-I word.
class PauliString {
 public:
  explicit PauliString(std::string letters) : letters_(std::move(letters)) {
    if (letters_.empty()) {
      throw InvalidArgumentError("PauliString: at least one letter required");
    }
    for (char c : letters_) {
      if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
        throw InvalidArgumentError(std::string("PauliString: invalid letter '") + c + "'");
      }
    }
  }

  static PauliString from_index(int qubits, std::uint64_t index) {
    if (qubits < 1) {
      throw InvalidArgumentError("PauliString: qubit count must be at least 1");
    }
    static constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};
    std::string letters(static_cast<std::size_t>(qubits), 'I');
    for (int k = 0; k < qubits; ++k) {
      letters[static_cast<std::size_t>(k)] = kLetters[index % 4];
      index /= 4;
    }
    if (index != 0) {
      throw InvalidArgumentError("PauliString: index out of range for qubit count");
    }
    return PauliString(std::move(letters));
  }

  std::uint64_t index() const {
    std::uint64_t value = 0;
    for (int k = qubits() - 1; k >= 0; --k) {
      value = value * 4 + static_cast<std::uint64_t>(code(letters_[static_cast<std::size_t>(k)]));
    }
    return value;
  }

  int qubits() const { return static_cast<int>(letters_.size()); }
  const std::string& letters() const { return letters_; }

  bool is_identity() const { return letters_.find_first_not_of('I') == std::string::npos; }

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.letters_ == b.letters_;
  }

 private:
  static int code(char letter) {
    switch (letter) {
      case 'I': return 0;
      case 'X': return 1;
      case 'Y': return 2;
      default: return 3;
    }
  }

  std::string letters_;
};

namespace detail {

inline ComplexMatrix single_qubit_pauli(char letter) {
  ComplexMatrix m(2, 2);
  switch (letter) {
    case 'I':
      m << 1, 0, 0, 1;
      break;
    case 'X':
      m << 0, 1, 1, 0;
      break;
    case 'Y':
      m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
      break;
    default:  // 'Z'
      m << 1, 0, 0, -1;
      break;
  }
  return m;
}

inline ComplexMatrix kronecker(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace detail

/// Dense matrix of the Pauli word. Folding kron(P_k, acc) for ascending k
/// places letter k on bit k of the basis index, matching the little-endian
/// convention above. Hermitian and involutory; traceless unless all-I.
inline HermitianMatrix pauli_matrix(const PauliString& p) {
  ComplexMatrix acc = ComplexMatrix::Identity(1, 1);
  for (char letter : p.letters()) {
    acc = detail::kronecker(detail::single_qubit_pauli(letter), acc);
  }
  return hermitize(acc);
}

/// Projectors (I +- P)/2 onto the +1 and -1 eigenspaces of the Pauli word.
/// Both have rank d/2 and sum to the identity. The all-I word is rejected:
/// its outcome is deterministic and carries no information.
inline std::pair<MeasurementOperator, MeasurementOperator> outcome_operators(
    const PauliString& p) {
  if (p.is_identity()) {
    throw InvalidArgumentError("outcome_operators: the identity word has no informative outcome");
  }
  const HermitianMatrix pauli = pauli_matrix(p);
  const Eigen::Index d = pauli.dim();
  const ComplexMatrix identity = ComplexMatrix::Identity(d, d);
  return {MeasurementOperator::trusted(hermitize(0.5 * (identity + pauli.matrix()))),
          MeasurementOperator::trusted(hermitize(0.5 * (identity - pauli.matrix())))};
}

}  // namespace qmle
