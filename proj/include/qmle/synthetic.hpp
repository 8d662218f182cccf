#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qmle/errors.hpp"
#include "qmle/hermitian.hpp"
#include "qmle/model.hpp"
#include "qmle/pauli.hpp"
#include "qmle/rng.hpp"

namespace qmle {

/// Normalized complex amplitude vector.
class PureState {
 public:
  explicit PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() < 1) {
      throw InvalidArgumentError("PureState: empty amplitude vector");
    }
    if (std::abs(amplitudes_.norm() - 1.0) > 1e-12) {
      throw InvalidArgumentError("PureState: amplitudes must have unit 2-norm");
    }
  }

  const ComplexVector& amplitudes() const { return amplitudes_; }
  Eigen::Index dim() const { return amplitudes_.size(); }

 private:
  ComplexVector amplitudes_;
};

/// q-qubit W state: amplitude 1/sqrt(q) on each basis state with exactly one
/// qubit excited, i.e. on indices 2^k (little-endian).
inline PureState w_state(int qubits) {
  if (qubits < 1) {
    throw InvalidArgumentError("w_state: qubit count must be at least 1");
  }
  const Eigen::Index d = Eigen::Index{1} << qubits;
  ComplexVector amplitudes = ComplexVector::Zero(d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(qubits));
  for (int k = 0; k < qubits; ++k) {
    amplitudes(Eigen::Index{1} << k) = amp;
  }
  return PureState(std::move(amplitudes));
}

/// Outcome probability tr(A rho), clamped to [0, 1]. A value outside
/// [-1e-9, 1 + 1e-9] before clamping means A is not a valid outcome operator
/// for a normalized state and is reported as such.
inline double born_probability(const MeasurementOperator& op, const DensityMatrix& rho) {
  if (op.dim() != rho.dim()) {
    throw InvalidArgumentError("born_probability: dimension mismatch");
  }
  const double raw = trace_product(op.hermitian(), rho.hermitian());
  if (raw < -1e-9 || raw > 1.0 + 1e-9) {
    throw ModelViolationError("born_probability: tr(A rho) = " + std::to_string(raw) +
                              " is outside [0, 1]");
  }
  return std::clamp(raw, 0.0, 1.0);
}

/// One aggregated measurement record: a Pauli word, an outcome sign, and how
/// often the pair was observed.
struct ShotRecord {
  PauliString pauli;
  int outcome;  ///< +1 or -1
  std::uint64_t count;
};

enum class PauliSampling {
  kUniformRandom,    ///< each shot draws a word uniformly from the 4^q - 1 non-identity words
  kExhaustiveCycle,  ///< shots cycle deterministically through the non-identity words in index order
};

/// Rebuilds the dense outcome operators from aggregated records. The same
/// routine backs both the generator and the file reader, so a round-tripped
/// dataset reconstructs bit-identical operators.
inline ShotDataset build_dataset(const std::vector<ShotRecord>& records, int qubits) {
  if (qubits < 1) {
    throw InvalidArgumentError("build_dataset: qubit count must be at least 1");
  }
  const Eigen::Index d = Eigen::Index{1} << qubits;
  std::vector<ShotDataset::Entry> entries;
  entries.reserve(records.size());
  for (const ShotRecord& record : records) {
    if (record.pauli.qubits() != qubits) {
      throw InvalidArgumentError("build_dataset: record qubit count mismatch");
    }
    if (record.outcome != 1 && record.outcome != -1) {
      throw InvalidArgumentError("build_dataset: outcome must be +1 or -1");
    }
    auto [plus, minus] = outcome_operators(record.pauli);
    entries.push_back({record.outcome == 1 ? std::move(plus) : std::move(minus), record.count});
  }
  return ShotDataset(d, std::move(entries));
}

/// Simulates num_shots Pauli measurements of rho_true and aggregates identical
/// (word, outcome) pairs. Records come back sorted by (word index, +1 before -1).
///
/// Draw order per shot: first the Pauli word (one uniform_index(4^q - 1) draw,
/// skipped when cycling exhaustively), then the outcome (one uniform_unit()
/// draw compared against the +1 probability). Identical seeds reproduce the
/// dataset bit for bit.
inline std::vector<ShotRecord> sample_shots(const DensityMatrix& rho_true,
                                            std::uint64_t num_shots, std::uint64_t seed,
                                            PauliSampling sampling = PauliSampling::kUniformRandom) {
  if (num_shots < 1) {
    throw InvalidArgumentError("sample_shots: at least one shot required");
  }
  const Eigen::Index d = rho_true.dim();
  if (d < 2 || (d & (d - 1)) != 0) {
    throw InvalidArgumentError("sample_shots: state dimension must be a power of two, >= 2");
  }
  int qubits = 0;
  while ((Eigen::Index{1} << qubits) < d) {
    ++qubits;
  }
  const std::uint64_t num_words = (std::uint64_t{1} << (2 * qubits)) - 1;  // 4^q - 1

  SeededRng rng(seed);
  std::unordered_map<std::uint64_t, double> plus_probability;
  std::map<std::pair<std::uint64_t, int>, std::uint64_t> counts;
  for (std::uint64_t shot = 0; shot < num_shots; ++shot) {
    const std::uint64_t word_index = sampling == PauliSampling::kUniformRandom
                                         ? 1 + rng.uniform_index(num_words)
                                         : 1 + shot % num_words;
    auto it = plus_probability.find(word_index);
    if (it == plus_probability.end()) {
      const PauliString word = PauliString::from_index(qubits, word_index);
      const double p = born_probability(outcome_operators(word).first, rho_true);
      it = plus_probability.emplace(word_index, p).first;
    }
    const int outcome = rng.uniform_unit() < it->second ? 1 : -1;
    ++counts[{word_index, -outcome}];  // -outcome orders +1 rows before -1 rows
  }

  std::vector<ShotRecord> records;
  records.reserve(counts.size());
  for (const auto& [key, count] : counts) {
    records.push_back({PauliString::from_index(qubits, key.first), -key.second, count});
  }
  return records;
}

}  // namespace qmle
