#pragma once

#include <cstdint>
#include <random>

#include "qmle/errors.hpp"

namespace qmle {

/// Deterministic randomness shared by the data generator and the stochastic
/// solver.
///
/// The engine is std::mt19937_64, whose raw output sequence is pinned by the
/// C++ standard. The derived draws below deliberately avoid
/// std::uniform_*_distribution, whose mapping from raw output is
/// implementation-defined and would make runs irreproducible across standard
/// libraries:
///
///   - uniform_index(n): one raw 64-bit draw reduced modulo n, with rejection
///     of the biased tail (values >= 2^64 - 2^64 mod n are redrawn).
///   - uniform_unit(): the top 53 bits of one raw draw scaled into [0, 1).
///
/// Consumers document their own draw order (stream discipline) next to the
/// sampling loops.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Unbiased draw from {0, ..., n - 1}.
  std::uint64_t uniform_index(std::uint64_t n) {
    if (n == 0) {
      throw InvalidArgumentError("uniform_index: n must be positive");
    }
    // Largest r accepted; everything above would over-represent small residues.
    const std::uint64_t all_ones = ~std::uint64_t{0};
    const std::uint64_t excess = (all_ones % n + 1) % n;  // 2^64 mod n
    const std::uint64_t bound = all_ones - excess;
    std::uint64_t r = engine_();
    while (r > bound) {
      r = engine_();
    }
    return r % n;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform_unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qmle
