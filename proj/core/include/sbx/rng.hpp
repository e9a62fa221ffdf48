#pragma once

#include <cstdint>
#include <random>

#include "sbx/linalg.hpp"

namespace sbx {

/// Seeded pseudo-random source.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The conversions to doubles, Bernoulli draws and bounded integers
/// are implemented here rather than with <random> distributions, which are
/// implementation-defined, so streams are identical on every toolchain.
class SeededRng {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64";

  explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [0, bound). Rejection sampling, so unbiased.
  std::uint64_t next_below(std::uint64_t bound);

  /// Independent generator for a named sub-stream of `seed`.
  static SeededRng derive(std::uint64_t seed, std::uint64_t stream);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// `count` samples in [lo, hi). Throws DomainError unless lo < hi.
Vector rng_uniform(SeededRng& rng, double lo, double hi, std::size_t count);

/// `count` samples in {0, 1} with P(1) = p. Throws DomainError unless 0 <= p <= 1.
Vector rng_bernoulli(SeededRng& rng, double p, std::size_t count);

/// Fisher-Yates shuffle driven by `rng`.
void shuffle_indices(SeededRng& rng, std::span<std::size_t> indices);

}  // namespace sbx
