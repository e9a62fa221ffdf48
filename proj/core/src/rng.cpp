#include "sbx/rng.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "sbx/error.hpp"

namespace sbx {

std::uint64_t SeededRng::next_below(std::uint64_t bound) {
  if (bound == 0) throw DomainError("next_below: bound must be positive");
  // Largest multiple of bound representable; draws at or above it are rejected.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

SeededRng SeededRng::derive(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finaliser over (seed, stream).
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  z ^= z >> 31;
  return SeededRng(z);
}

Vector rng_uniform(SeededRng& rng, double lo, double hi, std::size_t count) {
  if (!(lo < hi)) throw DomainError("rng_uniform: requires lo < hi");
  Vector out(count);
  const double width = hi - lo;
  for (auto& v : out) {
    v = lo + width * rng.next_unit();
    if (v >= hi) v = std::nextafter(hi, lo);  // rounding can land exactly on hi
  }
  return out;
}

Vector rng_bernoulli(SeededRng& rng, double p, std::size_t count) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("rng_bernoulli: p must lie in [0, 1]");
  Vector out(count);
  for (auto& v : out) v = rng.next_unit() < p ? 1.0 : 0.0;
  return out;
}

void shuffle_indices(SeededRng& rng, std::span<std::size_t> indices) {
  for (std::size_t i = indices.size(); i > 1; --i) {
    const std::size_t j = rng.next_below(i);
    std::swap(indices[i - 1], indices[j]);
  }
}

}  // namespace sbx
