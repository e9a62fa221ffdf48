#pragma once

#include <span>

#include "sbx/linalg.hpp"
#include "sbx/rng.hpp"

namespace sbx {

/// Masking noise: each input dimension is independently set to 0.0 with
/// probability `d`. Surviving values are copied untouched (no rescaling).
///
/// Holds its own generator; one instance per training run.
class MaskingNoise {
 public:
  /// Throws DomainError unless 0 <= d <= 1.
  MaskingNoise(double d, SeededRng rng);

  double probability() const noexcept { return d_; }
  SeededRng& rng() noexcept { return rng_; }

 private:
  double d_;
  SeededRng rng_;
};

Vector corrupt(MaskingNoise& noise, std::span<const double> x);

/// Row-wise corrupt. Every call draws fresh masks.
Matrix corrupt_batch(MaskingNoise& noise, const Matrix& xs);

}  // namespace sbx
