#include "sbx/corruption.hpp"

#include "sbx/error.hpp"

namespace sbx {

MaskingNoise::MaskingNoise(double d, SeededRng rng) : d_(d), rng_(std::move(rng)) {
  if (!(d >= 0.0 && d <= 1.0)) throw DomainError("masking probability must lie in [0, 1]");
}

namespace {

void mask_in_place(MaskingNoise& noise, std::span<double> x) {
  // One draw per coordinate regardless of d, so the stream position only
  // depends on how many values have been corrupted.
  for (double& v : x)
    if (noise.rng().next_unit() < noise.probability()) v = 0.0;
}

}  // namespace

Vector corrupt(MaskingNoise& noise, std::span<const double> x) {
  Vector out(x.begin(), x.end());
  mask_in_place(noise, out);
  return out;
}

Matrix corrupt_batch(MaskingNoise& noise, const Matrix& xs) {
  Matrix out = xs;
  for (std::size_t r = 0; r < out.rows(); ++r) mask_in_place(noise, out.row(r));
  return out;
}

}  // namespace sbx
