#include "sbx/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "sbx/error.hpp"
#include "sbx/rng.hpp"

namespace sbx {

namespace {

double uniform(SeededRng& rng, double lo, double hi) { return lo + (hi - lo) * rng.next_unit(); }

// Box-Muller, one normal per call.
double normal(SeededRng& rng) {
  const double u1 = 1.0 - rng.next_unit();  // (0, 1]
  const double u2 = rng.next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

Matrix make_synthetic_corpus(std::uint64_t seed, std::size_t n_frames, std::size_t n_bins) {
  if (n_bins < 2) throw DomainError("synthetic corpus needs at least two bins");
  SeededRng rng(seed);
  Matrix out(n_frames, n_bins);
  const double last = static_cast<double>(n_bins - 1);
  for (std::size_t r = 0; r < n_frames; ++r) {
    const double offset = uniform(rng, -1.0, 1.0);
    const double tilt = uniform(rng, -4.0, -1.0);
    const std::size_t n_bumps = 3 + rng.next_below(4);
    double centre[6], width[6], height[6];
    for (std::size_t j = 0; j < n_bumps; ++j) {
      centre[j] = uniform(rng, 0.0, 1.0);
      width[j] = uniform(rng, 0.04, 0.12);
      height[j] = uniform(rng, 0.5, 3.0);
    }
    auto row = out.row(r);
    for (std::size_t i = 0; i < n_bins; ++i) {
      const double x = static_cast<double>(i) / last;
      double log_power = offset + tilt * x + 0.02 * normal(rng);
      for (std::size_t j = 0; j < n_bumps; ++j) {
        const double t = (x - centre[j]) / width[j];
        log_power += height[j] * std::exp(-0.5 * t * t);
      }
      row[i] = std::exp(log_power);
    }
  }
  return out;
}

}  // namespace sbx
