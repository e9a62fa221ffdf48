#pragma once

#include <cstddef>
#include <cstdint>

#include "sbx/linalg.hpp"

namespace sbx {

/// Desk-scale stand-in for a vocoder spectrum corpus.
///
/// Each frame is exp() of a smooth log envelope: an offset and spectral
/// tilt, 3 to 6 Gaussian bumps with random centre, width and height, and
/// low-amplitude white noise. Bins are strictly positive. Deterministic in
/// `seed`.
Matrix make_synthetic_corpus(std::uint64_t seed, std::size_t n_frames, std::size_t n_bins);

}  // namespace sbx
