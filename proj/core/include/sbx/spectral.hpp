#pragma once

// Spectral preprocessing (Bark warping, global contrast normalisation), the
// truncated-DCT cepstral baseline and log-spectral distortion.
//
// Conventions: "spectra" are linear power values; "log spectra" are natural
// logarithms of power, floored at kPowerFloor before the log.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sbx/linalg.hpp"

namespace sbx {

inline constexpr double kPowerFloor = 1e-10;
inline constexpr double kScaleFloor = 1e-8;
inline constexpr double kDefaultGcnPeak = 0.95;

enum class WarpKind { Bark, None };

std::string_view to_string(WarpKind k) noexcept;
WarpKind parse_warp_kind(std::string_view name);

/// Traunmüller's approximation: 26.81 f / (1960 + f) - 0.53.
double hz_to_bark(double hz) noexcept;
double bark_to_hz(double bark) noexcept;

struct WarpSpec {
  std::size_t n_bins = 0;
  double sample_rate = 0.0;
  WarpKind kind = WarpKind::None;
  /// Fractional source-bin index read by each output bin; strictly
  /// increasing from 0 to n_bins - 1. Empty for WarpKind::None.
  std::vector<double> positions;

  bool operator==(const WarpSpec&) const = default;
};

/// Builds the resampling table: output bins are evenly spaced on the Bark
/// axis between 0 Hz and sample_rate / 2. Source bins span the same range
/// linearly in Hz.
WarpSpec make_warp_spec(std::size_t n_bins, double sample_rate, WarpKind kind);

/// Log power spectrum resampled onto the warped axis with linear interpolation.
Vector bark_warp(std::span<const double> spectrum, const WarpSpec& spec);
Matrix bark_warp(const Matrix& spectra, const WarpSpec& spec);

/// Corpus-level normalisation x' = (x - mean) / (scale · range).
///
/// `scale` is the standard deviation of every entry of the fitting corpus.
/// `range` additionally squeezes the corpus into (-1, 1) so a tanh output
/// layer can reach it; it is 1 when fitting without a peak target.
struct GcnStats {
  double mean = 0.0;
  double scale = 1.0;
  double range = 1.0;

  bool operator==(const GcnStats&) const = default;
};

/// `peak`: largest |x'| over the fitting corpus after apply. nullopt leaves
/// range at 1 (plain standardisation). Throws DimensionError when empty.
GcnStats gcn_fit(const Matrix& frames, std::optional<double> peak = kDefaultGcnPeak);

Vector gcn_apply(const GcnStats& stats, std::span<const double> x);
Vector gcn_invert(const GcnStats& stats, std::span<const double> x);
Matrix gcn_apply(const GcnStats& stats, const Matrix& xs);
Matrix gcn_invert(const GcnStats& stats, const Matrix& xs);

/// Orthonormal DCT-II of length n with a cached basis table.
class Dct {
 public:
  explicit Dct(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  /// First `order` coefficients. Throws DomainError unless 1 <= order <= n.
  Vector forward(std::span<const double> x, std::size_t order) const;
  /// Zero-pads `coeffs` to n and applies the inverse transform.
  Vector inverse(std::span<const double> coeffs) const;

 private:
  std::size_t n_;
  std::vector<double> basis_;  // basis_[k * n + i]
};

Vector cepstrum_from_logspec(std::span<const double> logspec, std::size_t order);
Vector logspec_from_cepstrum(std::span<const double> cep, std::size_t n_bins);

/// Reconstruction of every row from its first `order` DCT coefficients.
Matrix dct_truncate(const Matrix& logspecs, std::size_t order);

/// RMS over bins of 20·log10(a_i / b_i), in dB. Inputs are linear power,
/// floored at kPowerFloor.
double log_spectral_distortion(std::span<const double> a, std::span<const double> b);
/// Same distortion for natural-log spectra.
double log_spectral_distortion_log(std::span<const double> log_a, std::span<const double> log_b);

enum class SpectrumDomain { Linear, Log };

struct CorpusLsd {
  double mean = 0.0;
  std::vector<double> per_frame;
};

/// Per-row distortion and its arithmetic mean. Throws DimensionError when the
/// matrices differ in shape or hold no rows.
CorpusLsd corpus_lsd(const Matrix& originals, const Matrix& reconstructions,
                     SpectrumDomain domain = SpectrumDomain::Linear);

}  // namespace sbx
