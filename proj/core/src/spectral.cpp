#include "sbx/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sbx/error.hpp"

namespace sbx {

std::string_view to_string(WarpKind k) noexcept { return k == WarpKind::Bark ? "bark" : "none"; }

WarpKind parse_warp_kind(std::string_view name) {
  if (name == "bark") return WarpKind::Bark;
  if (name == "none") return WarpKind::None;
  throw FormatError("unknown warp kind '" + std::string(name) + "'");
}

double hz_to_bark(double hz) noexcept { return 26.81 * hz / (1960.0 + hz) - 0.53; }

double bark_to_hz(double bark) noexcept { return 1960.0 * (bark + 0.53) / (26.28 - bark); }

WarpSpec make_warp_spec(std::size_t n_bins, double sample_rate, WarpKind kind) {
  if (n_bins < 2) throw DomainError("warp needs at least two bins");
  if (!(sample_rate > 0.0)) throw DomainError("sample rate must be positive");
  WarpSpec spec{n_bins, sample_rate, kind, {}};
  if (kind == WarpKind::None) return spec;

  const double nyquist = sample_rate / 2.0;
  const double lo = hz_to_bark(0.0);
  const double hi = hz_to_bark(nyquist);
  const double last = static_cast<double>(n_bins - 1);
  spec.positions.resize(n_bins);
  for (std::size_t j = 0; j < n_bins; ++j) {
    const double bark = lo + (hi - lo) * static_cast<double>(j) / last;
    spec.positions[j] = std::clamp(bark_to_hz(bark) / nyquist * last, 0.0, last);
  }
  // Endpoints map exactly onto the first and last source bins.
  spec.positions.front() = 0.0;
  spec.positions.back() = last;
  return spec;
}

Vector bark_warp(std::span<const double> spectrum, const WarpSpec& spec) {
  if (spectrum.size() != spec.n_bins)
    throw DimensionError("bark_warp: spectrum has " + std::to_string(spectrum.size()) +
                         " bins, warp expects " + std::to_string(spec.n_bins));
  Vector logspec(spectrum.size());
  for (std::size_t i = 0; i < spectrum.size(); ++i)
    logspec[i] = std::log(std::max(spectrum[i], kPowerFloor));
  if (spec.kind == WarpKind::None) return logspec;

  Vector out(spec.n_bins);
  const std::size_t last = spec.n_bins - 1;
  for (std::size_t j = 0; j < spec.n_bins; ++j) {
    const double p = spec.positions[j];
    const auto i0 = std::min(static_cast<std::size_t>(p), last);
    if (i0 == last) {
      out[j] = logspec[last];
      continue;
    }
    const double frac = p - static_cast<double>(i0);
    out[j] = frac == 0.0 ? logspec[i0] : logspec[i0] + frac * (logspec[i0 + 1] - logspec[i0]);
  }
  return out;
}

Matrix bark_warp(const Matrix& spectra, const WarpSpec& spec) {
  Matrix out(spectra.rows(), spec.n_bins);
  for (std::size_t r = 0; r < spectra.rows(); ++r) {
    const Vector row = bark_warp(spectra.row(r), spec);
    std::copy(row.begin(), row.end(), out.row(r).begin());
  }
  return out;
}

GcnStats gcn_fit(const Matrix& frames, std::optional<double> peak) {
  if (frames.empty()) throw DimensionError("gcn_fit: empty matrix");
  if (peak && !(*peak > 0.0 && *peak < 1.0)) throw DomainError("gcn_fit: peak must lie in (0, 1)");
  const auto data = frames.data();
  const double n = static_cast<double>(data.size());
  double sum = 0.0;
  for (double v : data) sum += v;
  const double mean = sum / n;
  double sq = 0.0;
  double max_dev = 0.0;
  for (double v : data) {
    sq += (v - mean) * (v - mean);
    max_dev = std::max(max_dev, std::abs(v - mean));
  }
  GcnStats stats{mean, std::max(std::sqrt(sq / n), kScaleFloor), 1.0};
  if (peak && max_dev > 0.0) stats.range = max_dev / stats.scale / *peak;
  return stats;
}

Vector gcn_apply(const GcnStats& stats, std::span<const double> x) {
  const double denom = stats.scale * stats.range;
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - stats.mean) / denom;
  return out;
}

Vector gcn_invert(const GcnStats& stats, std::span<const double> x) {
  const double denom = stats.scale * stats.range;
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * denom + stats.mean;
  return out;
}

Matrix gcn_apply(const GcnStats& stats, const Matrix& xs) {
  return Matrix(xs.rows(), xs.cols(), gcn_apply(stats, xs.data()));
}

Matrix gcn_invert(const GcnStats& stats, const Matrix& xs) {
  return Matrix(xs.rows(), xs.cols(), gcn_invert(stats, xs.data()));
}

Dct::Dct(std::size_t n) : n_(n), basis_(n * n) {
  if (n == 0) throw DomainError("DCT length must be positive");
  const double dc = std::sqrt(1.0 / static_cast<double>(n));
  const double ac = std::sqrt(2.0 / static_cast<double>(n));
  const std::size_t period = 4 * n;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      // cos(pi k (2i+1) / 2n) with the angle reduced modulo 2 pi first.
      const std::size_t m = (k * (2 * i + 1)) % period;
      const double angle = std::numbers::pi * static_cast<double>(m) / (2.0 * static_cast<double>(n));
      basis_[k * n + i] = (k == 0 ? dc : ac) * std::cos(angle);
    }
  }
}

Vector Dct::forward(std::span<const double> x, std::size_t order) const {
  if (x.size() != n_)
    throw DimensionError("DCT of length " + std::to_string(n_) + " applied to " +
                         std::to_string(x.size()) + " values");
  if (order < 1 || order > n_)
    throw DomainError("cepstral order " + std::to_string(order) + " outside [1, " +
                      std::to_string(n_) + "]");
  Vector c(order, 0.0);
  for (std::size_t k = 0; k < order; ++k) {
    const double* b = basis_.data() + k * n_;
    double acc = 0.0;
    for (std::size_t i = 0; i < n_; ++i) acc += b[i] * x[i];
    c[k] = acc;
  }
  return c;
}

Vector Dct::inverse(std::span<const double> coeffs) const {
  if (coeffs.size() > n_)
    throw DimensionError(std::to_string(coeffs.size()) + " cepstral coefficients exceed " +
                         std::to_string(n_) + " bins");
  Vector x(n_, 0.0);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const double* b = basis_.data() + k * n_;
    for (std::size_t i = 0; i < n_; ++i) x[i] += coeffs[k] * b[i];
  }
  return x;
}

Vector cepstrum_from_logspec(std::span<const double> logspec, std::size_t order) {
  if (order < 1 || order > logspec.size())
    throw DomainError("cepstral order " + std::to_string(order) + " outside [1, " +
                      std::to_string(logspec.size()) + "]");
  return Dct(logspec.size()).forward(logspec, order);
}

Vector logspec_from_cepstrum(std::span<const double> cep, std::size_t n_bins) {
  if (cep.size() > n_bins)
    throw DimensionError(std::to_string(cep.size()) + " cepstral coefficients exceed " +
                         std::to_string(n_bins) + " bins");
  return Dct(n_bins).inverse(cep);
}

Matrix dct_truncate(const Matrix& logspecs, std::size_t order) {
  const Dct dct(logspecs.cols());
  Matrix out(logspecs.rows(), logspecs.cols());
  for (std::size_t r = 0; r < logspecs.rows(); ++r) {
    const Vector rec = dct.inverse(dct.forward(logspecs.row(r), order));
    std::copy(rec.begin(), rec.end(), out.row(r).begin());
  }
  return out;
}

namespace {

void require_same_length(std::size_t a, std::size_t b) {
  if (a != b)
    throw DimensionError("spectra have " + std::to_string(a) + " and " + std::to_string(b) +
                         " bins");
  if (a == 0) throw DimensionError("log spectral distortion of empty spectra");
}

}  // namespace

double log_spectral_distortion(std::span<const double> a, std::span<const double> b) {
  require_same_length(a.size(), b.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double db = 20.0 * std::log10(std::max(a[i], kPowerFloor) / std::max(b[i], kPowerFloor));
    acc += db * db;
  }
  return std::sqrt(acc / static_cast<double>(a.size()));
}

double log_spectral_distortion_log(std::span<const double> log_a, std::span<const double> log_b) {
  require_same_length(log_a.size(), log_b.size());
  static const double log_floor = std::log(kPowerFloor);
  const double to_db = 20.0 / std::numbers::ln10;
  double acc = 0.0;
  for (std::size_t i = 0; i < log_a.size(); ++i) {
    const double db = to_db * (std::max(log_a[i], log_floor) - std::max(log_b[i], log_floor));
    acc += db * db;
  }
  return std::sqrt(acc / static_cast<double>(log_a.size()));
}

CorpusLsd corpus_lsd(const Matrix& originals, const Matrix& reconstructions, SpectrumDomain domain) {
  if (originals.rows() != reconstructions.rows())
    throw DimensionError("corpus_lsd: " + std::to_string(originals.rows()) + " originals vs " +
                         std::to_string(reconstructions.rows()) + " reconstructions");
  if (originals.rows() == 0) throw DimensionError("corpus_lsd: empty corpus");
  CorpusLsd out;
  out.per_frame.reserve(originals.rows());
  double sum = 0.0;
  for (std::size_t r = 0; r < originals.rows(); ++r) {
    const double d = domain == SpectrumDomain::Linear
                         ? log_spectral_distortion(originals.row(r), reconstructions.row(r))
                         : log_spectral_distortion_log(originals.row(r), reconstructions.row(r));
    out.per_frame.push_back(d);
    sum += d;
  }
  out.mean = sum / static_cast<double>(originals.rows());
  return out;
}

}  // namespace sbx
