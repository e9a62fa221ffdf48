#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gradient_oracle.hpp"
#include "sbx/error.hpp"
#include "sbx/spectral.hpp"

namespace sbx {
namespace {

Vector random_vector(SeededRng& rng, std::size_t n, double lo, double hi) {
  Vector v(n);
  for (double& x : v) x = lo + (hi - lo) * rng.next_unit();
  return v;
}

TEST(Bark, TraunmullerFormulaAndInverse) {
  EXPECT_DOUBLE_EQ(hz_to_bark(0.0), -0.53);
  EXPECT_NEAR(hz_to_bark(1000.0), 26.81 * 1000.0 / 2960.0 - 0.53, 1e-15);
  for (double f : {0.0, 50.0, 440.0, 3000.0, 12000.0, 24000.0})
    EXPECT_NEAR(bark_to_hz(hz_to_bark(f)), f, 1e-8 * (1.0 + f));
}

TEST(BarkWarp, NoneIsPlainLog) {
  const WarpSpec spec = make_warp_spec(4, 16000.0, WarpKind::None);
  const Vector s{1.0, std::exp(1.0), std::exp(-2.0), 0.0};
  const Vector out = bark_warp(s, spec);
  EXPECT_EQ(out[0], 0.0);
  EXPECT_DOUBLE_EQ(out[1], 1.0);
  EXPECT_DOUBLE_EQ(out[2], -2.0);
  EXPECT_DOUBLE_EQ(out[3], std::log(kPowerFloor));
}

TEST(BarkWarp, ConstantSpectrumStaysConstant) {
  const WarpSpec spec = make_warp_spec(129, 48000.0, WarpKind::Bark);
  for (double v : bark_warp(Vector(129, 3.5), spec)) EXPECT_DOUBLE_EQ(v, std::log(3.5));
}

TEST(BarkWarp, EndpointsMapExactly) {
  SeededRng rng(1);
  const WarpSpec spec = make_warp_spec(2049, 48000.0, WarpKind::Bark);
  const Vector s = random_vector(rng, 2049, 0.01, 100.0);
  const Vector out = bark_warp(s, spec);
  EXPECT_EQ(out.front(), std::log(s.front()));
  EXPECT_EQ(out.back(), std::log(s.back()));
}

TEST(BarkWarp, PositionsStrictlyIncreasingAndMonotonePreserved) {
  const WarpSpec spec = make_warp_spec(257, 48000.0, WarpKind::Bark);
  ASSERT_EQ(spec.positions.size(), 257u);
  for (std::size_t j = 1; j < spec.positions.size(); ++j)
    EXPECT_LT(spec.positions[j - 1], spec.positions[j]);
  EXPECT_EQ(spec.positions.front(), 0.0);
  EXPECT_EQ(spec.positions.back(), 256.0);
  // Low frequencies are stretched: early output bins read below bin 1.
  EXPECT_LT(spec.positions[5], 1.0);

  Vector decreasing(257);
  for (std::size_t i = 0; i < decreasing.size(); ++i) decreasing[i] = std::exp(-0.01 * static_cast<double>(i));
  const Vector out = bark_warp(decreasing, spec);
  for (std::size_t j = 1; j < out.size(); ++j) EXPECT_LE(out[j], out[j - 1]);
}

TEST(BarkWarp, ShapeMismatch) {
  const WarpSpec spec = make_warp_spec(16, 16000.0, WarpKind::Bark);
  EXPECT_THROW(bark_warp(Vector(15, 1.0), spec), DimensionError);
  EXPECT_THROW(make_warp_spec(1, 16000.0, WarpKind::Bark), DomainError);
}

TEST(Gcn, AllZeroMatrixFloorsScale) {
  const GcnStats s = gcn_fit(Matrix(3, 4), std::nullopt);
  EXPECT_EQ(s.mean, 0.0);
  EXPECT_EQ(s.scale, kScaleFloor);
  EXPECT_EQ(s.range, 1.0);
}

TEST(Gcn, PlusMinusOneHasUnitScale) {
  const Matrix m{{-1, 1}, {1, -1}};
  const GcnStats s = gcn_fit(m, std::nullopt);
  EXPECT_EQ(s.mean, 0.0);
  EXPECT_EQ(s.scale, 1.0);
}

TEST(Gcn, StandardisesCorpus) {
  SeededRng rng(4);
  const Matrix m = testing::random_matrix(rng, 50, 20, 7.0);
  Matrix shifted = m;
  for (double& v : shifted.data()) v += 3.0;
  const GcnStats s = gcn_fit(shifted, std::nullopt);
  const Matrix z = gcn_apply(s, shifted);
  double mean = 0.0, sq = 0.0;
  for (double v : z.data()) mean += v;
  mean /= static_cast<double>(z.size());
  for (double v : z.data()) sq += (v - mean) * (v - mean);
  EXPECT_NEAR(mean, 0.0, 1e-12);
  EXPECT_NEAR(std::sqrt(sq / static_cast<double>(z.size())), 1.0, 1e-12);
}

TEST(Gcn, DefaultPeakKeepsCorpusInsideTanhRange) {
  SeededRng rng(5);
  const Matrix m = testing::random_matrix(rng, 80, 16, 20.0);
  const GcnStats s = gcn_fit(m);
  double peak = 0.0;
  for (double v : gcn_apply(s, m).data()) peak = std::max(peak, std::abs(v));
  EXPECT_LE(peak, kDefaultGcnPeak + 1e-12);
  EXPECT_NEAR(peak, kDefaultGcnPeak, 1e-12);
}

TEST(Gcn, ApplyInvertRoundTrip) {
  SeededRng rng(6);
  const Matrix m = testing::random_matrix(rng, 30, 10, 50.0);
  const GcnStats s = gcn_fit(m);
  const Matrix back = gcn_invert(s, gcn_apply(s, m));
  for (std::size_t i = 0; i < m.size(); ++i) EXPECT_NEAR(back.data()[i], m.data()[i], 1e-12);
  EXPECT_EQ(gcn_apply(s, Vector{s.mean})[0], 0.0);
  EXPECT_THROW(gcn_fit(Matrix()), DimensionError);
}

TEST(Dct, ConstantSpectrumIsDcOnly) {
  const std::size_t n = 32;
  const Vector c = cepstrum_from_logspec(Vector(n, 2.5), n);
  EXPECT_NEAR(c[0], 2.5 * std::sqrt(static_cast<double>(n)), 1e-12);
  for (std::size_t k = 1; k < n; ++k) EXPECT_NEAR(c[k], 0.0, 1e-12);
}

TEST(Dct, FullOrderRoundTrip) {
  SeededRng rng(7);
  for (std::size_t n : {1u, 2u, 17u, 64u, 513u}) {
    const Vector x = random_vector(rng, n, -20.0, 20.0);
    const Vector back = logspec_from_cepstrum(cepstrum_from_logspec(x, n), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(back[i], x[i], 1e-10);
  }
}

TEST(Dct, BasisCosineHasSingleCoefficient) {
  // Orthonormal DCT-II basis vector k = 3, evaluated independently.
  const std::size_t n = 24;
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = std::sqrt(2.0 / n) * std::cos(std::numbers::pi * 3.0 * (2.0 * i + 1.0) / (2.0 * n));
  const Vector c = cepstrum_from_logspec(x, n);
  for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(c[k], k == 3 ? 1.0 : 0.0, 1e-12);
}

TEST(Dct, MatchesDirectSummation) {
  SeededRng rng(8);
  const std::size_t n = 40;
  const Vector x = random_vector(rng, n, -3.0, 3.0);
  const Vector c = cepstrum_from_logspec(x, 10);
  for (std::size_t k = 0; k < 10; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      acc += x[i] * std::cos(std::numbers::pi * k * (i + 0.5) / n);
    acc *= k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    EXPECT_NEAR(c[k], acc, 1e-12);
  }
}

TEST(Dct, OrderBounds) {
  EXPECT_THROW(cepstrum_from_logspec(Vector(8, 1.0), 0), DomainError);
  EXPECT_THROW(cepstrum_from_logspec(Vector(8, 1.0), 9), DomainError);
  EXPECT_THROW(logspec_from_cepstrum(Vector(9, 1.0), 8), DimensionError);
}

TEST(Dct, ZeroCepstrumGivesZeroSpectrum) {
  for (double v : logspec_from_cepstrum(Vector(5, 0.0), 20)) EXPECT_EQ(v, 0.0);
}

TEST(Dct, TruncationErrorNonIncreasingInOrder) {
  SeededRng rng(9);
  const std::size_t n = 64;
  const Vector x = random_vector(rng, n, -5.0, 5.0);
  double prev = std::numeric_limits<double>::infinity();
  const Vector full = cepstrum_from_logspec(x, n);
  for (std::size_t order = 1; order <= n; ++order) {
    const Vector rec = logspec_from_cepstrum(cepstrum_from_logspec(x, order), n);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) err += (rec[i] - x[i]) * (rec[i] - x[i]);
    // Parseval: error energy equals the energy of the discarded coefficients.
    double discarded = 0.0;
    for (std::size_t k = order; k < n; ++k) discarded += full[k] * full[k];
    EXPECT_NEAR(err, discarded, 1e-9);
    EXPECT_LE(err, prev + 1e-12);
    prev = err;
  }
}

TEST(Lsd, IdenticalIsZero) {
  const Vector a{1.0, 2.0, 3.0};
  EXPECT_EQ(log_spectral_distortion(a, a), 0.0);
}

TEST(Lsd, TenfoldRatioIsTwentyDb) {
  SeededRng rng(10);
  const Vector a = random_vector(rng, 100, 0.001, 10.0);
  Vector b = a;
  for (double& v : b) v *= 10.0;
  EXPECT_NEAR(log_spectral_distortion(a, b), 20.0, 1e-9);
}

TEST(Lsd, SymmetricAndFloored) {
  SeededRng rng(11);
  const Vector a = random_vector(rng, 50, 0.0, 2.0), b = random_vector(rng, 50, 0.0, 2.0);
  EXPECT_EQ(log_spectral_distortion(a, b), log_spectral_distortion(b, a));
  // Both below the floor: treated as equal.
  EXPECT_EQ(log_spectral_distortion(Vector{0.0, 1e-12}, Vector{1e-11, 0.0}), 0.0);
  EXPECT_THROW(log_spectral_distortion(Vector{1.0}, Vector{1.0, 2.0}), DimensionError);
}

TEST(Lsd, LogDomainAgreesWithLinearDomain) {
  SeededRng rng(12);
  const Vector a = random_vector(rng, 64, 1e-3, 1e3), b = random_vector(rng, 64, 1e-3, 1e3);
  Vector la(64), lb(64);
  for (std::size_t i = 0; i < 64; ++i) {
    la[i] = std::log(a[i]);
    lb[i] = std::log(b[i]);
  }
  EXPECT_NEAR(log_spectral_distortion_log(la, lb), log_spectral_distortion(a, b), 1e-9);
}

TEST(CorpusLsd, MeanOfFrames) {
  const Matrix a{{1.0, 1.0}, {1.0, 1.0}};
  const Matrix b{{1.0, 1.0}, {10.0, 10.0}};
  const CorpusLsd r = corpus_lsd(a, b);
  ASSERT_EQ(r.per_frame.size(), 2u);
  EXPECT_EQ(r.per_frame[0], 0.0);
  EXPECT_NEAR(r.per_frame[1], 20.0, 1e-12);
  EXPECT_NEAR(r.mean, 10.0, 1e-12);
  EXPECT_EQ(corpus_lsd(a, a).mean, 0.0);
  const Matrix single{{0.5, 2.0, 4.0}}, other{{1.0, 1.0, 1.0}};
  EXPECT_EQ(corpus_lsd(single, other).mean, log_spectral_distortion(single.row(0), other.row(0)));
  EXPECT_THROW(corpus_lsd(a, single), DimensionError);
}

}  // namespace
}  // namespace sbx
