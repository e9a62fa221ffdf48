#include <benchmark/benchmark.h>

#include "sbx/sbx.hpp"

namespace {

using namespace sbx;

Matrix random_matrix(std::uint64_t seed, std::size_t rows, std::size_t cols) {
  SeededRng rng(seed);
  Matrix m(rows, cols);
  for (double& v : m.data()) v = 2.0 * rng.next_unit() - 1.0;
  return m;
}

void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix a = random_matrix(1, n, n), b = random_matrix(2, n, n);
  for (auto _ : state) benchmark::DoNotOptimize(matmul(a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n));
}
BENCHMARK(BM_Matmul)->Arg(64)->Arg(256);

// One minibatch of 100 through a 2049-wide first layer.
void BM_BackpropBatch(benchmark::State& state) {
  const auto hidden = static_cast<std::size_t>(state.range(0));
  Hyperparams hp;
  const Network net({initialize_layer(2049, hidden, hp)});
  const Matrix x = random_matrix(3, 100, 2049);
  for (auto _ : state) benchmark::DoNotOptimize(backprop_batch(net, x, x));
}
BENCHMARK(BM_BackpropBatch)->Arg(120)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_BackpropDeepStack(benchmark::State& state) {
  Hyperparams hp;
  const Network net({initialize_layer(64, 48, hp), initialize_layer(48, 24, hp), initialize_layer(24, 8, hp)});
  const Matrix x = random_matrix(4, 20, 64);
  for (auto _ : state) benchmark::DoNotOptimize(backprop_batch(net, x, x));
}
BENCHMARK(BM_BackpropDeepStack);

void BM_CorruptBatch(benchmark::State& state) {
  MaskingNoise noise(0.1, SeededRng(5));
  const Matrix x = random_matrix(6, 100, 2049);
  for (auto _ : state) benchmark::DoNotOptimize(corrupt_batch(noise, x));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.size()));
}
BENCHMARK(BM_CorruptBatch);

void BM_DctTruncate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix logspec = random_matrix(7, 100, n);
  for (auto _ : state) benchmark::DoNotOptimize(dct_truncate(logspec, 8));
}
BENCHMARK(BM_DctTruncate)->Arg(64)->Arg(2049)->Unit(benchmark::kMillisecond);

void BM_BarkWarp(benchmark::State& state) {
  const WarpSpec spec = make_warp_spec(2049, 48000.0, WarpKind::Bark);
  const Matrix spectra = make_synthetic_corpus(8, 100, 2049);
  for (auto _ : state) benchmark::DoNotOptimize(bark_warp(spectra, spec));
}
BENCHMARK(BM_BarkWarp)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
