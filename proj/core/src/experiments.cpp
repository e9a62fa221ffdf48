#include "sbx/experiments.hpp"

#include "sbx/error.hpp"
#include "sbx/pipeline.hpp"
#include "sbx/rng.hpp"
#include "sbx/spectral.hpp"

namespace sbx {

namespace {

constexpr std::uint64_t kLayerSeedStream = 10;
constexpr std::uint64_t kFinetuneSeedStream = 99;

struct TrainedVariant {
  Model model;
  CorpusSplit split;
};

TrainedVariant train_variant(const ExperimentConfig& cfg, const CorpusSplit& split,
                             std::size_t depth, std::uint64_t seed) {
  const TrainingConfig tc =
      variant_training_config(cfg, variant_dims(cfg, split.train.cols(), depth), seed);
  PretrainOutcome pre = pretrain_model(tc, split.train, split.valid);
  finetune_model(pre.model, *tc.finetune, split.train, split.valid);
  return {std::move(pre.model), split};
}

double network_mse(const Model& model, const Matrix& spectra) {
  if (spectra.rows() == 0) return 0.0;
  const Matrix x = preprocess(model, spectra);
  return loss_mse(x, reconstruct(model.net, x));
}

}  // namespace

std::vector<std::size_t> variant_dims(const ExperimentConfig& cfg, std::size_t n_bins,
                                      std::size_t depth) {
  if (depth < 1 || depth > cfg.hidden.size() + 1)
    throw DomainError("depth " + std::to_string(depth) + " unavailable with " +
                      std::to_string(cfg.hidden.size()) + " hidden widths");
  std::vector<std::size_t> dims{n_bins};
  dims.insert(dims.end(), cfg.hidden.begin(), cfg.hidden.begin() + static_cast<long>(depth - 1));
  dims.push_back(cfg.bottleneck);
  return dims;
}

TrainingConfig variant_training_config(const ExperimentConfig& cfg,
                                       std::vector<std::size_t> dims, std::uint64_t run_seed) {
  TrainingConfig tc;
  tc.data = cfg.data;
  tc.dims = std::move(dims);
  for (std::size_t k = 0; k + 1 < tc.dims.size(); ++k) {
    Hyperparams hp = cfg.pretrain;
    hp.seed = SeededRng::derive(run_seed, kLayerSeedStream + k).next_u64();
    tc.layers.push_back(hp);
  }
  Hyperparams ft = cfg.finetune;
  ft.seed = SeededRng::derive(run_seed, kFinetuneSeedStream).next_u64();
  tc.finetune = ft;
  return tc;
}

std::vector<DepthRow> run_depth_experiment(const ExperimentConfig& cfg, const Matrix& spectra) {
  const CorpusSplit split = split_corpus(spectra, cfg.train_fraction, cfg.valid_fraction);
  if (split.train.rows() == 0) throw DimensionError("empty dataset");
  std::vector<std::size_t> depths = cfg.depths;
  if (depths.empty())
    for (std::size_t d = 1; d <= cfg.hidden.size() + 1; ++d) depths.push_back(d);

  std::vector<DepthRow> rows;
  for (const auto seed : cfg.seeds) {
    for (const auto depth : depths) {
      const TrainedVariant v = train_variant(cfg, split, depth, seed);
      rows.push_back({depth, seed, network_mse(v.model, split.train),
                      network_mse(v.model, split.valid), network_mse(v.model, split.test)});
    }
  }
  return rows;
}

BaselineResult run_baseline_experiment(const ExperimentConfig& cfg, const Matrix& spectra) {
  const std::size_t k = cfg.baseline_order.value_or(cfg.bottleneck);
  if (k != cfg.bottleneck)
    throw DomainError("baseline order " + std::to_string(k) + " differs from bottleneck " +
                      std::to_string(cfg.bottleneck));
  const CorpusSplit split = split_corpus(spectra, cfg.train_fraction, cfg.valid_fraction);
  if (split.train.rows() == 0) throw DimensionError("empty dataset");
  if (split.test.rows() == 0) throw DimensionError("empty test split");
  if (k > spectra.cols()) throw DomainError("k exceeds the number of bins");

  BaselineResult result;
  const WarpSpec warp = make_warp_spec(spectra.cols(), cfg.data.sample_rate, cfg.data.warp);
  result.test_logspec = bark_warp(split.test, warp);
  result.dct_reconstruction = dct_truncate(result.test_logspec, k);
  const CorpusLsd dct_lsd =
      corpus_lsd(result.test_logspec, result.dct_reconstruction, SpectrumDomain::Log);
  const double dct_mse = loss_mse(result.test_logspec, result.dct_reconstruction);

  for (const auto seed : cfg.seeds) {
    const TrainedVariant v = train_variant(cfg, split, cfg.hidden.size() + 1, seed);
    Matrix rec = reconstruct_logspec(v.model, split.test);
    const CorpusLsd ae_lsd = corpus_lsd(result.test_logspec, rec, SpectrumDomain::Log);
    result.rows.push_back({"ae", k, seed, ae_lsd.mean, loss_mse(result.test_logspec, rec)});
    result.rows.push_back({"dct", k, seed, dct_lsd.mean, dct_mse});
    result.ae_reconstructions.push_back(std::move(rec));
  }
  return result;
}

}  // namespace sbx
