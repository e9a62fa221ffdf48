#pragma once

// Desk-scale experiment drivers: reconstruction error versus depth at a fixed
// bottleneck, and the auto-encoder against truncated-DCT cepstra at equal
// dimensionality.

#include <cstdint>
#include <string>
#include <vector>

#include "sbx/config.hpp"
#include "sbx/linalg.hpp"

namespace sbx {

/// Widths of the depth-`depth` variant: input, first depth-1 hidden widths, bottleneck.
std::vector<std::size_t> variant_dims(const ExperimentConfig& cfg, std::size_t n_bins,
                                      std::size_t depth);

/// Per-layer and fine-tuning hyperparameters for one run; seeds derive from `run_seed`.
TrainingConfig variant_training_config(const ExperimentConfig& cfg,
                                       std::vector<std::size_t> dims, std::uint64_t run_seed);

struct DepthRow {
  std::size_t depth = 0;
  std::uint64_t seed = 0;
  double train_mse = 0.0;  // all MSEs in the normalised network domain
  double valid_mse = 0.0;
  double test_mse = 0.0;
};

/// One row per (seed, depth), seeds outermost.
std::vector<DepthRow> run_depth_experiment(const ExperimentConfig& cfg, const Matrix& spectra);

struct BaselineRow {
  std::string method;  // "ae" or "dct"
  std::size_t k = 0;
  std::uint64_t seed = 0;
  double mean_lsd_db = 0.0;
  double mean_mse = 0.0;  // warped log-spectrum domain
};

struct BaselineResult {
  std::vector<BaselineRow> rows;  // per seed: ae row then dct row
  Matrix test_logspec;            // warped log spectra of the held-out frames
  Matrix dct_reconstruction;
  std::vector<Matrix> ae_reconstructions;  // one per seed
};

/// Throws DomainError when the configured k differs from the bottleneck width.
BaselineResult run_baseline_experiment(const ExperimentConfig& cfg, const Matrix& spectra);

}  // namespace sbx
