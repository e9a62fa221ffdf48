#pragma once

// End-to-end glue shared by the CLI and the experiment drivers: raw power
// spectra -> warped log spectra -> normalised network inputs, and back.

#include <vector>

#include "sbx/config.hpp"
#include "sbx/io.hpp"
#include "sbx/linalg.hpp"
#include "sbx/training.hpp"

namespace sbx {

/// Warped log spectra of raw power frames, using the model's warp settings.
Matrix warp_frames(const Model& model, const Matrix& spectra);
/// Network inputs: warp then normalise.
Matrix preprocess(const Model& model, const Matrix& spectra);
/// Network outputs back in the warped log-spectrum domain.
Matrix postprocess(const Model& model, const Matrix& outputs);

/// Bottleneck features of raw spectra.
Matrix extract_features(const Model& model, const Matrix& spectra);
/// Reconstruction of raw spectra, in the warped log-spectrum domain.
Matrix reconstruct_logspec(const Model& model, const Matrix& spectra);

struct PretrainOutcome {
  Model model;
  std::vector<TrainReport> reports;
};

/// Fits normalisation on `train`, then runs greedy pretraining of every
/// configured layer.
PretrainOutcome pretrain_model(const TrainingConfig& cfg, const Matrix& train_spectra,
                               const Matrix& valid_spectra);

/// Fine-tunes `model` in place. The hyperparameters are recorded in the
/// model only if at least one epoch ran.
TrainReport finetune_model(Model& model, const Hyperparams& hp, const Matrix& train_spectra,
                           const Matrix& valid_spectra);

struct CorpusSplit {
  Matrix train;
  Matrix valid;
  Matrix test;
};

/// Contiguous split: first train_fraction of rows, then valid_fraction, then the rest.
CorpusSplit split_corpus(const Matrix& frames, double train_fraction, double valid_fraction);

}  // namespace sbx
