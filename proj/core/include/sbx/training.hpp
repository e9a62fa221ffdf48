#pragma once

// Greedy layer-wise pretraining, backpropagation through tied stacks and
// momentum SGD with validation-based early stopping.
//
// Objective: mean over batch rows and input dimensions of (z - x)², where x is
// always the clean example and z the reconstruction of the (possibly masked)
// input.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sbx/dae.hpp"
#include "sbx/linalg.hpp"
#include "sbx/rng.hpp"

namespace sbx {

struct Hyperparams {
  double lr = 0.01;
  double momentum = 0.0;
  std::size_t batch_size = 100;
  std::uint64_t seed = 0;
  std::optional<double> mask_d;  // absent: train on clean inputs
  std::size_t max_epochs = 1000;
  std::size_t patience = 20;
  Activation dec_act = Activation::Tanh;  // decoder non-linearity for new layers

  /// Throws DomainError on lr <= 0, momentum outside [0, 1), batch_size == 0,
  /// patience == 0 or a masking probability outside [0, 1].
  void validate() const;

  bool operator==(const Hyperparams&) const = default;
};

struct EpochLoss {
  std::size_t epoch = 0;  // 0 is the evaluation before the first update
  double train_loss = 0.0;
  double valid_loss = 0.0;
};

struct TrainReport {
  std::vector<EpochLoss> epoch_losses;
  std::size_t stopped_epoch = 0;  // last epoch that ran
  std::size_t best_epoch = 0;
  double best_valid_loss = 0.0;   // min over epoch_losses[*].valid_loss

  double initial_valid_loss() const {
    return epoch_losses.empty() ? best_valid_loss : epoch_losses.front().valid_loss;
  }
  double final_valid_loss() const {
    return epoch_losses.empty() ? best_valid_loss : epoch_losses.back().valid_loss;
  }
};

struct LayerGradient {
  Matrix dw;
  Vector db;
  Vector db_dec;
};

class GradientSet {
 public:
  GradientSet() = default;
  static GradientSet zeros_like(const Network& net);

  std::vector<LayerGradient>& layers() noexcept { return layers_; }
  const std::vector<LayerGradient>& layers() const noexcept { return layers_; }

  /// Throws DimensionError unless every tensor matches the network's shapes.
  void check_congruent(const Network& net) const;

 private:
  std::vector<LayerGradient> layers_;
};

struct Gradients {
  double loss = 0.0;
  GradientSet grads;
};

/// Loss and exact gradient for one example: (1/n) Σ (z - target)² with
/// z = reconstruct(net, input). Each tied W receives the sum of its encoder
/// and decoder contributions.
Gradients backprop_gradients(const Network& net, std::span<const double> input,
                             std::span<const double> target);

/// Batch form: mean over rows of the per-example objective.
Gradients backprop_batch(const Network& net, const Matrix& inputs, const Matrix& targets);

/// Classical momentum: v <- momentum·v - lr·g; θ <- θ + v.
void sgd_step(Network& net, const GradientSet& grads, GradientSet& velocity,
              const Hyperparams& hp);

/// Fresh layer: W uniform in ±sqrt(6 / (in + out)), zero biases.
LayerParams initialize_layer(std::size_t in_dim, std::size_t out_dim, const Hyperparams& hp);

struct LayerTrainResult {
  LayerParams layer;
  TrainReport report;
};

/// Trains one tied auto-encoder layer on `train` (masked when hp.mask_d is
/// set) against the clean rows, early-stopping on `valid`. An empty `valid`
/// falls back to the training loss.
LayerTrainResult pretrain_layer(const Matrix& train, const Matrix& valid, std::size_t in_dim,
                                std::size_t out_dim, const Hyperparams& hp);

Matrix encode_dataset(const LayerParams& layer, const Matrix& xs);
Matrix encode_dataset(const Network& net, const Matrix& xs);

struct StackResult {
  Network net;
  std::vector<TrainReport> reports;
};

/// Greedy stack: layer k is trained on the clean encodings produced by the
/// already trained layers 0..k-1. `hps` holds one entry per layer.
StackResult pretrain_stack(const Matrix& train, const Matrix& valid,
                           std::span<const std::size_t> dims, std::span<const Hyperparams> hps);

/// Whole-network backpropagation on clean inputs. On return `net` holds the
/// parameters with the lowest validation loss seen (including the starting
/// point). max_epochs == 0 leaves `net` untouched and returns an empty report.
TrainReport finetune(Network& net, const Matrix& train, const Matrix& valid,
                     const Hyperparams& hp);

}  // namespace sbx
