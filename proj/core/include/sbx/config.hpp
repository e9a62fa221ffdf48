#pragma once

// Plain-text configuration: "[section]" headers followed by "key = value"
// lines. '#' starts a comment. Sections may repeat ([layer] appears once
// per layer, in order). Hyperparameter keys follow the usual short names:
//
//   lr  learning rate      m  momentum       b  batch size
//   s   seed               d  masking probability ("N.A" for none)
//
// plus max_epochs, patience and decoder (tanh | linear).

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sbx/spectral.hpp"
#include "sbx/training.hpp"

namespace sbx {

struct ConfigSection {
  std::string name;
  std::map<std::string, std::string> values;
  std::size_t line = 0;
};

std::vector<ConfigSection> parse_config(std::istream& in);
std::vector<ConfigSection> load_config(const std::filesystem::path& path);

/// [data] block.
struct DataConfig {
  WarpKind warp = WarpKind::Bark;
  double sample_rate = 48000.0;
  std::optional<double> gcn_peak = kDefaultGcnPeak;  // "none" disables range scaling
};

/// [data], one [layer] per layer (each with dims = in-out), optional [finetune].
struct TrainingConfig {
  DataConfig data;
  std::vector<std::size_t> dims;
  std::vector<Hyperparams> layers;
  std::optional<Hyperparams> finetune;
};

TrainingConfig training_config(const std::vector<ConfigSection>& sections);

/// The [finetune] block alone; other sections are ignored.
Hyperparams finetune_hparams(const std::vector<ConfigSection>& sections);

/// [data], [experiment], [pretrain], [finetune].
struct ExperimentConfig {
  DataConfig data;
  std::vector<std::uint64_t> seeds{1, 2, 3};
  std::size_t bottleneck = 8;
  std::vector<std::size_t> hidden;      // widths between input and bottleneck, outermost first
  std::vector<std::size_t> depths;      // empty: every depth from 1 to hidden.size() + 1
  std::optional<std::size_t> baseline_order;  // k for the DCT baseline; must equal bottleneck
  double train_fraction = 0.8;
  double valid_fraction = 0.1;
  Hyperparams pretrain;
  Hyperparams finetune;
};

ExperimentConfig experiment_config(const std::vector<ConfigSection>& sections);

}  // namespace sbx
