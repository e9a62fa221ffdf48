#pragma once

// The `sbx` subcommands as callable functions. Each returns the process exit
// code: 0 success, 1 internal error, 2 usage or validation error. Messages go
// to the supplied streams.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "sbx/spectral.hpp"

namespace sbx::cli {

using Path = std::filesystem::path;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

struct PretrainOptions {
  Path config;
  Path train;
  std::optional<Path> valid;
  Path out;
  std::optional<Path> report;  // layer,epoch,train_loss,valid_loss
  std::optional<std::uint64_t> seed;
};

struct FinetuneOptions {
  Path config;
  Path model;
  Path train;
  std::optional<Path> valid;
  Path out;
  std::optional<Path> report;  // epoch,train_loss,valid_loss,best
  std::optional<std::uint64_t> seed;
};

struct CodecOptions {
  Path model;
  Path in;
  Path out;
};

struct EvalOptions {
  Path originals;
  Path reconstructions;
  std::optional<Path> report;  // frame,lsd_db,mse
  SpectrumDomain domain = SpectrumDomain::Log;
};

struct ExperimentOptions {
  Path config;
  Path data;
  std::optional<Path> out;       // CSV; stdout when absent
  std::optional<Path> dump_dir;  // exp-baseline only: held-out frames and reconstructions
  std::optional<std::uint64_t> seed;
};

struct SynthOptions {
  std::uint64_t seed = 0;
  std::size_t frames = 1000;
  std::size_t bins = 64;
  Path out;
};

int cmd_pretrain(const PretrainOptions& opt, std::ostream& out, std::ostream& err);
int cmd_finetune(const FinetuneOptions& opt, std::ostream& out, std::ostream& err);
int cmd_encode(const CodecOptions& opt, std::ostream& out, std::ostream& err);
int cmd_reconstruct(const CodecOptions& opt, std::ostream& out, std::ostream& err);
/// Writes the warped log spectra the model sees, for use with cmd_eval.
int cmd_warp(const CodecOptions& opt, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalOptions& opt, std::ostream& out, std::ostream& err);
int cmd_experiment_depth(const ExperimentOptions& opt, std::ostream& out, std::ostream& err);
int cmd_experiment_baseline(const ExperimentOptions& opt, std::ostream& out, std::ostream& err);
int cmd_synth(const SynthOptions& opt, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches.
int run(int argc, char** argv);

}  // namespace sbx::cli
