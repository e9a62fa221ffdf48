#include "sbx/pipeline.hpp"

#include <cmath>
#include <numeric>

#include "sbx/error.hpp"

namespace sbx {

Matrix warp_frames(const Model& model, const Matrix& spectra) {
  if (spectra.cols() != model.net.input_dim())
    throw DimensionError("frames have " + std::to_string(spectra.cols()) +
                         " dims, model expects " + std::to_string(model.net.input_dim()));
  return bark_warp(spectra, model.warp_spec());
}

Matrix preprocess(const Model& model, const Matrix& spectra) {
  return gcn_apply(model.gcn, warp_frames(model, spectra));
}

Matrix postprocess(const Model& model, const Matrix& outputs) { return gcn_invert(model.gcn, outputs); }

Matrix extract_features(const Model& model, const Matrix& spectra) {
  return encode(model.net, preprocess(model, spectra));
}

Matrix reconstruct_logspec(const Model& model, const Matrix& spectra) {
  return postprocess(model, reconstruct(model.net, preprocess(model, spectra)));
}

PretrainOutcome pretrain_model(const TrainingConfig& cfg, const Matrix& train_spectra,
                               const Matrix& valid_spectra) {
  if (train_spectra.rows() == 0) throw DimensionError("empty dataset");
  if (cfg.dims.empty() || train_spectra.cols() != cfg.dims.front())
    throw DimensionError("training frames have " + std::to_string(train_spectra.cols()) +
                         " dims, config expects " +
                         std::to_string(cfg.dims.empty() ? 0 : cfg.dims.front()));
  if (valid_spectra.rows() > 0 && valid_spectra.cols() != train_spectra.cols())
    throw DimensionError("validation frames have " + std::to_string(valid_spectra.cols()) +
                         " dims, training frames have " + std::to_string(train_spectra.cols()));

  const WarpSpec warp = make_warp_spec(cfg.dims.front(), cfg.data.sample_rate, cfg.data.warp);
  const Matrix train_log = bark_warp(train_spectra, warp);
  PretrainOutcome out;
  out.model.warp_kind = cfg.data.warp;
  out.model.sample_rate = cfg.data.sample_rate;
  out.model.gcn = gcn_fit(train_log, cfg.data.gcn_peak);
  out.model.layer_hparams = cfg.layers;

  const Matrix train = gcn_apply(out.model.gcn, train_log);
  const Matrix valid = valid_spectra.rows() > 0
                           ? gcn_apply(out.model.gcn, bark_warp(valid_spectra, warp))
                           : Matrix();
  StackResult stack = pretrain_stack(train, valid, cfg.dims, cfg.layers);
  out.model.net = std::move(stack.net);
  out.reports = std::move(stack.reports);
  return out;
}

TrainReport finetune_model(Model& model, const Hyperparams& hp, const Matrix& train_spectra,
                           const Matrix& valid_spectra) {
  if (train_spectra.rows() == 0) throw DimensionError("empty dataset");
  const Matrix train = preprocess(model, train_spectra);
  const Matrix valid = valid_spectra.rows() > 0 ? preprocess(model, valid_spectra) : Matrix();
  TrainReport report = finetune(model.net, train, valid, hp);
  if (report.stopped_epoch > 0) model.finetune_hparams = hp;
  return report;
}

CorpusSplit split_corpus(const Matrix& frames, double train_fraction, double valid_fraction) {
  const std::size_t n = frames.rows();
  const auto n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n)));
  const auto n_valid = std::min(
      n - n_train, static_cast<std::size_t>(std::floor(valid_fraction * static_cast<double>(n))));
  auto rows = [&frames](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> idx(end - begin);
    std::iota(idx.begin(), idx.end(), begin);
    return select_rows(frames, idx);
  };
  return {rows(0, n_train), rows(n_train, n_train + n_valid), rows(n_train + n_valid, n)};
}

}  // namespace sbx
