#include "sbx/training.hpp"

#include <cmath>
#include <numeric>

#include "sbx/corruption.hpp"
#include "sbx/error.hpp"

namespace sbx {

namespace {

// Sub-streams of a run seed.
constexpr std::uint64_t kInitStream = 0;
constexpr std::uint64_t kShuffleStream = 1;
constexpr std::uint64_t kMaskStream = 2;

void require_shape(const Matrix& m, std::size_t rows, std::size_t cols, const char* what) {
  if (m.rows() != rows || m.cols() != cols)
    throw DimensionError(std::string(what) + " has shape " + m.shape() + ", expected " +
                         std::to_string(rows) + "x" + std::to_string(cols));
}

void require_length(const Vector& v, std::size_t n, const char* what) {
  if (v.size() != n)
    throw DimensionError(std::string(what) + " has length " + std::to_string(v.size()) +
                         ", expected " + std::to_string(n));
}

void add_column_sums(const Matrix& m, Vector& out) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) out[j] += row[j];
  }
}

// In place: delta <- delta ⊙ act'(output).
void scale_by_slope(Matrix& delta, const Matrix& output, Activation act) {
  if (act == Activation::Linear) return;
  auto d = delta.data();
  const auto o = output.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] *= activation_slope(act, o[i]);
}

void accumulate(Matrix& into, const Matrix& add) {
  auto dst = into.data();
  const auto src = add.data();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

}  // namespace

void Hyperparams::validate() const {
  if (!(lr > 0.0)) throw DomainError("learning rate must be positive");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw DomainError("momentum must lie in [0, 1)");
  if (batch_size == 0) throw DomainError("batch size must be at least 1");
  if (patience == 0) throw DomainError("patience must be at least 1");
  if (mask_d && !(*mask_d >= 0.0 && *mask_d <= 1.0))
    throw DomainError("masking probability must lie in [0, 1]");
}

GradientSet GradientSet::zeros_like(const Network& net) {
  GradientSet g;
  for (const auto& layer : net.layers())
    g.layers_.push_back({Matrix(layer.w.rows(), layer.w.cols()), Vector(layer.b.size(), 0.0),
                         Vector(layer.b_dec.size(), 0.0)});
  return g;
}

void GradientSet::check_congruent(const Network& net) const {
  if (layers_.size() != net.depth())
    throw DimensionError("gradient set has " + std::to_string(layers_.size()) +
                         " layers, network has " + std::to_string(net.depth()));
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    const auto& p = net.layer(k);
    require_shape(layers_[k].dw, p.w.rows(), p.w.cols(), "weight gradient");
    require_length(layers_[k].db, p.b.size(), "encoder bias gradient");
    require_length(layers_[k].db_dec, p.b_dec.size(), "decoder bias gradient");
  }
}

Gradients backprop_batch(const Network& net, const Matrix& inputs, const Matrix& targets) {
  if (net.empty()) throw DimensionError("backprop: empty network");
  require_shape(inputs, inputs.rows(), net.input_dim(), "backprop input");
  require_shape(targets, inputs.rows(), net.input_dim(), "backprop target");
  if (inputs.rows() == 0) throw DimensionError("backprop: empty batch");

  const std::size_t depth = net.depth();
  const auto& layers = net.layers();

  // Forward. enc[k] is the output of encoder k-1 (enc[0] = input);
  // dec[k] is the output of decoder k (dec[depth] = bottleneck code).
  std::vector<Matrix> enc(depth + 1);
  enc[0] = inputs;
  for (std::size_t k = 0; k < depth; ++k) enc[k + 1] = encode_layer(layers[k], enc[k]);
  std::vector<Matrix> dec(depth + 1);
  dec[depth] = enc[depth];
  for (std::size_t k = depth; k-- > 0;) dec[k] = decode_layer(layers[k], dec[k + 1]);

  Gradients out;
  out.loss = loss_mse(targets, dec[0]);
  out.grads = GradientSet::zeros_like(net);
  auto& g = out.grads.layers();

  // d loss / d z.
  const double scale = 2.0 / static_cast<double>(inputs.rows() * inputs.cols());
  Matrix delta(dec[0].rows(), dec[0].cols());
  {
    auto d = delta.data();
    const auto z = dec[0].data();
    const auto t = targets.data();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = scale * (z[i] - t[i]);
  }

  // Decoder path, from the output back to the bottleneck. Decoder k computes
  // dec[k] = act(dec[k+1] · W_k + b_dec), so W_k gets dec[k+1]ᵀ · δ.
  for (std::size_t k = 0; k < depth; ++k) {
    scale_by_slope(delta, dec[k], layers[k].dec_act);
    g[k].dw = matmul_transposed_a(dec[k + 1], delta);
    add_column_sums(delta, g[k].db_dec);
    delta = matmul_transposed_b(delta, layers[k].w);
  }

  // Encoder path. Encoder k computes enc[k+1] = act(enc[k] · W_kᵀ + b), so
  // W_k additionally gets δᵀ · enc[k].
  for (std::size_t k = depth; k-- > 0;) {
    scale_by_slope(delta, enc[k + 1], layers[k].enc_act);
    accumulate(g[k].dw, matmul_transposed_a(delta, enc[k]));
    add_column_sums(delta, g[k].db);
    if (k > 0) delta = matmul(delta, layers[k].w);
  }
  return out;
}

Gradients backprop_gradients(const Network& net, std::span<const double> input,
                             std::span<const double> target) {
  if (input.size() != net.input_dim() || target.size() != net.input_dim())
    throw DimensionError("backprop: input length " + std::to_string(input.size()) +
                         " and target length " + std::to_string(target.size()) +
                         " must equal network input width " + std::to_string(net.input_dim()));
  return backprop_batch(net, row_matrix(input), row_matrix(target));
}

void sgd_step(Network& net, const GradientSet& grads, GradientSet& velocity,
              const Hyperparams& hp) {
  grads.check_congruent(net);
  velocity.check_congruent(net);
  const double m = hp.momentum;
  const double lr = hp.lr;
  auto update = [m, lr](std::span<double> theta, std::span<const double> g, std::span<double> v) {
    for (std::size_t i = 0; i < theta.size(); ++i) {
      v[i] = m * v[i] - lr * g[i];
      theta[i] += v[i];
    }
  };
  for (std::size_t k = 0; k < net.depth(); ++k) {
    auto& p = net.layer(k);
    const auto& gk = grads.layers()[k];
    auto& vk = velocity.layers()[k];
    update(p.w.data(), gk.dw.data(), vk.dw.data());
    update(p.b, gk.db, vk.db);
    update(p.b_dec, gk.db_dec, vk.db_dec);
  }
}

LayerParams initialize_layer(std::size_t in_dim, std::size_t out_dim, const Hyperparams& hp) {
  if (in_dim == 0 || out_dim == 0) throw DimensionError("layer widths must be positive");
  LayerParams layer(in_dim, out_dim, Activation::Tanh, hp.dec_act);
  SeededRng rng = SeededRng::derive(hp.seed, kInitStream);
  const double limit = std::sqrt(6.0 / static_cast<double>(in_dim + out_dim));
  const Vector draws = rng_uniform(rng, -limit, limit, in_dim * out_dim);
  std::copy(draws.begin(), draws.end(), layer.w.data().begin());
  return layer;
}

namespace {

double evaluate(const Network& net, const Matrix& xs) { return loss_mse(xs, reconstruct(net, xs)); }

// Shared minibatch loop behind pretrain_layer and finetune.
TrainReport fit(Network& net, const Matrix& train, const Matrix& valid, const Hyperparams& hp,
                bool masked) {
  hp.validate();
  if (train.rows() == 0) throw DimensionError("empty dataset");
  if (train.cols() != net.input_dim())
    throw DimensionError("training data has " + std::to_string(train.cols()) +
                         " columns, network expects " + std::to_string(net.input_dim()));
  const bool has_valid = valid.rows() > 0;
  if (has_valid && valid.cols() != net.input_dim())
    throw DimensionError("validation data has " + std::to_string(valid.cols()) +
                         " columns, network expects " + std::to_string(net.input_dim()));

  TrainReport report;
  if (hp.max_epochs == 0) {
    report.best_valid_loss = has_valid ? evaluate(net, valid) : evaluate(net, train);
    return report;
  }

  SeededRng shuffle_rng = SeededRng::derive(hp.seed, kShuffleStream);
  std::optional<MaskingNoise> noise;
  if (masked && hp.mask_d) noise.emplace(*hp.mask_d, SeededRng::derive(hp.seed, kMaskStream));

  const double train0 = evaluate(net, train);
  const double valid0 = has_valid ? evaluate(net, valid) : train0;
  report.epoch_losses.push_back({0, train0, valid0});
  report.best_valid_loss = valid0;
  report.best_epoch = 0;
  Network best = net;

  GradientSet velocity = GradientSet::zeros_like(net);
  std::vector<std::size_t> order(train.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (std::size_t epoch = 1; epoch <= hp.max_epochs; ++epoch) {
    shuffle_indices(shuffle_rng, order);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += hp.batch_size) {
      const std::size_t count = std::min(hp.batch_size, order.size() - start);
      const std::span<const std::size_t> idx(order.data() + start, count);
      const Matrix clean = select_rows(train, idx);
      const Matrix input = noise ? corrupt_batch(*noise, clean) : clean;
      const Gradients g = backprop_batch(net, input, clean);
      sgd_step(net, g.grads, velocity, hp);
      loss_sum += g.loss * static_cast<double>(count);
    }
    const double train_loss = loss_sum / static_cast<double>(order.size());
    const double valid_loss = has_valid ? evaluate(net, valid) : train_loss;
    if (!std::isfinite(valid_loss) || !std::isfinite(train_loss))
      throw Error("training diverged at epoch " + std::to_string(epoch));
    report.epoch_losses.push_back({epoch, train_loss, valid_loss});
    report.stopped_epoch = epoch;
    if (valid_loss < report.best_valid_loss) {
      report.best_valid_loss = valid_loss;
      report.best_epoch = epoch;
      best = net;
    }
    if (epoch - report.best_epoch >= hp.patience) break;
  }
  net = std::move(best);
  return report;
}

}  // namespace

LayerTrainResult pretrain_layer(const Matrix& train, const Matrix& valid, std::size_t in_dim,
                                std::size_t out_dim, const Hyperparams& hp) {
  if (train.rows() == 0) throw DimensionError("empty dataset");
  if (train.cols() != in_dim)
    throw DimensionError("training data has " + std::to_string(train.cols()) +
                         " columns, layer expects " + std::to_string(in_dim));
  hp.validate();
  Network net({initialize_layer(in_dim, out_dim, hp)});
  TrainReport report = fit(net, train, valid, hp, /*masked=*/true);
  return {net.layer(0), std::move(report)};
}

Matrix encode_dataset(const LayerParams& layer, const Matrix& xs) { return encode_layer(layer, xs); }

Matrix encode_dataset(const Network& net, const Matrix& xs) { return encode(net, xs); }

StackResult pretrain_stack(const Matrix& train, const Matrix& valid,
                           std::span<const std::size_t> dims, std::span<const Hyperparams> hps) {
  if (dims.size() < 2) throw DimensionError("pretrain_stack: need at least two widths");
  if (hps.size() != dims.size() - 1)
    throw DimensionError("pretrain_stack: " + std::to_string(dims.size() - 1) +
                         " layers but " + std::to_string(hps.size()) + " hyperparameter sets");
  if (train.cols() != dims[0])
    throw DimensionError("training data has " + std::to_string(train.cols()) +
                         " columns, first width is " + std::to_string(dims[0]));

  StackResult result;
  std::vector<LayerParams> layers;
  Matrix layer_train = train;
  Matrix layer_valid = valid;
  for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
    LayerTrainResult r = pretrain_layer(layer_train, layer_valid, dims[k], dims[k + 1], hps[k]);
    if (k + 2 < dims.size()) {
      layer_train = encode_dataset(r.layer, layer_train);
      if (layer_valid.rows() > 0) layer_valid = encode_dataset(r.layer, layer_valid);
    }
    layers.push_back(std::move(r.layer));
    result.reports.push_back(std::move(r.report));
  }
  result.net = Network(std::move(layers));
  return result;
}

TrainReport finetune(Network& net, const Matrix& train, const Matrix& valid,
                     const Hyperparams& hp) {
  if (net.empty()) throw DimensionError("finetune: empty network");
  return fit(net, train, valid, hp, /*masked=*/false);
}

}  // namespace sbx
