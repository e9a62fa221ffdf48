#include "sbx/dae.hpp"

#include <cmath>

#include "sbx/error.hpp"

namespace sbx {

std::string_view to_string(Activation a) noexcept {
  switch (a) {
    case Activation::Tanh:
      return "tanh";
    case Activation::Linear:
      return "linear";
  }
  return "unknown";
}

Activation parse_activation(std::string_view name) {
  if (name == "tanh") return Activation::Tanh;
  if (name == "linear") return Activation::Linear;
  throw FormatError("unknown activation '" + std::string(name) + "'");
}

double activate(Activation a, double t) noexcept {
  return a == Activation::Tanh ? std::tanh(t) : t;
}

double activation_slope(Activation a, double o) noexcept {
  return a == Activation::Tanh ? 1.0 - o * o : 1.0;
}

LayerParams::LayerParams(std::size_t in_dim, std::size_t out_dim, Activation enc, Activation dec)
    : w(out_dim, in_dim), b(out_dim, 0.0), b_dec(in_dim, 0.0), enc_act(enc), dec_act(dec) {}

void LayerParams::validate() const {
  if (w.rows() != b.size() || w.cols() != b_dec.size())
    throw DimensionError("layer weight " + w.shape() + " inconsistent with bias lengths " +
                         std::to_string(b.size()) + " and " + std::to_string(b_dec.size()));
}

Network::Network(std::vector<LayerParams> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) return;
  dims_.push_back(layers_.front().in_dim());
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    layers_[k].validate();
    if (layers_[k].in_dim() != dims_.back())
      throw DimensionError("layer " + std::to_string(k) + " expects " +
                           std::to_string(layers_[k].in_dim()) + " inputs but previous width is " +
                           std::to_string(dims_.back()));
    dims_.push_back(layers_[k].out_dim());
  }
}

Network Network::zeros(std::span<const std::size_t> dims, Activation enc, Activation dec) {
  if (dims.size() < 2) throw DimensionError("a network needs at least two widths");
  std::vector<LayerParams> layers;
  for (std::size_t k = 0; k + 1 < dims.size(); ++k)
    layers.emplace_back(dims[k], dims[k + 1], enc, dec);
  return Network(std::move(layers));
}

Vector encode_layer(const LayerParams& layer, std::span<const double> x) {
  Vector y = matvec(layer.w, x);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = activate(layer.enc_act, y[i] + layer.b[i]);
  return y;
}

Vector decode_layer(const LayerParams& layer, std::span<const double> y) {
  Vector z = matvec_transposed(layer.w, y);
  for (std::size_t j = 0; j < z.size(); ++j) z[j] = activate(layer.dec_act, z[j] + layer.b_dec[j]);
  return z;
}

Vector encode(const Network& net, std::span<const double> x) {
  if (net.empty()) throw DimensionError("encode: empty network");
  Vector h(x.begin(), x.end());
  for (const auto& layer : net.layers()) h = encode_layer(layer, h);
  return h;
}

Vector decode(const Network& net, std::span<const double> code) {
  if (net.empty()) throw DimensionError("decode: empty network");
  Vector u(code.begin(), code.end());
  for (auto it = net.layers().rbegin(); it != net.layers().rend(); ++it) u = decode_layer(*it, u);
  return u;
}

Vector reconstruct(const Network& net, std::span<const double> x) {
  return decode(net, encode(net, x));
}

double loss_mse(std::span<const double> x, std::span<const double> z) {
  if (x.size() != z.size())
    throw DimensionError("loss_mse: lengths " + std::to_string(x.size()) + " and " +
                         std::to_string(z.size()) + " differ");
  if (x.empty()) throw DimensionError("loss_mse: empty input");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - z[i];
    acc += d * d;
  }
  return acc / static_cast<double>(x.size());
}

Matrix encode_layer(const LayerParams& layer, const Matrix& xs) {
  if (xs.cols() != layer.in_dim())
    throw DimensionError("encode_layer: input " + xs.shape() + " does not match weight " +
                         layer.w.shape());
  Matrix ys = matmul_transposed_b(xs, layer.w);
  for (std::size_t r = 0; r < ys.rows(); ++r) {
    auto row = ys.row(r);
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = activate(layer.enc_act, row[i] + layer.b[i]);
  }
  return ys;
}

Matrix decode_layer(const LayerParams& layer, const Matrix& ys) {
  if (ys.cols() != layer.out_dim())
    throw DimensionError("decode_layer: code " + ys.shape() + " does not match weight " +
                         layer.w.shape());
  Matrix zs = matmul(ys, layer.w);
  for (std::size_t r = 0; r < zs.rows(); ++r) {
    auto row = zs.row(r);
    for (std::size_t j = 0; j < row.size(); ++j)
      row[j] = activate(layer.dec_act, row[j] + layer.b_dec[j]);
  }
  return zs;
}

Matrix encode(const Network& net, const Matrix& xs) {
  if (net.empty()) throw DimensionError("encode: empty network");
  Matrix h = xs;
  for (const auto& layer : net.layers()) h = encode_layer(layer, h);
  return h;
}

Matrix decode(const Network& net, const Matrix& codes) {
  if (net.empty()) throw DimensionError("decode: empty network");
  Matrix u = codes;
  for (auto it = net.layers().rbegin(); it != net.layers().rend(); ++it) u = decode_layer(*it, u);
  return u;
}

Matrix reconstruct(const Network& net, const Matrix& xs) { return decode(net, encode(net, xs)); }

double loss_mse(const Matrix& xs, const Matrix& zs) {
  if (xs.rows() != zs.rows() || xs.cols() != zs.cols())
    throw DimensionError("loss_mse: shapes " + xs.shape() + " and " + zs.shape() + " differ");
  return loss_mse(xs.data(), zs.data());
}

}  // namespace sbx
