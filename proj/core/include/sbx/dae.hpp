#pragma once

// Tied-weight auto-encoder layers and stacks.
//
// A layer maps x (length n) to y = enc(W x + b) (length m) and back to
// z = dec(Wᵀ y + b_dec). Only W is stored; decoding always reads its
// transpose, so the two directions can never drift apart.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sbx/linalg.hpp"

namespace sbx {

enum class Activation { Tanh, Linear };

std::string_view to_string(Activation a) noexcept;
/// Parses "tanh" / "linear". Throws FormatError otherwise.
Activation parse_activation(std::string_view name);

double activate(Activation a, double t) noexcept;
/// Derivative expressed through the activation output o = activate(a, t).
/// For tanh this is 1 - o², i.e. sech²(t).
double activation_slope(Activation a, double o) noexcept;

struct LayerParams {
  Matrix w;      // out_dim x in_dim
  Vector b;      // encoder bias, out_dim
  Vector b_dec;  // decoder bias, in_dim
  Activation enc_act = Activation::Tanh;
  Activation dec_act = Activation::Tanh;

  LayerParams() = default;
  LayerParams(std::size_t in_dim, std::size_t out_dim, Activation enc = Activation::Tanh,
              Activation dec = Activation::Tanh);

  std::size_t in_dim() const noexcept { return w.cols(); }
  std::size_t out_dim() const noexcept { return w.rows(); }

  /// Throws DimensionError if w, b and b_dec disagree.
  void validate() const;

  bool operator==(const LayerParams&) const = default;
};

class Network {
 public:
  Network() = default;
  /// Takes ownership of `layers`; validates that consecutive widths chain.
  explicit Network(std::vector<LayerParams> layers);

  /// All-zero network with the given widths, e.g. {2049, 500, 180, 120}.
  static Network zeros(std::span<const std::size_t> dims, Activation enc = Activation::Tanh,
                       Activation dec = Activation::Tanh);

  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t input_dim() const noexcept { return dims_.empty() ? 0 : dims_.front(); }
  std::size_t bottleneck_dim() const noexcept { return dims_.empty() ? 0 : dims_.back(); }
  std::size_t depth() const noexcept { return layers_.size(); }
  bool empty() const noexcept { return layers_.empty(); }

  const std::vector<LayerParams>& layers() const noexcept { return layers_; }
  const LayerParams& layer(std::size_t k) const { return layers_.at(k); }
  /// Mutable access for trainers. Callers must keep the layer's shape.
  LayerParams& layer(std::size_t k) { return layers_.at(k); }

  bool operator==(const Network&) const = default;

 private:
  std::vector<LayerParams> layers_;
  std::vector<std::size_t> dims_;
};

Vector encode_layer(const LayerParams& layer, std::span<const double> x);
Vector decode_layer(const LayerParams& layer, std::span<const double> y);

/// Runs x through every encoder; output length is the bottleneck width.
Vector encode(const Network& net, std::span<const double> x);
/// Runs the decoders from the bottleneck back to the input width.
Vector decode(const Network& net, std::span<const double> code);
/// decode(encode(x)).
Vector reconstruct(const Network& net, std::span<const double> x);

/// (1/n) Σ (x_i - z_i)². Throws DimensionError on length mismatch or empty input.
double loss_mse(std::span<const double> x, std::span<const double> z);

// Row-wise batched forms. Row r of the result equals the vector op on row r.

Matrix encode_layer(const LayerParams& layer, const Matrix& xs);
Matrix decode_layer(const LayerParams& layer, const Matrix& ys);
Matrix encode(const Network& net, const Matrix& xs);
Matrix decode(const Network& net, const Matrix& codes);
Matrix reconstruct(const Network& net, const Matrix& xs);

/// Mean over all rows and columns of (x - z)².
double loss_mse(const Matrix& xs, const Matrix& zs);

}  // namespace sbx
