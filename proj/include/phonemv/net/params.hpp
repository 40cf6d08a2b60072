#pragma once

#include "phonemv/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace phonemv::net {

/// Architecture of one embedding model: a stack of bidirectional LSTM layers
/// followed by fully connected layers; the last FC output is the embedding.
struct NetConfig {
  int input_dims = 13;
  int hidden = 16;      // per direction, per layer
  int num_layers = 2;   // stacked BiLSTM layers
  std::vector<int> fc_dims = {32, 16};
  double dropout = 0.4;

  int embedding_dims() const { return fc_dims.empty() ? 0 : fc_dims.back(); }

  /// Throws ValidationError on non-positive sizes, empty fc_dims or dropout
  /// outside [0, 1).
  void validate() const;

  /// 512 units per direction, FC 512 -> 256, dropout 0.4.
  static NetConfig full_scale(int input_dims);

  bool operator==(const NetConfig&) const = default;
};

std::string to_json(const NetConfig& config);
NetConfig net_config_from_json(const std::string& text);

/// Weights of one LSTM direction. Gate blocks are stacked in the order
/// [input, forget, cell, output], each `hidden` rows tall.
struct LstmDirection {
  MatrixXd W;  // 4h x in
  MatrixXd U;  // 4h x h
  VectorXd b;  // 4h
};

struct BiLstmLayer {
  LstmDirection fwd;
  LstmDirection bwd;
};

struct DenseLayer {
  MatrixXd W;  // out x in
  VectorXd b;  // out
};

/// All trainable tensors of one embedding model. Also used to hold
/// gradients and optimizer accumulators (same shapes).
struct NetParams {
  NetConfig config;
  std::vector<BiLstmLayer> lstm;
  std::vector<DenseLayer> fc;

  static NetParams zeros(const NetConfig& config);
  bool same_shape(const NetParams& other) const;
  std::size_t parameter_count() const;

  /// Same config and bit-identical values in every tensor.
  bool operator==(const NetParams& other) const;
};

using NetGradients = NetParams;

struct TensorRef {
  std::string name;
  Eigen::Map<MatrixXd> values;
};

struct ConstTensorRef {
  std::string name;
  Eigen::Map<const MatrixXd> values;
};

/// Every tensor in declaration order: per layer fwd W,U,b then bwd W,U,b,
/// then per FC layer W,b. Names look like "lstm0.fwd.W" and "fc1.b".
std::vector<TensorRef> tensors(NetParams& params);
std::vector<ConstTensorRef> tensors(const NetParams& params);

void set_zero(NetParams& params);
/// dst += alpha * src
void add_scaled(NetParams& dst, const NetParams& src, double alpha);

/// Weights and FC biases ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)) where fan_in
/// is the width of the input the layer multiplies. LSTM biases are zero
/// except the forget-gate slice, which is 1.
NetParams init_params(const NetConfig& config, std::uint64_t seed);

}  // namespace phonemv::net
