#pragma once

#include "phonemv/net/params.hpp"

#include <cstdint>

namespace phonemv::net {

enum class Mode { kEval, kTrain };

struct ForwardOptions {
  Mode mode = Mode::kEval;
  /// Seeds the dropout masks in train mode; ignored in eval mode.
  std::uint64_t dropout_seed = 0;

  static ForwardOptions eval() { return {}; }
  static ForwardOptions train(std::uint64_t seed) { return {Mode::kTrain, seed}; }
};

/// Activations of one LSTM direction, indexed by original frame position.
struct DirectionTape {
  MatrixXd gates;   // 4h x T, post-activation [i; f; g; o]
  MatrixXd cells;   // h x T
  MatrixXd hidden;  // h x T
};

struct LayerTape {
  MatrixXd input;       // in x T, after the inter-layer dropout mask
  MatrixXd input_mask;  // in x T inverted-dropout mask; empty when unused
  DirectionTape fwd;
  DirectionTape bwd;
};

struct DenseTape {
  VectorXd input;
  VectorXd pre;   // pre-activation
  VectorXd mask;  // inverted-dropout mask after ReLU; empty when unused
};

/// Everything backward() needs to reproduce the forward pass exactly.
struct ForwardTape {
  NetConfig config;
  Eigen::Index frames = 0;
  std::vector<LayerTape> layers;
  VectorXd summary;  // [last forward h ; first backward h] of the top layer
  std::vector<DenseTape> fc;
  Embedding output;
};

/// Embeds a frames x dims sequence.
///
/// Each BiLSTM layer emits [h_fwd(t); h_bwd(t)] per frame; inverted dropout
/// sits between stacked recurrent layers and after each hidden FC ReLU (train
/// mode only). The top layer is summarized by its final forward state and
/// final backward state, then FC -> ReLU -> dropout -> ... -> FC (linear).
ForwardTape forward(const NetParams& params, const FeatureMatrix& input,
                    const ForwardOptions& options = ForwardOptions::eval());

/// forward(...).output without keeping the tape around.
Embedding embed(const NetParams& params, const FeatureMatrix& input);

/// Accumulates into `grads` the gradient of <output_gradient, embedding>
/// with respect to every parameter, reusing the tape's dropout masks.
/// Throws ValidationError when tape, params and gradient disagree.
void accumulate_backward(const NetParams& params, const ForwardTape& tape,
                         const VectorXd& output_gradient, NetGradients& grads);

NetGradients backward(const NetParams& params, const ForwardTape& tape,
                      const VectorXd& output_gradient);

}  // namespace phonemv::net
