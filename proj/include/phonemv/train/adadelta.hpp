#pragma once

#include "phonemv/net/params.hpp"

namespace phonemv::train {

struct AdadeltaConfig {
  double rho = 0.95;
  double epsilon = 1e-6;
  /// Global scale on the canonical update.
  double lr = 1e-4;

  /// rho in [0, 1), epsilon > 0, lr > 0.
  void validate() const;
};

/// Running averages E[g^2] and E[dx^2], shaped like the parameters.
struct AdadeltaState {
  AdadeltaConfig config;
  net::NetParams sq_grad;
  net::NetParams sq_update;

  static AdadeltaState init(const AdadeltaConfig& config,
                            const net::NetConfig& shape);
};

/// Per element:
///   E[g^2]  <- rho E[g^2] + (1 - rho) g^2
///   dx       = -lr sqrt(E[dx^2] + eps) / sqrt(E[g^2] + eps) g
///   E[dx^2] <- rho E[dx^2] + (1 - rho) dx^2
///   param   += dx
/// Returns dx. Throws ValidationError naming the tensor when a gradient is
/// non-finite or shapes disagree; nothing is modified in that case.
net::NetParams adadelta_step(net::NetParams& params, AdadeltaState& state,
                             const net::NetGradients& grads);

}  // namespace phonemv::train
