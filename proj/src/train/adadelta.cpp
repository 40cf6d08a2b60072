#include "phonemv/train/adadelta.hpp"

#include "phonemv/errors.hpp"

namespace phonemv::train {

void AdadeltaConfig::validate() const {
  if (!(rho >= 0.0 && rho < 1.0)) throw ValidationError("adadelta: rho must be in [0, 1)");
  if (!(epsilon > 0.0)) throw ValidationError("adadelta: epsilon must be > 0");
  if (!(lr > 0.0)) throw ValidationError("adadelta: lr must be > 0");
}

AdadeltaState AdadeltaState::init(const AdadeltaConfig& config,
                                  const net::NetConfig& shape) {
  config.validate();
  return {config, net::NetParams::zeros(shape), net::NetParams::zeros(shape)};
}

net::NetParams adadelta_step(net::NetParams& params, AdadeltaState& state,
                             const net::NetGradients& grads) {
  state.config.validate();
  if (!grads.same_shape(params) || !state.sq_grad.same_shape(params) ||
      !state.sq_update.same_shape(params)) {
    throw ValidationError("adadelta: shape mismatch between params, grads and state");
  }
  const auto g = net::tensors(grads);
  for (const auto& t : g) {
    if (!t.values.allFinite()) {
      throw ValidationError("adadelta: non-finite gradient in tensor " + t.name);
    }
  }

  const double rho = state.config.rho;
  const double eps = state.config.epsilon;
  const double lr = state.config.lr;
  net::NetParams delta = net::NetParams::zeros(params.config);
  auto p = net::tensors(params);
  auto eg = net::tensors(state.sq_grad);
  auto ex = net::tensors(state.sq_update);
  auto dx = net::tensors(delta);
  for (std::size_t k = 0; k < p.size(); ++k) {
    const auto& gk = g[k].values.array();
    eg[k].values.array() = rho * eg[k].values.array() + (1.0 - rho) * gk.square();
    dx[k].values.array() = -lr * ((ex[k].values.array() + eps).sqrt() /
                                  (eg[k].values.array() + eps).sqrt()) * gk;
    ex[k].values.array() =
        rho * ex[k].values.array() + (1.0 - rho) * dx[k].values.array().square();
    p[k].values += dx[k].values;
  }
  return delta;
}

}  // namespace phonemv::train
