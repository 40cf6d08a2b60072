#include "phonemv/net/bilstm.hpp"

#include "phonemv/errors.hpp"
#include "phonemv/util/rng.hpp"

#include <cmath>

namespace phonemv::net {

namespace {

// Inverted-dropout mask: 0 with probability p, else 1/(1-p). Draws use the
// top 53 bits of the generator so masks do not depend on library
// distribution implementations.
MatrixXd dropout_mask(util::Rng& rng, Eigen::Index rows, Eigen::Index cols,
                      double p) {
  MatrixXd mask(rows, cols);
  const double keep_scale = 1.0 / (1.0 - p);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      mask(r, c) = u < p ? 0.0 : keep_scale;
    }
  }
  return mask;
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void run_direction(const LstmDirection& w, const MatrixXd& x, bool reverse,
                   DirectionTape& tape) {
  const Eigen::Index h = w.U.cols();
  const Eigen::Index T = x.cols();
  tape.gates.resize(4 * h, T);
  tape.cells.resize(h, T);
  tape.hidden.resize(h, T);

  MatrixXd pre = w.W * x;
  pre.colwise() += w.b;

  VectorXd h_prev = VectorXd::Zero(h);
  VectorXd c_prev = VectorXd::Zero(h);
  VectorXd a(4 * h);
  for (Eigen::Index step = 0; step < T; ++step) {
    const Eigen::Index t = reverse ? T - 1 - step : step;
    a.noalias() = w.U * h_prev;
    a += pre.col(t);
    auto gates = tape.gates.col(t);
    for (Eigen::Index k = 0; k < h; ++k) {
      gates(k) = sigmoid(a(k));
      gates(h + k) = sigmoid(a(h + k));
      gates(2 * h + k) = std::tanh(a(2 * h + k));
      gates(3 * h + k) = sigmoid(a(3 * h + k));
    }
    auto c = tape.cells.col(t);
    auto hid = tape.hidden.col(t);
    for (Eigen::Index k = 0; k < h; ++k) {
      c(k) = gates(h + k) * c_prev(k) + gates(k) * gates(2 * h + k);
      hid(k) = gates(3 * h + k) * std::tanh(c(k));
    }
    c_prev = c;
    h_prev = hid;
  }
}

// Backpropagates dH (h x T, gradient w.r.t. this direction's outputs) and
// returns the gradient w.r.t. the layer input.
MatrixXd backprop_direction(const LstmDirection& w, const DirectionTape& tape,
                            const MatrixXd& x, const MatrixXd& d_hidden,
                            bool reverse, LstmDirection& grad) {
  const Eigen::Index h = w.U.cols();
  const Eigen::Index T = x.cols();
  MatrixXd d_pre(4 * h, T);
  MatrixXd h_before = MatrixXd::Zero(h, T);  // h_{t-1} in processing order

  VectorXd dh_next = VectorXd::Zero(h);
  VectorXd dc_next = VectorXd::Zero(h);
  for (Eigen::Index step = T - 1; step >= 0; --step) {
    const Eigen::Index t = reverse ? T - 1 - step : step;
    const bool has_prev = step > 0;
    const Eigen::Index tp = reverse ? t + 1 : t - 1;
    const auto gates = tape.gates.col(t);
    const auto c = tape.cells.col(t);
    auto da = d_pre.col(t);
    for (Eigen::Index k = 0; k < h; ++k) {
      const double i = gates(k);
      const double f = gates(h + k);
      const double g = gates(2 * h + k);
      const double o = gates(3 * h + k);
      const double tc = std::tanh(c(k));
      const double dh = d_hidden(k, t) + dh_next(k);
      const double dc = dc_next(k) + dh * o * (1.0 - tc * tc);
      const double c_prev = has_prev ? tape.cells(k, tp) : 0.0;
      da(k) = dc * g * i * (1.0 - i);
      da(h + k) = dc * c_prev * f * (1.0 - f);
      da(2 * h + k) = dc * i * (1.0 - g * g);
      da(3 * h + k) = dh * tc * o * (1.0 - o);
      dc_next(k) = dc * f;
    }
    dh_next.noalias() = w.U.transpose() * da;
    if (has_prev) h_before.col(t) = tape.hidden.col(tp);
  }
  grad.W.noalias() += d_pre * x.transpose();
  grad.U.noalias() += d_pre * h_before.transpose();
  grad.b += d_pre.rowwise().sum();
  return w.W.transpose() * d_pre;
}

void check_input(const NetParams& params, const FeatureMatrix& input) {
  if (input.rows() < 1) throw ValidationError("forward: input has no frames");
  if (input.cols() != params.config.input_dims) {
    throw ValidationError("forward: input has " + std::to_string(input.cols()) +
                          " dims, network expects " +
                          std::to_string(params.config.input_dims));
  }
}

}  // namespace

ForwardTape forward(const NetParams& params, const FeatureMatrix& input,
                    const ForwardOptions& options) {
  check_input(params, input);
  const auto& config = params.config;
  const bool train = options.mode == Mode::kTrain && config.dropout > 0.0;
  util::Rng rng(options.dropout_seed);

  ForwardTape tape;
  tape.config = config;
  tape.frames = input.rows();
  tape.layers.resize(params.lstm.size());

  const Eigen::Index h = config.hidden;
  const Eigen::Index T = input.rows();
  MatrixXd x = input.transpose();
  for (std::size_t l = 0; l < params.lstm.size(); ++l) {
    auto& lt = tape.layers[l];
    if (l > 0 && train) {
      lt.input_mask = dropout_mask(rng, x.rows(), x.cols(), config.dropout);
      x.array() *= lt.input_mask.array();
    }
    lt.input = std::move(x);
    run_direction(params.lstm[l].fwd, lt.input, false, lt.fwd);
    run_direction(params.lstm[l].bwd, lt.input, true, lt.bwd);
    x.resize(2 * h, T);
    x.topRows(h) = lt.fwd.hidden;
    x.bottomRows(h) = lt.bwd.hidden;
  }

  const auto& top = tape.layers.back();
  tape.summary.resize(2 * h);
  tape.summary.head(h) = top.fwd.hidden.col(T - 1);
  tape.summary.tail(h) = top.bwd.hidden.col(0);

  VectorXd a = tape.summary;
  tape.fc.resize(params.fc.size());
  for (std::size_t i = 0; i < params.fc.size(); ++i) {
    auto& dt = tape.fc[i];
    dt.input = a;
    dt.pre = params.fc[i].W * a + params.fc[i].b;
    if (i + 1 == params.fc.size()) {
      a = dt.pre;
      break;
    }
    a = dt.pre.cwiseMax(0.0);
    if (train) {
      dt.mask = dropout_mask(rng, a.size(), 1, config.dropout).col(0);
      a.array() *= dt.mask.array();
    }
  }
  tape.output = std::move(a);
  return tape;
}

Embedding embed(const NetParams& params, const FeatureMatrix& input) {
  return forward(params, input, ForwardOptions::eval()).output;
}

void accumulate_backward(const NetParams& params, const ForwardTape& tape,
                         const VectorXd& output_gradient, NetGradients& grads) {
  if (tape.config != params.config ||
      tape.layers.size() != params.lstm.size() ||
      tape.fc.size() != params.fc.size()) {
    throw ValidationError("backward: tape was not produced by these params");
  }
  if (!grads.same_shape(params)) {
    throw ValidationError("backward: gradient buffer shape mismatch");
  }
  if (output_gradient.size() != tape.output.size()) {
    throw ValidationError("backward: output gradient has " +
                          std::to_string(output_gradient.size()) +
                          " entries, embedding has " +
                          std::to_string(tape.output.size()));
  }

  VectorXd d = output_gradient;
  for (std::size_t i = params.fc.size(); i-- > 0;) {
    const auto& dt = tape.fc[i];
    if (i + 1 < params.fc.size()) {
      if (dt.mask.size() > 0) d.array() *= dt.mask.array();
      d.array() *= (dt.pre.array() > 0.0).cast<double>();
    }
    grads.fc[i].W.noalias() += d * dt.input.transpose();
    grads.fc[i].b += d;
    d = params.fc[i].W.transpose() * d;
  }

  const Eigen::Index h = params.config.hidden;
  const Eigen::Index T = tape.frames;
  MatrixXd d_out = MatrixXd::Zero(2 * h, T);
  d_out.col(T - 1).head(h) = d.head(h);
  d_out.col(0).tail(h) += d.tail(h);

  for (std::size_t l = params.lstm.size(); l-- > 0;) {
    const auto& lt = tape.layers[l];
    MatrixXd dx = backprop_direction(params.lstm[l].fwd, lt.fwd, lt.input,
                                     d_out.topRows(h), false, grads.lstm[l].fwd);
    dx += backprop_direction(params.lstm[l].bwd, lt.bwd, lt.input,
                             d_out.bottomRows(h), true, grads.lstm[l].bwd);
    if (l == 0) break;
    if (lt.input_mask.size() > 0) dx.array() *= lt.input_mask.array();
    d_out = std::move(dx);
  }
}

NetGradients backward(const NetParams& params, const ForwardTape& tape,
                      const VectorXd& output_gradient) {
  NetGradients grads = NetParams::zeros(params.config);
  accumulate_backward(params, tape, output_gradient, grads);
  return grads;
}

}  // namespace phonemv::net
