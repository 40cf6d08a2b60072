#include "phonemv/net/params.hpp"

#include "phonemv/errors.hpp"
#include "phonemv/util/rng.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

namespace phonemv::net {

using nlohmann::json;

void NetConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ValidationError("net config: " + what);
  };
  require(input_dims >= 1, "input_dims must be >= 1");
  require(hidden >= 1, "hidden must be >= 1");
  require(num_layers >= 1, "num_layers must be >= 1");
  require(!fc_dims.empty(), "fc_dims must not be empty");
  for (int d : fc_dims) require(d >= 1, "fc dims must be >= 1");
  require(dropout >= 0.0 && dropout < 1.0, "dropout must be in [0, 1)");
}

NetConfig NetConfig::full_scale(int input_dims) {
  NetConfig c;
  c.input_dims = input_dims;
  c.hidden = 512;
  c.num_layers = 2;
  c.fc_dims = {512, 256};
  c.dropout = 0.4;
  return c;
}

std::string to_json(const NetConfig& c) {
  json j;
  j["input_dims"] = c.input_dims;
  j["hidden"] = c.hidden;
  j["num_layers"] = c.num_layers;
  j["fc_dims"] = c.fc_dims;
  j["dropout"] = c.dropout;
  return j.dump();
}

NetConfig net_config_from_json(const std::string& text) {
  NetConfig c;
  try {
    const auto j = json::parse(text);
    c.input_dims = j.value("input_dims", c.input_dims);
    c.hidden = j.value("hidden", c.hidden);
    c.num_layers = j.value("num_layers", c.num_layers);
    c.fc_dims = j.value("fc_dims", c.fc_dims);
    c.dropout = j.value("dropout", c.dropout);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed net config: ") + e.what());
  }
  c.validate();
  return c;
}

NetParams NetParams::zeros(const NetConfig& config) {
  config.validate();
  NetParams p;
  p.config = config;
  const int h = config.hidden;
  int in = config.input_dims;
  for (int l = 0; l < config.num_layers; ++l) {
    BiLstmLayer layer;
    for (auto* dir : {&layer.fwd, &layer.bwd}) {
      dir->W = MatrixXd::Zero(4 * h, in);
      dir->U = MatrixXd::Zero(4 * h, h);
      dir->b = VectorXd::Zero(4 * h);
    }
    p.lstm.push_back(std::move(layer));
    in = 2 * h;
  }
  for (int out : config.fc_dims) {
    p.fc.push_back({MatrixXd::Zero(out, in), VectorXd::Zero(out)});
    in = out;
  }
  return p;
}

bool NetParams::same_shape(const NetParams& other) const {
  if (config != other.config) return false;
  const auto a = tensors(*this);
  const auto b = tensors(other);
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].values.rows() != b[i].values.rows() ||
        a[i].values.cols() != b[i].values.cols()) {
      return false;
    }
  }
  return true;
}

bool NetParams::operator==(const NetParams& other) const {
  if (!same_shape(other)) return false;
  const auto a = tensors(*this);
  const auto b = tensors(other);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].values != b[i].values) return false;
  }
  return true;
}

std::size_t NetParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& t : tensors(*this)) n += static_cast<std::size_t>(t.values.size());
  return n;
}

namespace {

template <typename Ref, typename P, typename M>
void visit(P& params, std::vector<Ref>& out) {
  auto add = [&](std::string name, auto& tensor) {
    out.push_back(Ref{std::move(name), M(tensor.data(), tensor.rows(), tensor.cols())});
  };
  for (std::size_t l = 0; l < params.lstm.size(); ++l) {
    const std::string prefix = "lstm" + std::to_string(l);
    add(prefix + ".fwd.W", params.lstm[l].fwd.W);
    add(prefix + ".fwd.U", params.lstm[l].fwd.U);
    add(prefix + ".fwd.b", params.lstm[l].fwd.b);
    add(prefix + ".bwd.W", params.lstm[l].bwd.W);
    add(prefix + ".bwd.U", params.lstm[l].bwd.U);
    add(prefix + ".bwd.b", params.lstm[l].bwd.b);
  }
  for (std::size_t i = 0; i < params.fc.size(); ++i) {
    const std::string prefix = "fc" + std::to_string(i);
    add(prefix + ".W", params.fc[i].W);
    add(prefix + ".b", params.fc[i].b);
  }
}

}  // namespace

std::vector<TensorRef> tensors(NetParams& params) {
  std::vector<TensorRef> out;
  visit<TensorRef, NetParams, Eigen::Map<MatrixXd>>(params, out);
  return out;
}

std::vector<ConstTensorRef> tensors(const NetParams& params) {
  std::vector<ConstTensorRef> out;
  visit<ConstTensorRef, const NetParams, Eigen::Map<const MatrixXd>>(params, out);
  return out;
}

void set_zero(NetParams& params) {
  for (auto& t : tensors(params)) t.values.setZero();
}

void add_scaled(NetParams& dst, const NetParams& src, double alpha) {
  if (!dst.same_shape(src)) {
    throw ValidationError("add_scaled: parameter shapes differ");
  }
  auto d = tensors(dst);
  const auto s = tensors(src);
  for (std::size_t i = 0; i < d.size(); ++i) d[i].values += alpha * s[i].values;
}

NetParams init_params(const NetConfig& config, std::uint64_t seed) {
  NetParams p = NetParams::zeros(config);
  util::Rng rng(seed);
  auto fill = [&rng](auto& m, Eigen::Index fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> u(-bound, bound);
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = u(rng);
    }
  };
  const int h = config.hidden;
  for (auto& layer : p.lstm) {
    for (auto* dir : {&layer.fwd, &layer.bwd}) {
      fill(dir->W, dir->W.cols());
      fill(dir->U, dir->U.cols());
      dir->b.segment(h, h).setOnes();
    }
  }
  for (auto& dense : p.fc) {
    fill(dense.W, dense.W.cols());
    fill(dense.b, dense.W.cols());
  }
  return p;
}

}  // namespace phonemv::net
