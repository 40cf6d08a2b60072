#include "phonemv/net/grad_check.hpp"

#include "phonemv/errors.hpp"
#include "phonemv/losses/losses.hpp"
#include "phonemv/net/bilstm.hpp"
#include "phonemv/util/rng.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace phonemv::net {

namespace {

constexpr double kMinEmbeddingNorm = 0.1;
constexpr std::uint64_t kMaxPointAttempts = 1000;

enum class CheckedLoss { kEmbedding, kTriplet, kObj0, kObj1, kBoth };

const char* name_of(CheckedLoss loss) {
  switch (loss) {
    case CheckedLoss::kEmbedding: return "embedding";
    case CheckedLoss::kTriplet: return "triplet";
    case CheckedLoss::kObj0: return "obj0";
    case CheckedLoss::kObj1: return "obj1";
    case CheckedLoss::kBoth: return "both";
  }
  return "?";
}

bool uses_g(CheckedLoss loss) {
  return loss == CheckedLoss::kObj0 || loss == CheckedLoss::kObj1 ||
         loss == CheckedLoss::kBoth;
}

struct Problem {
  std::vector<FeatureMatrix> x;  // acoustic-side inputs
  std::vector<FeatureMatrix> y;  // multi-source inputs
  std::uint64_t seed;
  losses::Margin margin;
};

struct Pass {
  ForwardTape tape;
  const NetParams* net;
};

// Evaluates the loss; when grads are given, accumulates analytic gradients.
double evaluate(CheckedLoss loss, const NetParams& f, const NetParams& g,
                const Problem& p, NetGradients* gf, NetGradients* gg) {
  auto run = [&](const NetParams& net, const FeatureMatrix& in,
                 std::uint64_t role) {
    return Pass{forward(net, in, ForwardOptions::train(
                                     util::derive_seed({p.seed, role}))),
                &net};
  };
  auto back = [&](const Pass& pass, const VectorXd& d, NetGradients* grads) {
    if (grads != nullptr) accumulate_backward(*pass.net, pass.tape, d, *grads);
  };

  switch (loss) {
    case CheckedLoss::kEmbedding: {
      auto e = run(f, p.x[0], 0);
      back(e, VectorXd::Ones(e.tape.output.size()), gf);
      return e.tape.output.sum();
    }
    case CheckedLoss::kTriplet: {
      auto a = run(f, p.x[0], 0);
      auto pos = run(f, p.x[1], 1);
      auto neg = run(f, p.x[2], 2);
      const auto l = losses::triplet_loss<double>(a.tape.output, pos.tape.output,
                                                  neg.tape.output, p.margin);
      back(a, l.d_anchor, gf);
      back(pos, l.d_positive, gf);
      back(neg, l.d_negative, gf);
      return l.value;
    }
    case CheckedLoss::kObj0:
    case CheckedLoss::kObj1:
    case CheckedLoss::kBoth: {
      auto fx_pos = run(f, p.x[0], 0);
      auto fx_neg = run(f, p.x[1], 1);
      auto gy_pos = run(g, p.y[0], 2);
      auto gy_neg = run(g, p.y[1], 3);
      losses::CrossViewLoss<double> l;
      if (loss == CheckedLoss::kObj0) {
        l = losses::obj0_loss<double>(fx_pos.tape.output, gy_pos.tape.output,
                                      gy_neg.tape.output, p.margin);
      } else if (loss == CheckedLoss::kObj1) {
        l = losses::obj1_loss<double>(fx_pos.tape.output, gy_pos.tape.output,
                                      fx_neg.tape.output, p.margin);
      } else {
        l = losses::combined_loss<double>(fx_pos.tape.output, gy_pos.tape.output,
                                          gy_neg.tape.output, fx_neg.tape.output,
                                          p.margin);
      }
      back(fx_pos, l.d_fx_pos, gf);
      back(fx_neg, l.d_fx_neg, gf);
      back(gy_pos, l.d_gy_pos, gg);
      back(gy_neg, l.d_gy_neg, gg);
      return l.value;
    }
  }
  return 0.0;
}

FeatureMatrix random_input(util::Rng& rng, int frames, int dims) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FeatureMatrix m(frames, dims);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

NetParams random_params(const NetConfig& config, std::uint64_t seed) {
  NetParams p = NetParams::zeros(config);
  util::Rng rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& t : tensors(p)) {
    for (Eigen::Index i = 0; i < t.values.size(); ++i) t.values.data()[i] = u(rng);
  }
  return p;
}

struct CheckPoint {
  NetParams f;
  NetParams g;
  Problem problem;
};

CheckPoint make_point(const GradCheckOptions& options, std::uint64_t attempt) {
  NetConfig g_config = options.config;
  g_config.input_dims = options.g_input_dims;
  CheckPoint pt{random_params(options.config, util::derive_seed({options.seed, attempt, 1})),
                random_params(g_config, util::derive_seed({options.seed, attempt, 2})),
                Problem{{}, {}, util::derive_seed({options.seed, attempt, 4}),
                        losses::Margin(options.margin)}};
  util::Rng rng(util::derive_seed({options.seed, attempt, 3}));
  for (int i = 0; i < 3; ++i) {
    pt.problem.x.push_back(random_input(rng, options.frames, options.config.input_dims));
  }
  for (int i = 0; i < 2; ++i) {
    pt.problem.y.push_back(random_input(rng, options.frames, options.g_input_dims));
  }
  return pt;
}

// A point is usable when no ReLU pre-activation lies within reach of the
// finite-difference step and no embedding is near zero norm.
bool well_conditioned(const CheckPoint& pt, const GradCheckOptions& options) {
  const double kink_margin = 100.0 * options.step;
  auto ok = [&](const NetParams& net, const FeatureMatrix& in, std::uint64_t role) {
    const auto tape = forward(
        net, in, ForwardOptions::train(util::derive_seed({pt.problem.seed, role})));
    for (std::size_t i = 0; i + 1 < tape.fc.size(); ++i) {
      if (tape.fc[i].pre.cwiseAbs().minCoeff() < kink_margin) return false;
    }
    return tape.output.norm() >= kMinEmbeddingNorm;
  };
  for (std::uint64_t role = 0; role < 3; ++role) {
    if (!ok(pt.f, pt.problem.x[role], role)) return false;
  }
  return ok(pt.g, pt.problem.y[0], 2) && ok(pt.g, pt.problem.y[1], 3);
}

}  // namespace

double gradient_relative_error(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
  return std::abs(analytic - numeric) / denom;
}

bool GradCheckReport::passed() const {
  return std::all_of(blocks.begin(), blocks.end(),
                     [](const GradCheckBlock& b) { return b.passed; });
}

double GradCheckReport::worst_relative_error() const {
  const auto* b = worst_block();
  return b == nullptr ? 0.0 : b->worst_relative_error;
}

const GradCheckBlock* GradCheckReport::worst_block() const {
  const GradCheckBlock* worst = nullptr;
  for (const auto& b : blocks) {
    if (worst == nullptr || b.worst_relative_error > worst->worst_relative_error) {
      worst = &b;
    }
  }
  return worst;
}

std::string GradCheckReport::to_text() const {
  std::ostringstream os;
  os << std::scientific << std::setprecision(3);
  for (const auto& b : blocks) {
    os << (b.passed ? "ok   " : "FAIL ") << std::left << std::setw(10) << b.loss
       << std::setw(16) << b.tensor << " n=" << std::setw(4) << b.entries
       << " rel=" << b.worst_relative_error << " abs=" << b.worst_absolute_error
       << "\n";
  }
  if (const auto* w = worst_block()) {
    os << (passed() ? "PASS" : "FAIL") << " worst relative error "
       << w->worst_relative_error << " (" << w->loss << " " << w->tensor
       << ") tolerance " << tolerance << "\n";
  }
  return os.str();
}

GradCheckReport grad_check(const GradCheckOptions& options) {
  std::uint64_t attempt = 0;
  CheckPoint pt = make_point(options, attempt);
  while (!well_conditioned(pt, options)) {
    if (++attempt == kMaxPointAttempts) {
      throw ValidationError("grad_check: no well-conditioned check point found");
    }
    pt = make_point(options, attempt);
  }
  const NetParams& f0 = pt.f;
  const NetParams& g0 = pt.g;
  const Problem& problem = pt.problem;

  GradCheckReport report;
  report.tolerance = options.tolerance;
  report.point_attempt = attempt;
  for (auto loss : {CheckedLoss::kEmbedding, CheckedLoss::kTriplet,
                    CheckedLoss::kObj0, CheckedLoss::kObj1, CheckedLoss::kBoth}) {
    NetGradients gf = NetParams::zeros(f0.config);
    NetGradients gg = NetParams::zeros(g0.config);
    evaluate(loss, f0, g0, problem, &gf, &gg);

    NetParams f = f0;
    NetParams g = g0;
    for (const char* side : {"f", "g"}) {
      const bool is_f = side[0] == 'f';
      if (!is_f && !uses_g(loss)) continue;
      NetParams& net = is_f ? f : g;
      auto analytic = tensors(is_f ? gf : gg);
      auto values = tensors(net);
      for (std::size_t k = 0; k < values.size(); ++k) {
        GradCheckBlock block;
        block.loss = name_of(loss);
        block.tensor = std::string(side) + "." + values[k].name;
        block.entries = static_cast<std::size_t>(values[k].values.size());
        const bool corrupt = options.corrupt_tensor == block.tensor;
        for (Eigen::Index i = 0; i < values[k].values.size(); ++i) {
          double& theta = values[k].values.data()[i];
          const double saved = theta;
          theta = saved + options.step;
          const double up = evaluate(loss, f, g, problem, nullptr, nullptr);
          theta = saved - options.step;
          const double down = evaluate(loss, f, g, problem, nullptr, nullptr);
          theta = saved;
          const double numeric = (up - down) / (2.0 * options.step);
          double a = analytic[k].values.data()[i];
          if (corrupt) a = 1.5 * a + 0.1;
          block.worst_relative_error =
              std::max(block.worst_relative_error, gradient_relative_error(a, numeric));
          block.worst_absolute_error =
              std::max(block.worst_absolute_error, std::abs(a - numeric));
        }
        block.passed = block.worst_relative_error < options.tolerance;
        report.blocks.push_back(std::move(block));
      }
    }
  }
  return report;
}

}  // namespace phonemv::net
