#pragma once

#include "phonemv/net/params.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace phonemv::net {

struct GradCheckOptions {
  /// Acoustic-side toy net. The multi-source net g copies it with
  /// `g_input_dims` inputs.
  NetConfig config{.input_dims = 3,
                   .hidden = 4,
                   .num_layers = 2,
                   .fc_dims = {8, 4},
                   .dropout = 0.4};
  int g_input_dims = 5;
  int frames = 3;
  std::uint64_t seed = 1;
  double tolerance = 1e-4;
  double step = 1e-4;
  /// Large enough that every hinge is strictly active (distances lie in
  /// [0, 2]), so the losses are smooth around the checked point.
  double margin = 2.5;
  /// Test hook: perturbs the analytic gradient of the named tensor
  /// (e.g. "f.fc0.W") so the report must flag it.
  std::optional<std::string> corrupt_tensor;
};

struct GradCheckBlock {
  std::string loss;    // embedding, triplet, obj0, obj1, both
  std::string tensor;  // "f.lstm0.fwd.W", "g.fc1.b", ...
  std::size_t entries = 0;
  double worst_relative_error = 0.0;
  double worst_absolute_error = 0.0;
  bool passed = true;
};

struct GradCheckReport {
  double tolerance = 0.0;
  /// Index of the sampled check point that passed the conditioning test.
  std::uint64_t point_attempt = 0;
  std::vector<GradCheckBlock> blocks;

  bool passed() const;
  double worst_relative_error() const;
  const GradCheckBlock* worst_block() const;
  std::string to_text() const;
};

/// Relative error used by the checker: |a - n| / max(|a|, |n|, 1e-6).
double gradient_relative_error(double analytic, double numeric);

/// Compares analytic gradients against central finite differences over every
/// parameter of seeded toy nets, for the raw embedding sum and for each loss.
/// Parameters and inputs are drawn from U(-1, 1); points where a ReLU sits
/// within 100 steps of its kink or an embedding norm is below 0.1 are
/// resampled.
GradCheckReport grad_check(const GradCheckOptions& options = {});

}  // namespace phonemv::net
