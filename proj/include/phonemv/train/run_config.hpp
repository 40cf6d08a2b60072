#pragma once

#include "phonemv/corpus/pipeline.hpp"
#include "phonemv/losses/losses.hpp"
#include "phonemv/net/params.hpp"
#include "phonemv/train/adadelta.hpp"
#include "phonemv/train/trainer.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace phonemv::train {

enum class TrainMode { kSingle, kMulti };

TrainMode parse_mode(const std::string& text);
const char* to_string(TrainMode mode);

/// Everything one training run needs besides the corpus. JSON sections:
/// "net", "pipeline", "schedule", "optimizer", plus "mode", "view" and
/// "objective". Missing keys keep their defaults; unknown keys are rejected.
/// net.input_dims is ignored; it follows the prepared view width.
struct RunConfig {
  TrainMode mode = TrainMode::kSingle;
  std::string view = "attribute";
  losses::Objective objective = losses::Objective::kBoth;
  net::NetConfig net;
  corpus::PipelineConfig pipeline;
  TrainSchedule schedule;
  AdadeltaConfig optimizer;

  void validate() const;
};

RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);
nlohmann::json to_json(const RunConfig& config);

}  // namespace phonemv::train
