#pragma once

#include "phonemv/corpus/pipeline.hpp"
#include "phonemv/net/params.hpp"
#include "phonemv/train/run_config.hpp"
#include "phonemv/train/trainer.hpp"

#include <optional>
#include <string>
#include <vector>

namespace phonemv::cli {

/// A trained model directory:
///   model.json   run config, fitted pipelines, best AP/epoch, checkpoint names
///   model.phnm   single-view net, or f.phnm + g.phnm for multi-view
///   history.csv
struct Model {
  train::RunConfig config;
  corpus::FeaturePipeline acoustic;
  std::optional<corpus::FeaturePipeline> multi;
  net::NetParams f;
  std::optional<net::NetParams> g;
  std::optional<double> best_ap;
  int best_epoch = 0;
};

inline constexpr const char* kModelJson = "model.json";
inline constexpr const char* kHistoryCsv = "history.csv";

/// Writes the model files into `dir` (created if needed) and returns the
/// paths written.
std::vector<std::string> save_model(const std::string& dir, const train::RunConfig& config,
                                    const train::PreparedCorpus& data,
                                    const train::TrainResult& result);

Model load_model(const std::string& dir);

/// Path of the acoustic-side checkpoint (model.phnm or f.phnm).
std::string primary_checkpoint(const std::string& dir);

}  // namespace phonemv::cli
