#pragma once

#include "phonemv/corpus/pipeline.hpp"
#include "phonemv/losses/losses.hpp"
#include "phonemv/net/params.hpp"
#include "phonemv/train/adadelta.hpp"
#include "phonemv/train/sampling.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace phonemv::train {

struct TrainSchedule {
  int max_epochs = 200;
  int ap_every = 20;
  int batch_size = 32;
  std::uint64_t seed = 1;
  double margin = losses::kDefaultMargin;
  PairSampling sampling;
  /// Dev pairs scored per AP evaluation (a fixed seeded sample above this).
  std::size_t dev_max_pairs = 20000;

  void validate() const;
};

struct HistoryEntry {
  int epoch = 0;
  double mean_loss = 0.0;
  std::optional<double> dev_ap;
};

struct History {
  std::vector<HistoryEntry> entries;

  /// Largest dev AP recorded, if any evaluation ran.
  std::optional<double> best_ap() const;
  /// Columns epoch, mean_loss, dev_ap; dev_ap blank between evaluations.
  std::string to_csv() const;
};

/// Train and dev splits with prepared features. `y_train` holds the
/// multi-source view and is empty for single-view training.
struct PreparedCorpus {
  corpus::SegmentSet train;
  corpus::SegmentSet dev;
  corpus::FeaturePipeline acoustic;
  std::optional<corpus::FeaturePipeline> multi;
  std::vector<FeatureMatrix> x_train;
  std::vector<FeatureMatrix> x_dev;
  std::vector<FeatureMatrix> y_train;
};

/// Fits pipelines on the train split and prepares train/dev features.
/// `multi_view` names the multi-source view to prepare, if any.
PreparedCorpus prepare_corpus(const corpus::SegmentSet& all,
                              const corpus::PipelineConfig& pipeline,
                              const std::optional<std::string>& multi_view);

struct TrainOptions {
  /// Threads used for per-item gradients; results do not depend on it.
  int workers = 1;
  std::function<void(const HistoryEntry&)> on_epoch;
};

struct TrainResult {
  net::NetParams f;
  std::optional<net::NetParams> g;
  History history;
  std::optional<double> best_ap;
  /// Epoch whose parameters were retained (the last epoch when AP never ran).
  int best_epoch = 0;
};

/// Siamese triplet training of one net on the acoustic view. `config`'s
/// input_dims is replaced by the prepared acoustic width.
TrainResult train_single_view(const PreparedCorpus& data, net::NetConfig config,
                              const TrainSchedule& schedule,
                              const AdadeltaConfig& optimizer,
                              const TrainOptions& options = {});

/// Joint training of f (acoustic) and g (multi-source view) with the chosen
/// cross-view objective. Dev AP is computed from f embeddings.
TrainResult train_multi_view(const PreparedCorpus& data, losses::Objective objective,
                             net::NetConfig config, const TrainSchedule& schedule,
                             const AdadeltaConfig& optimizer,
                             const TrainOptions& options = {});

/// Dev AP of `f` over the fixed seeded pair sample used during training.
double dev_average_precision(const net::NetParams& f, const corpus::SegmentSet& dev,
                             const std::vector<FeatureMatrix>& x_dev,
                             const TrainSchedule& schedule, int workers = 1);

/// Mean triplet loss over `triplets` for precomputed embeddings aligned with
/// the set the triplets index.
double epoch_triplet_loss(const std::vector<Triplet>& triplets,
                          const std::vector<Embedding>& embeddings,
                          const losses::Margin& margin);

}  // namespace phonemv::train
