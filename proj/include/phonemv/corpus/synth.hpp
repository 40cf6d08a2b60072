#pragma once

#include "phonemv/corpus/attributes.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace phonemv::corpus {

/// Parameters of the synthetic multi-view corpus.
///
/// Each phone class owns a random mean trajectory (piecewise-linear through
/// `anchors` random points). Acoustic frames are the trajectory plus a
/// speaker offset plus Gaussian noise; bottleneck frames are a fixed random
/// linear map of the trajectory plus noise; the attribute view is the exact
/// inventory pattern of the canonical phone.
struct SynthConfig {
  int num_classes = 5;
  int acoustic_dims = 13;
  int bottleneck_dims = 64;
  int min_frames = 8;
  int max_frames = 30;
  int train_per_class = 40;
  int dev_per_class = 20;
  int test_per_class = 20;
  double noise_sigma = 1.0;
  double bottleneck_noise_sigma = 1.0;
  double mispronunciation_rate = 0.25;
  int num_speakers = 6;
  double speaker_sigma = 0.3;
  int anchors = 4;
  /// Also emit frame posterior lattices for the test split (GOP input).
  bool lattices = true;
  int states_per_phone = 2;
  /// Divides frame log-likelihoods before the softmax; larger is flatter.
  double lattice_temperature = 4.0;
  /// Phone ids of the classes; empty means the built-in ordering below.
  std::vector<PhoneId> phones;
};

SynthConfig parse_synth_config(const std::string& json_text);
std::string synth_config_to_json(const SynthConfig& config);

/// Phones used when SynthConfig::phones is empty, in class order.
const std::vector<PhoneId>& default_synth_phones();

struct SynthSummary {
  std::size_t train = 0;
  std::size_t dev = 0;
  std::size_t test = 0;
  std::size_t mispronounced = 0;
};

/// Writes manifest.jsonl, inventory.json, synth_config.json, feature files
/// and (optionally) lattices.jsonl under `out_dir`. A pure function of
/// (config, seed, inventory): identical inputs produce identical bytes.
SynthSummary synth_corpus(const SynthConfig& config, std::uint64_t seed,
                          const std::string& out_dir,
                          const AttributeInventory& inventory =
                              default_inventory());

}  // namespace phonemv::corpus
