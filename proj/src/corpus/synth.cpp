#include "phonemv/corpus/synth.hpp"

#include "phonemv/corpus/feature_file.hpp"
#include "phonemv/corpus/manifest.hpp"
#include "phonemv/errors.hpp"
#include "phonemv/gop/lattice_io.hpp"
#include "phonemv/util/binary_io.hpp"
#include "phonemv/util/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>

namespace phonemv::corpus {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<PhoneId>& default_synth_phones() {
  static const std::vector<PhoneId> phones = {
      "a", "i",   "u",  "sh", "iang", "b", "m",  "ai", "e",  "ong",
      "x", "l",   "ch", "v",  "er",   "k", "ao", "ie", "ing", "z"};
  return phones;
}

SynthConfig parse_synth_config(const std::string& json_text) {
  SynthConfig c;
  try {
    const auto j = json::parse(json_text);
    c.num_classes = j.value("num_classes", c.num_classes);
    c.acoustic_dims = j.value("acoustic_dims", c.acoustic_dims);
    c.bottleneck_dims = j.value("bottleneck_dims", c.bottleneck_dims);
    c.min_frames = j.value("min_frames", c.min_frames);
    c.max_frames = j.value("max_frames", c.max_frames);
    c.train_per_class = j.value("train_per_class", c.train_per_class);
    c.dev_per_class = j.value("dev_per_class", c.dev_per_class);
    c.test_per_class = j.value("test_per_class", c.test_per_class);
    c.noise_sigma = j.value("noise_sigma", c.noise_sigma);
    c.bottleneck_noise_sigma =
        j.value("bottleneck_noise_sigma", c.bottleneck_noise_sigma);
    c.mispronunciation_rate =
        j.value("mispronunciation_rate", c.mispronunciation_rate);
    c.num_speakers = j.value("num_speakers", c.num_speakers);
    c.speaker_sigma = j.value("speaker_sigma", c.speaker_sigma);
    c.anchors = j.value("anchors", c.anchors);
    c.lattices = j.value("lattices", c.lattices);
    c.states_per_phone = j.value("states_per_phone", c.states_per_phone);
    c.lattice_temperature =
        j.value("lattice_temperature", c.lattice_temperature);
    c.phones = j.value("phones", c.phones);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed synth config: ") + e.what());
  }
  return c;
}

std::string synth_config_to_json(const SynthConfig& c) {
  json j;
  j["num_classes"] = c.num_classes;
  j["acoustic_dims"] = c.acoustic_dims;
  j["bottleneck_dims"] = c.bottleneck_dims;
  j["min_frames"] = c.min_frames;
  j["max_frames"] = c.max_frames;
  j["train_per_class"] = c.train_per_class;
  j["dev_per_class"] = c.dev_per_class;
  j["test_per_class"] = c.test_per_class;
  j["noise_sigma"] = c.noise_sigma;
  j["bottleneck_noise_sigma"] = c.bottleneck_noise_sigma;
  j["mispronunciation_rate"] = c.mispronunciation_rate;
  j["num_speakers"] = c.num_speakers;
  j["speaker_sigma"] = c.speaker_sigma;
  j["anchors"] = c.anchors;
  j["lattices"] = c.lattices;
  j["states_per_phone"] = c.states_per_phone;
  j["lattice_temperature"] = c.lattice_temperature;
  j["phones"] = c.phones;
  return j.dump(2) + "\n";
}

namespace {

void validate_config(const SynthConfig& c, const std::vector<PhoneId>& phones,
                     const AttributeInventory& inventory) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ValidationError(std::string("synth config: ") + what);
  };
  require(c.num_classes >= 2, "num_classes must be >= 2");
  require(static_cast<std::size_t>(c.num_classes) <= phones.size(),
          "num_classes exceeds the phone list");
  require(c.acoustic_dims >= 1 && c.bottleneck_dims >= 1, "dims must be >= 1");
  require(c.min_frames >= 1 && c.max_frames >= c.min_frames,
          "need 1 <= min_frames <= max_frames");
  require(c.train_per_class >= 0 && c.dev_per_class >= 0 &&
              c.test_per_class >= 0,
          "per-class counts must be >= 0");
  require(c.noise_sigma >= 0 && c.bottleneck_noise_sigma >= 0 &&
              c.speaker_sigma >= 0,
          "noise levels must be >= 0");
  require(c.mispronunciation_rate >= 0 && c.mispronunciation_rate <= 1,
          "mispronunciation_rate must be in [0, 1]");
  require(c.num_speakers >= 1, "num_speakers must be >= 1");
  require(c.anchors >= 1, "anchors must be >= 1");
  require(c.states_per_phone >= 1, "states_per_phone must be >= 1");
  require(c.lattice_temperature > 0, "lattice_temperature must be > 0");
  for (int k = 0; k < c.num_classes; ++k) {
    if (!inventory.contains(phones[k])) {
      throw ValidationError("synth config: phone '" + phones[k] +
                            "' not in the attribute inventory");
    }
  }
  std::vector<PhoneId> sorted(phones.begin(), phones.begin() + c.num_classes);
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
          "phone list has duplicates");
}

// Piecewise-linear class trajectory sampled at `frames` points.
RowMatrix<double> trajectory(const RowMatrix<double>& anchors, int frames) {
  const Eigen::Index n = anchors.rows();
  RowMatrix<double> out(frames, anchors.cols());
  for (int t = 0; t < frames; ++t) {
    const double pos =
        frames == 1 ? 0.0
                    : static_cast<double>(t) * static_cast<double>(n - 1) /
                          static_cast<double>(frames - 1);
    const auto lo = std::min<Eigen::Index>(static_cast<Eigen::Index>(pos), n - 1);
    const auto hi = std::min<Eigen::Index>(lo + 1, n - 1);
    const double w = pos - static_cast<double>(lo);
    out.row(t) = (1.0 - w) * anchors.row(lo) + w * anchors.row(hi);
  }
  return out;
}

RowMatrix<double> gaussian(util::Rng& rng, Eigen::Index rows, Eigen::Index cols,
                           double sigma) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RowMatrix<double> m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = sigma * normal(rng);
  }
  return m;
}

std::string padded(std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06zu", n);
  return buf;
}

}  // namespace

SynthSummary synth_corpus(const SynthConfig& config, std::uint64_t seed,
                          const std::string& out_dir,
                          const AttributeInventory& inventory) {
  const auto& phones =
      config.phones.empty() ? default_synth_phones() : config.phones;
  validate_config(config, phones, inventory);
  const int K = config.num_classes;

  std::error_code ec;
  fs::create_directories(fs::path(out_dir) / "feats", ec);
  fs::create_directories(fs::path(out_dir) / "attributes", ec);
  if (config.lattices) fs::create_directories(fs::path(out_dir) / "lattices", ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw IoError("cannot create corpus directory '" + out_dir + "'");
  }

  util::Rng rng(seed);
  std::vector<RowMatrix<double>> anchors;
  for (int k = 0; k < K; ++k) {
    anchors.push_back(gaussian(rng, config.anchors, config.acoustic_dims, 1.0));
  }
  const RowMatrix<double> bottleneck_map =
      gaussian(rng, config.acoustic_dims, config.bottleneck_dims,
               1.0 / std::sqrt(static_cast<double>(config.acoustic_dims)));
  const RowMatrix<double> speaker_offsets = gaussian(
      rng, config.num_speakers, config.acoustic_dims, config.speaker_sigma);
  std::vector<double> state_split;
  for (int k = 0; k < K * config.states_per_phone; ++k) {
    state_split.push_back(std::uniform_real_distribution<double>(0.5, 1.5)(rng));
  }

  for (int k = 0; k < K; ++k) {
    write_feature_matrix(
        (fs::path(out_dir) / "attributes" / (phones[k] + ".phnf")).string(),
        encode_attribute_pattern(phones[k], inventory));
  }

  // Exact mispronunciation quota over the test split.
  const std::size_t n_test = static_cast<std::size_t>(K) * config.test_per_class;
  const auto n_mis = static_cast<std::size_t>(
      std::llround(config.mispronunciation_rate * static_cast<double>(n_test)));
  std::vector<std::size_t> order(n_test);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> spoken_of_test(n_test, -1);
  for (std::size_t i = 0; i < n_mis; ++i) {
    const int canonical = static_cast<int>(order[i] % K);
    int other = std::uniform_int_distribution<int>(0, K - 2)(rng);
    if (other >= canonical) ++other;
    spoken_of_test[order[i]] = other;
  }

  std::vector<PhoneId> state_phone;
  for (int k = 0; k < K; ++k) {
    for (int s = 0; s < config.states_per_phone; ++s) state_phone.push_back(phones[k]);
  }
  if (config.lattices) {
    util::write_file_atomic((fs::path(out_dir) / "lattices" / "states.json").string(),
                            gop::encode_state_map(state_phone));
  }

  std::vector<PhoneSegment> segments;
  std::vector<gop::GopItem> gop_items;
  SynthSummary summary;
  std::uniform_int_distribution<int> frames_dist(config.min_frames,
                                                 config.max_frames);
  std::uniform_int_distribution<int> speaker_dist(0, config.num_speakers - 1);

  const std::pair<Split, int> splits[] = {{Split::kTrain, config.train_per_class},
                                          {Split::kDev, config.dev_per_class},
                                          {Split::kTest, config.test_per_class}};
  std::size_t test_index = 0;
  for (const auto& [split, per_class] : splits) {
    for (int i = 0; i < per_class; ++i) {
      for (int k = 0; k < K; ++k) {
        int spoken = k;
        if (split == Split::kTest) {
          if (spoken_of_test[test_index] >= 0) spoken = spoken_of_test[test_index];
          ++test_index;
        }
        const int frames = frames_dist(rng);
        const int speaker = speaker_dist(rng);
        const RowMatrix<double> clean = trajectory(anchors[spoken], frames);
        RowMatrix<double> acoustic =
            clean + gaussian(rng, frames, config.acoustic_dims, config.noise_sigma);
        acoustic.rowwise() += speaker_offsets.row(speaker);
        const RowMatrix<double> bottleneck =
            clean * bottleneck_map +
            gaussian(rng, frames, config.bottleneck_dims,
                     config.bottleneck_noise_sigma);

        PhoneSegment seg;
        seg.id = to_string(split) + "-" + padded(segments.size());
        seg.spoken = phones[spoken];
        seg.canonical = phones[k];
        seg.speaker = (split == Split::kTest ? "l2spk" : "spk") + padded(speaker);
        seg.split = split;
        seg.views[kAcousticView] = "feats/" + seg.id + ".acoustic.phnf";
        seg.views[kBottleneckView] = "feats/" + seg.id + ".bottleneck.phnf";
        // The attribute view is prompt knowledge: the canonical phone's pattern.
        seg.views[kAttributeView] = "attributes/" + phones[k] + ".phnf";
        write_feature_matrix((fs::path(out_dir) / seg.views[kAcousticView]).string(),
                             acoustic);
        write_feature_matrix(
            (fs::path(out_dir) / seg.views[kBottleneckView]).string(), bottleneck);

        if (config.lattices && split == Split::kTest) {
          // Gaussian class posteriors of each frame, spread over the states.
          gop::PosteriorLattice lattice;
          lattice.state_phone = state_phone;
          lattice.posteriors.resize(frames, static_cast<Eigen::Index>(state_phone.size()));
          const double scale = 2.0 * config.lattice_temperature *
                               std::max(config.noise_sigma * config.noise_sigma, 1e-6) *
                               config.acoustic_dims;
          std::vector<RowMatrix<double>> means;
          for (int q = 0; q < K; ++q) means.push_back(trajectory(anchors[q], frames));
          for (int t = 0; t < frames; ++t) {
            Eigen::VectorXd logits(state_phone.size());
            for (int q = 0; q < K; ++q) {
              const double d2 = (acoustic.row(t) - means[q].row(t)).squaredNorm();
              for (int s = 0; s < config.states_per_phone; ++s) {
                const int col = q * config.states_per_phone + s;
                logits(col) = -d2 / scale + std::log(state_split[col]);
              }
            }
            logits.array() -= logits.maxCoeff();
            Eigen::VectorXd p = logits.array().exp();
            p /= p.sum();
            lattice.posteriors.row(t) = p.transpose();
          }
          gop::GopItem item;
          item.id = seg.id;
          item.canonical = seg.canonical;
          item.spoken = seg.spoken;
          item.lattice = "lattices/" + seg.id + ".phnf";
          item.states = "lattices/states.json";
          item.start = 0;
          item.end = frames;
          gop::write_lattice(lattice, (fs::path(out_dir) / item.lattice).string());
          gop_items.push_back(std::move(item));
        }

        switch (split) {
          case Split::kTrain: ++summary.train; break;
          case Split::kDev: ++summary.dev; break;
          case Split::kTest:
            ++summary.test;
            if (!seg.correct()) ++summary.mispronounced;
            break;
        }
        segments.push_back(std::move(seg));
      }
    }
  }

  util::write_file_atomic((fs::path(out_dir) / "inventory.json").string(),
                          inventory.to_json());
  json stamped = json::parse(synth_config_to_json(config));
  stamped["seed"] = seed;
  util::write_file_atomic((fs::path(out_dir) / "synth_config.json").string(),
                          stamped.dump(2) + "\n");
  if (config.lattices) {
    util::write_file_atomic((fs::path(out_dir) / "lattices.jsonl").string(),
                            gop::serialize_gop_items(gop_items));
  }
  util::write_file_atomic((fs::path(out_dir) / "manifest.jsonl").string(),
                          serialize_manifest(segments));
  return summary;
}

}  // namespace phonemv::corpus
