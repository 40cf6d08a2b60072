#include "phonemv/train/run_config.hpp"

#include "phonemv/corpus/manifest.hpp"
#include "phonemv/errors.hpp"
#include "phonemv/util/binary_io.hpp"

#include <set>

namespace phonemv::train {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::string& section,
                    const std::set<std::string>& known) {
  if (!j.is_object()) throw ValidationError("run config: '" + section + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) {
      throw ValidationError("run config: unknown key '" + section + "." + key + "'");
    }
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

TrainMode parse_mode(const std::string& text) {
  if (text == "single") return TrainMode::kSingle;
  if (text == "multi") return TrainMode::kMulti;
  throw ValidationError("unknown mode '" + text + "'");
}

const char* to_string(TrainMode mode) {
  return mode == TrainMode::kSingle ? "single" : "multi";
}

void RunConfig::validate() const {
  net::NetConfig n = net;
  n.input_dims = 1;
  n.validate();
  if (mode == TrainMode::kMulti &&
      (view == corpus::kAcousticView || !corpus::is_known_view(view))) {
    throw ValidationError("run config: multi-view training needs view attribute or bottleneck");
  }
  if (pipeline.target_frames < 1) {
    throw ValidationError("run config: target_frames must be >= 1");
  }
  if (pipeline.pca_dims < 0) throw ValidationError("run config: pca_dims must be >= 0");
  schedule.validate();
  optimizer.validate();
}

RunConfig parse_run_config(const std::string& text) {
  RunConfig c;
  try {
    const json j = json::parse(text);
    reject_unknown(j, "config",
                   {"mode", "view", "objective", "net", "pipeline", "schedule", "optimizer"});
    if (j.contains("mode")) c.mode = parse_mode(j.at("mode").get<std::string>());
    read(j, "view", c.view);
    if (j.contains("objective")) {
      c.objective = losses::parse_objective(j.at("objective").get<std::string>());
    }
    if (j.contains("net")) {
      const auto& n = j.at("net");
      reject_unknown(n, "net", {"input_dims", "hidden", "num_layers", "fc_dims", "dropout"});
      read(n, "hidden", c.net.hidden);
      read(n, "num_layers", c.net.num_layers);
      read(n, "fc_dims", c.net.fc_dims);
      read(n, "dropout", c.net.dropout);
    }
    if (j.contains("pipeline")) {
      const auto& p = j.at("pipeline");
      reject_unknown(p, "pipeline", {"target_frames", "pca_dims"});
      read(p, "target_frames", c.pipeline.target_frames);
      read(p, "pca_dims", c.pipeline.pca_dims);
    }
    if (j.contains("schedule")) {
      const auto& s = j.at("schedule");
      reject_unknown(s, "schedule",
                     {"max_epochs", "ap_every", "batch_size", "seed", "margin",
                      "pairs_per_label", "ordered_pairs", "dev_max_pairs"});
      read(s, "max_epochs", c.schedule.max_epochs);
      read(s, "ap_every", c.schedule.ap_every);
      read(s, "batch_size", c.schedule.batch_size);
      read(s, "seed", c.schedule.seed);
      read(s, "margin", c.schedule.margin);
      read(s, "pairs_per_label", c.schedule.sampling.pairs_per_label);
      read(s, "ordered_pairs", c.schedule.sampling.ordered);
      read(s, "dev_max_pairs", c.schedule.dev_max_pairs);
    }
    if (j.contains("optimizer")) {
      const auto& o = j.at("optimizer");
      reject_unknown(o, "optimizer", {"rho", "epsilon", "lr"});
      read(o, "rho", c.optimizer.rho);
      read(o, "epsilon", c.optimizer.epsilon);
      read(o, "lr", c.optimizer.lr);
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed run config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::string& path) {
  return parse_run_config(util::read_file(path));
}

json to_json(const RunConfig& c) {
  return {{"mode", to_string(c.mode)},
          {"view", c.view},
          {"objective", losses::to_string(c.objective)},
          {"net",
           {{"hidden", c.net.hidden},
            {"num_layers", c.net.num_layers},
            {"fc_dims", c.net.fc_dims},
            {"dropout", c.net.dropout}}},
          {"pipeline",
           {{"target_frames", c.pipeline.target_frames}, {"pca_dims", c.pipeline.pca_dims}}},
          {"schedule",
           {{"max_epochs", c.schedule.max_epochs},
            {"ap_every", c.schedule.ap_every},
            {"batch_size", c.schedule.batch_size},
            {"seed", c.schedule.seed},
            {"margin", c.schedule.margin},
            {"pairs_per_label", c.schedule.sampling.pairs_per_label},
            {"ordered_pairs", c.schedule.sampling.ordered},
            {"dev_max_pairs", c.schedule.dev_max_pairs}}},
          {"optimizer",
           {{"rho", c.optimizer.rho}, {"epsilon", c.optimizer.epsilon}, {"lr", c.optimizer.lr}}}};
}

}  // namespace phonemv::train
