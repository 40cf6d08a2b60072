#include "phonemv/cli/model_store.hpp"

#include "phonemv/errors.hpp"
#include "phonemv/net/checkpoint.hpp"
#include "phonemv/util/binary_io.hpp"

#include <filesystem>

namespace phonemv::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

}  // namespace

std::vector<std::string> save_model(const std::string& dir, const train::RunConfig& config,
                                    const train::PreparedCorpus& data,
                                    const train::TrainResult& result) {
  std::vector<std::string> written;
  json j;
  j["config"] = train::to_json(config);
  j["pipelines"]["acoustic"] = data.acoustic.to_json();
  if (data.multi) j["pipelines"]["multi"] = data.multi->to_json();
  j["best_ap"] = result.best_ap ? json(*result.best_ap) : json(nullptr);
  j["best_epoch"] = result.best_epoch;
  if (result.g) {
    j["checkpoints"] = {{"f", "f.phnm"}, {"g", "g.phnm"}};
    net::save_checkpoint(join(dir, "f.phnm"), result.f);
    written.push_back(join(dir, "f.phnm"));
    net::save_checkpoint(join(dir, "g.phnm"), *result.g);
    written.push_back(join(dir, "g.phnm"));
  } else {
    j["checkpoints"] = {{"f", "model.phnm"}};
    net::save_checkpoint(join(dir, "model.phnm"), result.f);
    written.push_back(join(dir, "model.phnm"));
  }
  util::write_file_atomic(join(dir, kHistoryCsv), result.history.to_csv());
  written.push_back(join(dir, kHistoryCsv));
  util::write_file_atomic(join(dir, kModelJson), j.dump(2) + "\n");
  written.push_back(join(dir, kModelJson));
  return written;
}

Model load_model(const std::string& dir) {
  const std::string path = join(dir, kModelJson);
  if (!fs::exists(path)) throw IoError("no model at " + dir + " (missing model.json)");
  try {
    const json j = json::parse(util::read_file(path));
    Model m;
    m.config = train::parse_run_config(j.at("config").dump());
    m.acoustic = corpus::FeaturePipeline::from_json(j.at("pipelines").at("acoustic"));
    if (j.at("pipelines").contains("multi")) {
      m.multi = corpus::FeaturePipeline::from_json(j.at("pipelines").at("multi"));
    }
    if (!j.at("best_ap").is_null()) m.best_ap = j.at("best_ap").get<double>();
    m.best_epoch = j.at("best_epoch").get<int>();
    const auto& ck = j.at("checkpoints");
    m.f = net::load_checkpoint(join(dir, ck.at("f").get<std::string>()));
    if (ck.contains("g")) m.g = net::load_checkpoint(join(dir, ck.at("g").get<std::string>()));
    if (m.f.config.input_dims != m.acoustic.output_dims() ||
        (m.g && (!m.multi || m.g->config.input_dims != m.multi->output_dims()))) {
      throw ValidationError("model " + dir + ": checkpoint and pipeline dims disagree");
    }
    return m;
  } catch (const json::exception& e) {
    throw FormatError("model " + path + ": " + e.what());
  }
}

std::string primary_checkpoint(const std::string& dir) {
  const std::string single = join(dir, "model.phnm");
  return fs::exists(single) ? single : join(dir, "f.phnm");
}

}  // namespace phonemv::cli
