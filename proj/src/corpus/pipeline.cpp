#include "phonemv/corpus/pipeline.hpp"

#include "phonemv/errors.hpp"

namespace phonemv::corpus {

namespace {

std::vector<FeatureMatrix> load_all(const SegmentSet& set,
                                    const std::string& view) {
  std::vector<FeatureMatrix> out;
  out.reserve(set.size());
  for (const auto& s : set.segments()) out.push_back(set.load_view(s, view));
  return out;
}

nlohmann::json vector_json(const VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

VectorXd vector_from(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

CmvnStats fit_cmvn(const SegmentSet& segments, const std::string& view) {
  const auto matrices = load_all(segments, view);
  return fit_cmvn(std::span<const FeatureMatrix>(matrices));
}

FeaturePipeline FeaturePipeline::fit(const SegmentSet& train,
                                     const std::string& view,
                                     const PipelineConfig& config) {
  if (!is_known_view(view)) throw ValidationError("unknown view '" + view + "'");
  if (train.size() == 0) {
    throw ValidationError("feature pipeline: empty training split");
  }
  FeaturePipeline p;
  p.view_ = view;
  p.config_ = config;
  auto matrices = load_all(train, view);
  p.output_dims_ = matrices.front().cols();
  if (view == kAttributeView) return p;

  if (view == kBottleneckView && config.pca_dims > 0 &&
      config.pca_dims < matrices.front().cols()) {
    p.pca_ = fit_pca<double>(std::span<const FeatureMatrix>(matrices),
                             config.pca_dims);
    for (auto& m : matrices) m = apply_pca(m, *p.pca_);
    p.output_dims_ = config.pca_dims;
  }
  p.cmvn_ = fit_cmvn(std::span<const FeatureMatrix>(matrices));
  return p;
}

FeatureMatrix FeaturePipeline::apply(const FeatureMatrix& raw) const {
  if (view_ == kAttributeView) return raw;
  FeatureMatrix m = pca_ ? apply_pca(raw, *pca_) : raw;
  if (cmvn_) m = apply_cmvn(m, *cmvn_);
  return pad_or_truncate(m, config_.target_frames);
}

nlohmann::json FeaturePipeline::to_json() const {
  nlohmann::json j;
  j["view"] = view_;
  j["target_frames"] = config_.target_frames;
  j["pca_dims"] = config_.pca_dims;
  j["output_dims"] = output_dims_;
  if (cmvn_) {
    j["cmvn"] = {{"mean", vector_json(cmvn_->mean)},
                 {"stddev", vector_json(cmvn_->stddev)},
                 {"count", cmvn_->count}};
  }
  if (pca_) {
    nlohmann::json cols = nlohmann::json::array();
    for (Eigen::Index c = 0; c < pca_->projection.cols(); ++c) {
      cols.push_back(vector_json(pca_->projection.col(c)));
    }
    j["pca"] = {{"mean", vector_json(pca_->mean)},
                {"projection_columns", cols},
                {"variances", vector_json(pca_->variances)}};
  }
  return j;
}

FeaturePipeline FeaturePipeline::from_json(const nlohmann::json& j) {
  try {
    FeaturePipeline p;
    p.view_ = j.at("view").get<std::string>();
    if (!is_known_view(p.view_)) {
      throw ValidationError("unknown view '" + p.view_ + "'");
    }
    p.config_.target_frames = j.at("target_frames").get<int>();
    p.config_.pca_dims = j.at("pca_dims").get<int>();
    p.output_dims_ = j.at("output_dims").get<Eigen::Index>();
    if (j.contains("cmvn")) {
      const auto& c = j.at("cmvn");
      p.cmvn_ = CmvnStats{vector_from(c.at("mean")), vector_from(c.at("stddev")),
                          c.at("count").get<std::uint64_t>()};
    }
    if (j.contains("pca")) {
      const auto& c = j.at("pca");
      PcaModel<double> pca;
      pca.mean = vector_from(c.at("mean"));
      pca.variances = vector_from(c.at("variances"));
      const auto& cols = c.at("projection_columns");
      pca.projection.resize(pca.mean.size(), static_cast<Eigen::Index>(cols.size()));
      for (std::size_t k = 0; k < cols.size(); ++k) {
        const VectorXd col = vector_from(cols[k]);
        if (col.size() != pca.mean.size()) {
          throw ValidationError("pipeline: PCA column size mismatch");
        }
        pca.projection.col(static_cast<Eigen::Index>(k)) = col;
      }
      p.pca_ = std::move(pca);
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("pipeline: ") + e.what());
  }
}

std::vector<FeatureMatrix> prepare_view(const SegmentSet& set,
                                        const std::string& view,
                                        const FeaturePipeline& pipeline) {
  std::vector<FeatureMatrix> out;
  out.reserve(set.size());
  for (const auto& s : set.segments()) {
    out.push_back(pipeline.apply(set.load_view(s, view)));
  }
  return out;
}

}  // namespace phonemv::corpus
