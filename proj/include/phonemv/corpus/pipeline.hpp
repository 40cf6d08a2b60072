#pragma once

#include "phonemv/corpus/manifest.hpp"
#include "phonemv/corpus/normalize.hpp"
#include "phonemv/corpus/pca.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace phonemv::corpus {

struct PipelineConfig {
  int target_frames = kDefaultTargetFrames;
  /// Bottleneck reduction width; 0 disables PCA.
  int pca_dims = 40;
};

/// Loads `view` of every segment in `segments` and fits global CMVN on it.
CmvnStats fit_cmvn(const SegmentSet& segments, const std::string& view);

/// Per-view preparation fitted on the training split:
///   acoustic:   CMVN -> pad/truncate
///   bottleneck: PCA (when pca_dims < dims) -> CMVN -> pad/truncate
///   attribute:  passed through unchanged (3 x 31 binary pattern)
class FeaturePipeline {
 public:
  static FeaturePipeline fit(const SegmentSet& train, const std::string& view,
                             const PipelineConfig& config);

  FeatureMatrix apply(const FeatureMatrix& raw) const;

  /// Fitted state, doubles stored at full precision.
  nlohmann::json to_json() const;
  static FeaturePipeline from_json(const nlohmann::json& j);

  const std::string& view() const { return view_; }
  const PipelineConfig& config() const { return config_; }
  /// Feature dims the network sees after preparation.
  Eigen::Index output_dims() const { return output_dims_; }

  const std::optional<CmvnStats>& cmvn() const { return cmvn_; }
  const std::optional<PcaModel<double>>& pca() const { return pca_; }

 private:
  std::string view_;
  PipelineConfig config_;
  std::optional<CmvnStats> cmvn_;
  std::optional<PcaModel<double>> pca_;
  Eigen::Index output_dims_ = 0;
};

/// Loads and prepares `view` for every segment of `set`, in order.
std::vector<FeatureMatrix> prepare_view(const SegmentSet& set,
                                        const std::string& view,
                                        const FeaturePipeline& pipeline);

}  // namespace phonemv::corpus
