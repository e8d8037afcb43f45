#include "hcr/pipeline.hpp"

#include <string>

#include "hcr/error.hpp"
#include "hcr/io.hpp"
#include "hcr/metrics.hpp"
#include "hcr/parallel.hpp"

namespace hcr {

EvalMetric metric_from_name(std::string_view name) {
  if (name == "emd") return EvalMetric::emd;
  if (name == "avg-euclid") return EvalMetric::avg_euclid;
  if (name == "avg-cos") return EvalMetric::avg_cos;
  if (name == "max-euclid") return EvalMetric::max_euclid;
  if (name == "max-cos") return EvalMetric::max_cos;
  if (name == "aligned") return EvalMetric::aligned;
  throw InvalidArgument("unknown metric '" + std::string(name) +
                        "'; expected emd, avg-euclid, avg-cos, max-euclid, max-cos, or aligned");
}

std::string_view metric_name(EvalMetric metric) {
  switch (metric) {
    case EvalMetric::emd:
      return "emd";
    case EvalMetric::avg_euclid:
      return "avg-euclid";
    case EvalMetric::avg_cos:
      return "avg-cos";
    case EvalMetric::max_euclid:
      return "max-euclid";
    case EvalMetric::max_cos:
      return "max-cos";
    case EvalMetric::aligned:
      return "aligned";
  }
  throw InvalidArgument("unknown metric value");
}

double representation_similarity(const Matrix& a, const Matrix& b, EvalMetric metric) {
  switch (metric) {
    case EvalMetric::emd:
      return emd_similarity(a, b);
    case EvalMetric::avg_euclid:
      return global_pool_similarity(a, b, PoolKind::average, MetricKind::euclidean);
    case EvalMetric::avg_cos:
      return global_pool_similarity(a, b, PoolKind::average, MetricKind::cosine);
    case EvalMetric::max_euclid:
      return global_pool_similarity(a, b, PoolKind::max, MetricKind::euclidean);
    case EvalMetric::max_cos:
      return global_pool_similarity(a, b, PoolKind::max, MetricKind::cosine);
    case EvalMetric::aligned:
      return aligned_similarity(a, b);
  }
  throw InvalidArgument("unknown metric value");
}

SimilarityFn make_metric(EvalMetric metric) {
  return [metric](const DatasetItem& query, const DatasetItem& support) {
    return representation_similarity(query.data, support.data, metric);
  };
}

Dataset load_sequence_dataset(const std::filesystem::path& manifest_path) {
  const std::vector<ManifestItem> entries = read_manifest(manifest_path);
  const std::filesystem::path base = manifest_path.parent_path();

  Dataset dataset;
  for (const ManifestItem& entry : entries) {
    std::filesystem::path file(entry.file);
    if (file.is_relative()) file = base / file;
    dataset.add_item(read_hcrf(file), entry.label, entry.id);
  }
  return dataset;
}

Dataset preprocess(const Dataset& sequences, const PipelineParams& params) {
  if (params.k_subactions < 1) throw InvalidArgument("k_subactions must be positive");
  if (params.frames_per_segment.has_value() && *params.frames_per_segment < 1) {
    throw InvalidArgument("frames_per_segment must be positive");
  }

  Dataset out = sequences;
  parallel_for(static_cast<int>(out.items.size()), [&](int i) {
    const DatasetItem& item = sequences.items[static_cast<std::size_t>(i)];
    if (item.data.rows() < params.k_subactions) {
      throw InvalidInput("item '" + item.id + "' has " + std::to_string(item.data.rows()) +
                         " frames; clustering into " + std::to_string(params.k_subactions) +
                         " segments needs at least that many");
    }
    FeatureSequence seq{item.data, item.id, ""};
    const Segmentation seg = cluster_sequence(seq, params.k_subactions);
    out.items[static_cast<std::size_t>(i)].data =
        segment_representation(seq, seg, params.frames_per_segment);
  });
  return out;
}

}  // namespace hcr
