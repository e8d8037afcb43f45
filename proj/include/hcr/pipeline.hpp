#pragma once

#include <filesystem>
#include <optional>
#include <string_view>

#include "hcr/fewshot.hpp"
#include "hcr/seqcluster.hpp"

namespace hcr {

// The comparison metrics an evaluation can run on. `emd` is the transport
// matcher; the pooled and aligned variants are the collapse/position
// baselines it is benchmarked against.
enum class EvalMetric { emd, avg_euclid, avg_cos, max_euclid, max_cos, aligned };

EvalMetric metric_from_name(std::string_view name);
std::string_view metric_name(EvalMetric metric);

// Similarity between two already-preprocessed representations.
double representation_similarity(const Matrix& a, const Matrix& b, EvalMetric metric);

// Wraps representation_similarity over dataset items.
SimilarityFn make_metric(EvalMetric metric);

struct PipelineParams {
  int k_subactions = 8;
  // Per-segment frame subsample; nullopt averages every frame of a segment.
  std::optional<int> frames_per_segment = 4;
};

// Reads a manifest and every sequence file it names (paths resolved against
// the manifest's directory). Classes appear in first-use order.
Dataset load_sequence_dataset(const std::filesystem::path& manifest_path);

// Replaces each item's frame sequence with its k_subactions x d
// representation: cluster, then average (sampled) frames per segment.
// Parallel over items.
Dataset preprocess(const Dataset& sequences, const PipelineParams& params);

}  // namespace hcr
