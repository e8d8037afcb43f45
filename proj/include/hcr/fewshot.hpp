#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hcr/matrix.hpp"

namespace hcr {

struct DatasetItem {
  Matrix data;     // one row per sub-action (or frame), row-major features
  int label = -1;  // index into Dataset::class_names
  std::string id;
};

// A labelled collection of items, grouped by class for episode sampling.
struct Dataset {
  std::vector<DatasetItem> items;
  std::vector<std::string> class_names;
  std::vector<std::vector<int>> items_by_class;

  int num_classes() const { return static_cast<int>(class_names.size()); }

  // Appends an item under the named class, creating the class on first use.
  // Returns the item's index.
  int add_item(Matrix data, const std::string& class_name, std::string id);
};

// Similarity between a query item and a support item, larger = more alike.
// Takes whole items so callers can build metrics over ids as well as data.
using SimilarityFn = std::function<double(const DatasetItem& query, const DatasetItem& support)>;

enum class ShotAggregation { mean, max };

// One n-way k-shot task: `way` distinct classes in sampled slot order, `shot`
// support items per slot, and `queries_per_class` held-out queries per slot.
// No item index appears in both the support and query sets.
struct Episode {
  int way = 0;
  int shot = 0;
  int queries_per_class = 0;
  std::vector<int> classes;                  // slot -> class label
  std::vector<std::vector<int>> support;     // slot -> item indices
  std::vector<std::pair<int, int>> queries;  // (item index, true slot)
};

Episode sample_episode(const Dataset& dataset, int way, int shot, int queries_per_class,
                       std::uint64_t seed);

// Scores a query against every slot (aggregate of its shot similarities),
// then softmaxes the scores. Ties prefer the lowest slot.
struct Classification {
  int predicted_slot = -1;
  int predicted_label = -1;
  std::vector<double> probabilities;
};
Classification classify_query(const Dataset& dataset, const Episode& episode, int query_item,
                              const SimilarityFn& similarity,
                              ShotAggregation aggregation = ShotAggregation::mean);

// Negative log probability of the true class. Probabilities must already sum
// to one; values below 1e-300 are clamped before the log and flagged.
struct CrossEntropyResult {
  double value = 0.0;
  bool clamped = false;
};
CrossEntropyResult cross_entropy(std::span<const double> probabilities, int true_index);

// Fraction of the episode's queries classified into their true slot. Episode
// `episode_seed` is sampled and scored in isolation.
double episode_accuracy(const Dataset& dataset, int way, int shot, int queries_per_class,
                        const SimilarityFn& similarity, ShotAggregation aggregation,
                        std::uint64_t episode_seed);

struct EvalParams {
  int way = 5;
  int shot = 1;
  int queries_per_class = 15;
  int episodes = 1024;
  ShotAggregation aggregation = ShotAggregation::mean;
};

struct EvalReport {
  int episodes = 0;
  double mean_accuracy = 0.0;
  double ci95_halfwidth = 0.0;  // 1.96 * stddev / sqrt(episodes)
  std::vector<double> per_episode;
  std::uint64_t seed = 0;
};

// Runs params.episodes independent episodes (episode i on substream i of the
// seed) across OpenMP workers and aggregates accuracy with a 95% interval.
EvalReport evaluate(const Dataset& dataset, const EvalParams& params,
                    const SimilarityFn& similarity, std::uint64_t seed);

// All-pairs similarity grid between two item sets, parallel over pairs.
Matrix pairwise_similarities(const std::vector<DatasetItem>& a,
                             const std::vector<DatasetItem>& b,
                             const SimilarityFn& similarity);

}  // namespace hcr
