#include "hcr/fewshot.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "hcr/error.hpp"
#include "hcr/parallel.hpp"
#include "hcr/rng.hpp"

namespace hcr {

int Dataset::add_item(Matrix data, const std::string& class_name, std::string id) {
  int label = -1;
  for (int c = 0; c < num_classes(); ++c) {
    if (class_names[static_cast<std::size_t>(c)] == class_name) {
      label = c;
      break;
    }
  }
  if (label < 0) {
    label = num_classes();
    class_names.push_back(class_name);
    items_by_class.emplace_back();
  }
  const int index = static_cast<int>(items.size());
  items.push_back({std::move(data), label, std::move(id)});
  items_by_class[static_cast<std::size_t>(label)].push_back(index);
  return index;
}

Episode sample_episode(const Dataset& dataset, int way, int shot, int queries_per_class,
                       std::uint64_t seed) {
  if (way < 1) throw InvalidArgument("way must be positive");
  if (shot < 1) throw InvalidArgument("shot must be positive");
  if (queries_per_class < 1) throw InvalidArgument("queries_per_class must be positive");
  if (way > dataset.num_classes()) {
    throw InvalidArgument("cannot sample " + std::to_string(way) + " classes from a dataset with " +
                          std::to_string(dataset.num_classes()));
  }
  const int needed = shot + queries_per_class;
  for (int c = 0; c < dataset.num_classes(); ++c) {
    const auto available = dataset.items_by_class[static_cast<std::size_t>(c)].size();
    if (static_cast<int>(available) < needed) {
      throw InvalidArgument("class '" + dataset.class_names[static_cast<std::size_t>(c)] +
                            "' has " + std::to_string(available) + " items; episodes need " +
                            std::to_string(needed));
    }
  }

  Rng rng(seed);
  Episode episode;
  episode.way = way;
  episode.shot = shot;
  episode.queries_per_class = queries_per_class;
  episode.classes = rng.sample_without_replacement(dataset.num_classes(), way);

  episode.support.resize(static_cast<std::size_t>(way));
  for (int slot = 0; slot < way; ++slot) {
    const auto& pool = dataset.items_by_class[static_cast<std::size_t>(
        episode.classes[static_cast<std::size_t>(slot)])];
    const std::vector<int> picks =
        rng.sample_without_replacement(static_cast<int>(pool.size()), needed);
    auto& support = episode.support[static_cast<std::size_t>(slot)];
    support.reserve(static_cast<std::size_t>(shot));
    for (int s = 0; s < shot; ++s) {
      support.push_back(pool[static_cast<std::size_t>(picks[static_cast<std::size_t>(s)])]);
    }
    for (int q = shot; q < needed; ++q) {
      episode.queries.emplace_back(
          pool[static_cast<std::size_t>(picks[static_cast<std::size_t>(q)])], slot);
    }
  }
  return episode;
}

Classification classify_query(const Dataset& dataset, const Episode& episode, int query_item,
                              const SimilarityFn& similarity, ShotAggregation aggregation) {
  if (episode.way < 1 || episode.support.size() != static_cast<std::size_t>(episode.way)) {
    throw InvalidArgument("episode has no usable support set");
  }
  if (query_item < 0 || query_item >= static_cast<int>(dataset.items.size())) {
    throw InvalidArgument("query item index out of range");
  }
  const DatasetItem& query = dataset.items[static_cast<std::size_t>(query_item)];

  std::vector<double> scores(static_cast<std::size_t>(episode.way));
  for (int slot = 0; slot < episode.way; ++slot) {
    const auto& support = episode.support[static_cast<std::size_t>(slot)];
    if (support.empty()) throw InvalidArgument("episode slot has no support items");
    double aggregate = 0.0;
    bool first = true;
    for (int item : support) {
      const double sim = similarity(query, dataset.items[static_cast<std::size_t>(item)]);
      if (!std::isfinite(sim)) throw InvalidInput("similarity produced a non-finite value");
      if (aggregation == ShotAggregation::mean) {
        aggregate += sim;
      } else if (first || sim > aggregate) {
        aggregate = sim;
      }
      first = false;
    }
    if (aggregation == ShotAggregation::mean) {
      aggregate /= static_cast<double>(support.size());
    }
    scores[static_cast<std::size_t>(slot)] = aggregate;
  }

  // Stable softmax over slot scores.
  const double peak = *std::max_element(scores.begin(), scores.end());
  double normaliser = 0.0;
  std::vector<double> probabilities(scores.size());
  for (std::size_t s = 0; s < scores.size(); ++s) {
    probabilities[s] = std::exp(scores[s] - peak);
    normaliser += probabilities[s];
  }
  for (double& p : probabilities) p /= normaliser;

  Classification result;
  result.probabilities = std::move(probabilities);
  result.predicted_slot = 0;
  for (int slot = 1; slot < episode.way; ++slot) {
    if (result.probabilities[static_cast<std::size_t>(slot)] >
        result.probabilities[static_cast<std::size_t>(result.predicted_slot)]) {
      result.predicted_slot = slot;
    }
  }
  result.predicted_label = episode.classes[static_cast<std::size_t>(result.predicted_slot)];
  return result;
}

CrossEntropyResult cross_entropy(std::span<const double> probabilities, int true_index) {
  if (probabilities.empty()) throw InvalidArgument("cross_entropy: empty distribution");
  if (true_index < 0 || true_index >= static_cast<int>(probabilities.size())) {
    throw InvalidArgument("cross_entropy: true index out of range");
  }
  double total = 0.0;
  for (double p : probabilities) {
    if (!std::isfinite(p) || p < 0.0) {
      throw InvalidArgument("cross_entropy: probabilities must be finite and non-negative");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidArgument("cross_entropy: probabilities sum to " + std::to_string(total));
  }

  constexpr double kFloor = 1e-300;
  const double p = probabilities[static_cast<std::size_t>(true_index)];
  CrossEntropyResult result;
  result.clamped = p < kFloor;
  result.value = -std::log(result.clamped ? kFloor : p);
  return result;
}

double episode_accuracy(const Dataset& dataset, int way, int shot, int queries_per_class,
                        const SimilarityFn& similarity, ShotAggregation aggregation,
                        std::uint64_t episode_seed) {
  const Episode episode = sample_episode(dataset, way, shot, queries_per_class, episode_seed);
  int correct = 0;
  for (const auto& [item, slot] : episode.queries) {
    const Classification result =
        classify_query(dataset, episode, item, similarity, aggregation);
    if (result.predicted_slot == slot) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(episode.queries.size());
}

EvalReport evaluate(const Dataset& dataset, const EvalParams& params,
                    const SimilarityFn& similarity, std::uint64_t seed) {
  if (params.episodes < 1) throw InvalidArgument("episode count must be positive");

  EvalReport report;
  report.episodes = params.episodes;
  report.seed = seed;
  report.per_episode.assign(static_cast<std::size_t>(params.episodes), 0.0);

  parallel_for(params.episodes, [&](int e) {
    report.per_episode[static_cast<std::size_t>(e)] = episode_accuracy(
        dataset, params.way, params.shot, params.queries_per_class, similarity,
        params.aggregation, substream_seed(seed, static_cast<std::uint64_t>(e)));
  });

  double mean = 0.0;
  for (double a : report.per_episode) mean += a;
  mean /= static_cast<double>(params.episodes);
  double variance = 0.0;
  for (double a : report.per_episode) variance += (a - mean) * (a - mean);
  variance /= static_cast<double>(params.episodes);

  report.mean_accuracy = mean;
  report.ci95_halfwidth = 1.96 * std::sqrt(variance) / std::sqrt(static_cast<double>(params.episodes));
  return report;
}

Matrix pairwise_similarities(const std::vector<DatasetItem>& a,
                             const std::vector<DatasetItem>& b,
                             const SimilarityFn& similarity) {
  Matrix out(static_cast<int>(a.size()), static_cast<int>(b.size()));
  const int total = static_cast<int>(a.size() * b.size());
  if (total == 0) return out;
  const int cols = out.cols();
  parallel_for(total, [&](int pair) {
    const int i = pair / cols;
    const int j = pair % cols;
    out(i, j) = similarity(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(j)]);
  });
  return out;
}

}  // namespace hcr
