#include "hcr/reference.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "hcr/error.hpp"
#include "hcr/metrics.hpp"
#include "hcr/rng.hpp"

namespace hcr::reference {

EvalReport evaluate_serial(const Dataset& dataset, const EvalParams& params,
                           const SimilarityFn& similarity, std::uint64_t seed) {
  if (params.episodes < 1) throw InvalidArgument("episode count must be positive");

  EvalReport report;
  report.episodes = params.episodes;
  report.seed = seed;
  report.per_episode.reserve(static_cast<std::size_t>(params.episodes));
  for (int e = 0; e < params.episodes; ++e) {
    report.per_episode.push_back(episode_accuracy(
        dataset, params.way, params.shot, params.queries_per_class, similarity,
        params.aggregation, substream_seed(seed, static_cast<std::uint64_t>(e))));
  }

  double mean = 0.0;
  for (double a : report.per_episode) mean += a;
  mean /= static_cast<double>(params.episodes);
  double variance = 0.0;
  for (double a : report.per_episode) variance += (a - mean) * (a - mean);
  variance /= static_cast<double>(params.episodes);

  report.mean_accuracy = mean;
  report.ci95_halfwidth =
      1.96 * std::sqrt(variance) / std::sqrt(static_cast<double>(params.episodes));
  return report;
}

Dataset preprocess_serial(const Dataset& sequences, const PipelineParams& params) {
  if (params.k_subactions < 1) throw InvalidArgument("k_subactions must be positive");
  if (params.frames_per_segment.has_value() && *params.frames_per_segment < 1) {
    throw InvalidArgument("frames_per_segment must be positive");
  }

  Dataset out = sequences;
  for (std::size_t i = 0; i < out.items.size(); ++i) {
    const DatasetItem& item = sequences.items[i];
    if (item.data.rows() < params.k_subactions) {
      throw InvalidInput("item '" + item.id + "' has " + std::to_string(item.data.rows()) +
                         " frames; clustering into " + std::to_string(params.k_subactions) +
                         " segments needs at least that many");
    }
    FeatureSequence seq{item.data, item.id, ""};
    const Segmentation seg = cluster_sequence(seq, params.k_subactions);
    out.items[i].data = segment_representation(seq, seg, params.frames_per_segment);
  }
  return out;
}

HeatmapStack compose_parts_serial(const HeatmapStack& keypoints) {
  keypoints.validate(/*strict_range=*/false);
  if (keypoints.channels != kKeypointCount) {
    throw InvalidArgument("keypoint stack must have " + std::to_string(kKeypointCount) +
                          " channels, got " + std::to_string(keypoints.channels));
  }
  const auto& parts = body_parts();
  HeatmapStack out(kPartCount, keypoints.height, keypoints.width);
  for (int part = 0; part < kPartCount; ++part) {
    const BodyPart& spec = parts[static_cast<std::size_t>(part)];
    for (int y = 0; y < keypoints.height; ++y) {
      for (int x = 0; x < keypoints.width; ++x) {
        double best = keypoints.at(spec.keypoints.front(), y, x);
        for (std::size_t k = 1; k < spec.keypoints.size(); ++k) {
          best = std::max(best, keypoints.at(spec.keypoints[k], y, x));
        }
        out.at(part, y, x) = best;
      }
    }
  }
  return out;
}

Matrix pairwise_similarities_serial(const std::vector<DatasetItem>& a,
                                    const std::vector<DatasetItem>& b,
                                    const SimilarityFn& similarity) {
  Matrix out(static_cast<int>(a.size()), static_cast<int>(b.size()));
  for (int i = 0; i < out.rows(); ++i) {
    for (int j = 0; j < out.cols(); ++j) {
      out(i, j) = similarity(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

Segmentation cluster_sequence_quadratic(const FeatureSequence& seq, int k) {
  const int frames = seq.frames.rows();
  if (seq.frames.cols() == 0) throw InvalidArgument("sequence must have features");
  if (k < 1 || k > frames) {
    throw InvalidArgument("cluster count must be between 1 and the frame count");
  }
  if (!seq.frames.all_finite()) {
    throw InvalidInput("sequence contains non-finite feature values");
  }

  std::vector<std::vector<int>> groups(static_cast<std::size_t>(frames));
  for (int t = 0; t < frames; ++t) groups[static_cast<std::size_t>(t)] = {t};

  const int d = seq.frames.cols();
  auto centroid_of = [&](const std::vector<int>& group) {
    std::vector<double> c(static_cast<std::size_t>(d), 0.0);
    for (int t : group) {
      auto row = seq.frames.row(t);
      for (int i = 0; i < d; ++i) c[static_cast<std::size_t>(i)] += row[static_cast<std::size_t>(i)];
    }
    for (double& v : c) v /= static_cast<double>(group.size());
    return c;
  };

  while (static_cast<int>(groups.size()) > k) {
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < groups.size(); ++i) {
      const std::vector<double> left = centroid_of(groups[i]);
      const std::vector<double> right = centroid_of(groups[i + 1]);
      double s = 0.0;
      for (int c = 0; c < d; ++c) {
        const double diff = left[static_cast<std::size_t>(c)] - right[static_cast<std::size_t>(c)];
        s += diff * diff;
      }
      const double dist = std::sqrt(s);
      if (dist < best_dist) {
        best_dist = dist;
        best = static_cast<int>(i);
      }
    }
    auto& into = groups[static_cast<std::size_t>(best)];
    auto& from = groups[static_cast<std::size_t>(best) + 1];
    into.insert(into.end(), from.begin(), from.end());
    groups.erase(groups.begin() + best + 1);
  }

  Segmentation seg;
  int start = 0;
  for (const auto& group : groups) {
    seg.segments.emplace_back(start, start + static_cast<int>(group.size()));
    start += static_cast<int>(group.size());
  }
  return seg;
}

namespace {

double binomial_estimate(int n, int k) {
  double result = 1.0;
  for (int i = 0; i < k; ++i) {
    result *= static_cast<double>(n - i) / static_cast<double>(i + 1);
  }
  return result;
}

// Flows on a spanning tree are forced: repeatedly settle a leaf's only edge
// with that node's remaining balance. Returns false when any forced flow is
// meaningfully negative (infeasible basis).
bool solve_tree(const TransportProblem& p, const std::vector<int>& cells,
                std::vector<double>& flows) {
  const int m = p.num_sources();
  const int n = p.num_sinks();
  const int nodes = m + n;
  const int edges = static_cast<int>(cells.size());

  std::vector<std::vector<int>> incident(static_cast<std::size_t>(nodes));
  for (int e = 0; e < edges; ++e) {
    const int i = cells[static_cast<std::size_t>(e)] / n;
    const int j = cells[static_cast<std::size_t>(e)] % n;
    incident[static_cast<std::size_t>(i)].push_back(e);
    incident[static_cast<std::size_t>(m + j)].push_back(e);
  }

  std::vector<double> balance(static_cast<std::size_t>(nodes));
  for (int i = 0; i < m; ++i) balance[static_cast<std::size_t>(i)] = p.supplies[static_cast<std::size_t>(i)];
  for (int j = 0; j < n; ++j) balance[static_cast<std::size_t>(m + j)] = p.demands[static_cast<std::size_t>(j)];

  std::vector<int> degree(static_cast<std::size_t>(nodes));
  std::vector<int> stack;
  for (int v = 0; v < nodes; ++v) {
    degree[static_cast<std::size_t>(v)] = static_cast<int>(incident[static_cast<std::size_t>(v)].size());
    if (degree[static_cast<std::size_t>(v)] == 1) stack.push_back(v);
  }

  flows.assign(static_cast<std::size_t>(edges), 0.0);
  std::vector<char> settled(static_cast<std::size_t>(edges), 0);
  int settled_count = 0;
  while (!stack.empty()) {
    const int leaf = stack.back();
    stack.pop_back();
    if (degree[static_cast<std::size_t>(leaf)] != 1) continue;

    int edge = -1;
    for (int e : incident[static_cast<std::size_t>(leaf)]) {
      if (!settled[static_cast<std::size_t>(e)]) {
        edge = e;
        break;
      }
    }
    if (edge < 0) continue;

    const int i = cells[static_cast<std::size_t>(edge)] / n;
    const int j = cells[static_cast<std::size_t>(edge)] % n;
    const int other = (leaf < m) ? m + j : i;

    flows[static_cast<std::size_t>(edge)] = balance[static_cast<std::size_t>(leaf)];
    balance[static_cast<std::size_t>(other)] -= balance[static_cast<std::size_t>(leaf)];
    balance[static_cast<std::size_t>(leaf)] = 0.0;
    settled[static_cast<std::size_t>(edge)] = 1;
    ++settled_count;

    --degree[static_cast<std::size_t>(leaf)];
    --degree[static_cast<std::size_t>(other)];
    if (degree[static_cast<std::size_t>(other)] == 1) stack.push_back(other);
  }
  if (settled_count != edges) return false;  // not a tree (cycle kept flows unsettled)

  for (double f : flows) {
    if (f < -1e-9) return false;
  }
  return true;
}

// True when the chosen cells connect all m + n nodes without a cycle.
bool is_spanning_tree(int m, int n, const std::vector<int>& cells) {
  const int nodes = m + n;
  std::vector<int> parent(static_cast<std::size_t>(nodes));
  for (int v = 0; v < nodes; ++v) parent[static_cast<std::size_t>(v)] = v;
  auto find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  };
  for (int cell : cells) {
    const int a = find(cell / n);
    const int b = find(m + cell % n);
    if (a == b) return false;
    parent[static_cast<std::size_t>(a)] = b;
  }
  return true;  // n_edges == nodes - 1 and acyclic => spanning
}

template <typename Visitor>
void for_each_basis(const TransportProblem& p, Visitor&& visit) {
  p.validate();
  const int m = p.num_sources();
  const int n = p.num_sinks();
  const int cells = m * n;
  const int need = m + n - 1;
  if (binomial_estimate(cells, need) > 5e6) {
    throw InvalidArgument("instance too large for basis enumeration");
  }

  std::vector<int> comb(static_cast<std::size_t>(need));
  for (int i = 0; i < need; ++i) comb[static_cast<std::size_t>(i)] = i;

  std::vector<double> flows;
  while (true) {
    if (is_spanning_tree(m, n, comb) && solve_tree(p, comb, flows)) {
      visit(comb, flows);
    }
    int i = need - 1;
    while (i >= 0 && comb[static_cast<std::size_t>(i)] == cells - need + i) --i;
    if (i < 0) break;
    ++comb[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < need; ++j) {
      comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

}  // namespace

double bruteforce_optimum(const TransportProblem& problem) {
  const int n = problem.num_sinks();
  double best = std::numeric_limits<double>::infinity();
  bool found = false;
  for_each_basis(problem, [&](const std::vector<int>& cells, const std::vector<double>& flows) {
    double objective = 0.0;
    for (std::size_t e = 0; e < cells.size(); ++e) {
      objective += problem.cost(cells[e] / n, cells[e] % n) * flows[e];
    }
    if (objective < best) best = objective;
    found = true;
  });
  if (!found) throw InvalidState("no feasible basis found for a balanced problem");
  return best;
}

double emd_similarity_bruteforce(const Matrix& a, const Matrix& b) {
  TransportProblem problem;
  problem.cost = cost_matrix(a, b);
  NodeWeights weights = node_weights(a, b);
  problem.supplies = std::move(weights.supplies);
  problem.demands = std::move(weights.demands);

  const int n = problem.num_sinks();
  double best = -std::numeric_limits<double>::infinity();
  bool found = false;
  for_each_basis(problem, [&](const std::vector<int>& cells, const std::vector<double>& flows) {
    double similarity = 0.0;
    for (std::size_t e = 0; e < cells.size(); ++e) {
      similarity += (1.0 - problem.cost(cells[e] / n, cells[e] % n)) * flows[e];
    }
    if (similarity > best) best = similarity;
    found = true;
  });
  if (!found) throw InvalidState("no feasible basis found for a balanced problem");
  return best;
}

SimilarityFn make_hash_similarity(std::uint64_t salt) {
  return [salt](const DatasetItem& query, const DatasetItem& support) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    auto mix = [&h](const std::string& text) {
      for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ULL;
      }
      h ^= 0x1F;  // separator so ("ab","c") differs from ("a","bc")
      h *= 1099511628211ULL;
    };
    mix(query.id);
    mix(support.id);
    Rng rng(h ^ salt);
    return rng.uniform01();
  };
}

}  // namespace hcr::reference
