#include "hcr/metrics.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "hcr/error.hpp"

namespace hcr {
namespace {

void check_comparable(const Matrix& a, const Matrix& b) {
  if (a.rows() == 0 || b.rows() == 0) {
    throw InvalidArgument("cannot compare an empty sequence");
  }
  if (a.cols() != b.cols()) {
    throw InvalidArgument("sequences live in different feature dimensions (" +
                          std::to_string(a.cols()) + " vs " + std::to_string(b.cols()) + ")");
  }
  if (!a.all_finite() || !b.all_finite()) {
    throw InvalidInput("sequence contains non-finite values");
  }
}

}  // namespace

Matrix cost_matrix(const Matrix& a, const Matrix& b) {
  check_comparable(a, b);
  Matrix cost(a.rows(), b.rows());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < b.rows(); ++j) {
      cost(i, j) = 1.0 - cosine_similarity(a.row(i), b.row(j));
    }
  }
  return cost;
}

NodeWeights node_weights(const Matrix& a, const Matrix& b) {
  check_comparable(a, b);
  const std::vector<double> mean_a = column_mean(a);
  const std::vector<double> mean_b = column_mean(b);

  NodeWeights weights;
  weights.supplies.resize(static_cast<std::size_t>(a.rows()));
  weights.demands.resize(static_cast<std::size_t>(b.rows()));

  auto fill_side = [](const Matrix& rows, const std::vector<double>& other_mean,
                      std::vector<double>& out) {
    double total = 0.0;
    for (int i = 0; i < rows.rows(); ++i) {
      const double raw = dot(rows.row(i), other_mean);
      out[static_cast<std::size_t>(i)] = raw > 0.0 ? raw : 0.0;
      total += out[static_cast<std::size_t>(i)];
    }
    if (total > 0.0) {
      for (double& w : out) w /= total;
    } else {
      const double uniform = 1.0 / rows.rows();
      for (double& w : out) w = uniform;
    }
  };
  fill_side(a, mean_b, weights.supplies);
  fill_side(b, mean_a, weights.demands);
  return weights;
}

EmdMatch emd_match(const Matrix& a, const Matrix& b) {
  EmdMatch match;
  match.problem.cost = cost_matrix(a, b);
  NodeWeights weights = node_weights(a, b);
  match.problem.supplies = std::move(weights.supplies);
  match.problem.demands = std::move(weights.demands);
  match.solution = solve(match.problem);

  double total = 0.0;
  for (int i = 0; i < match.problem.num_sources(); ++i) {
    for (int j = 0; j < match.problem.num_sinks(); ++j) {
      total += (1.0 - match.problem.cost(i, j)) * match.solution.flow(i, j);
    }
  }
  match.similarity = total;
  return match;
}

double emd_similarity(const Matrix& a, const Matrix& b) { return emd_match(a, b).similarity; }

double global_pool_similarity(const Matrix& a, const Matrix& b, PoolKind pool,
                              MetricKind metric) {
  check_comparable(a, b);
  const std::vector<double> pa = pool == PoolKind::average ? column_mean(a) : column_max(a);
  const std::vector<double> pb = pool == PoolKind::average ? column_mean(b) : column_max(b);
  if (metric == MetricKind::cosine) return cosine_similarity(pa, pb);
  return -euclidean_distance(pa, pb);
}

double aligned_similarity(const Matrix& a, const Matrix& b) {
  check_comparable(a, b);
  if (a.rows() != b.rows()) {
    throw InvalidArgument("positional alignment needs equal row counts (" +
                          std::to_string(a.rows()) + " vs " + std::to_string(b.rows()) + ")");
  }
  double total = 0.0;
  for (int i = 0; i < a.rows(); ++i) total += cosine_similarity(a.row(i), b.row(i));
  return total / a.rows();
}

}  // namespace hcr
