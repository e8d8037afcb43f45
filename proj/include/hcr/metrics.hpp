#pragma once

#include "hcr/matrix.hpp"
#include "hcr/transport.hpp"

namespace hcr {

// Cosine ground cost between all row pairs: c_ij = 1 - cos(a_i, b_j), in
// [0, 2]. Throws DegenerateVector when any row has zero norm.
Matrix cost_matrix(const Matrix& a, const Matrix& b);

// Per-row mass for the transport formulation. Each row is weighted by its
// dot product with the other sequence's mean row, clamped at zero; each side
// is normalised to total mass 1 (uniform fallback when everything clamps to
// zero).
struct NodeWeights {
  std::vector<double> supplies;
  std::vector<double> demands;
};
NodeWeights node_weights(const Matrix& a, const Matrix& b);

// Flow-weighted cosine similarity: sum over cells of (1 - c_ij) * x_ij at
// the optimal transport plan. Lands in [-1, 1] because total mass is 1.
double emd_similarity(const Matrix& a, const Matrix& b);

// emd_similarity plus the underlying problem and solved plan, for callers
// that want to inspect or dump the transport details.
struct EmdMatch {
  double similarity = 0.0;
  TransportProblem problem;
  TransportSolution solution;
};
EmdMatch emd_match(const Matrix& a, const Matrix& b);

// Collapse-then-compare baselines: pool each sequence's rows to one vector
// (average or per-coordinate max), then compare. Cosine returns the cosine;
// Euclidean returns the negated distance so that larger is always better.
enum class PoolKind { average, max };
enum class MetricKind { euclidean, cosine };
double global_pool_similarity(const Matrix& a, const Matrix& b, PoolKind pool,
                              MetricKind metric);

// Position-wise baseline: mean cosine of rows at equal index. Requires equal
// row counts.
double aligned_similarity(const Matrix& a, const Matrix& b);

}  // namespace hcr
