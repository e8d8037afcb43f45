#pragma once

#include <cstdint>
#include <vector>

#include "hcr/fewshot.hpp"
#include "hcr/parts.hpp"
#include "hcr/pipeline.hpp"
#include "hcr/seqcluster.hpp"
#include "hcr/transport.hpp"

// Two kinds of checking code live here, both deliberately outside the main
// library: plain serial twins of the OpenMP kernels (same arithmetic, no
// parallel fan-out) used to pin down parallel results and to benchmark
// speedups, and independent re-implementations used as test oracles.
namespace hcr::reference {

// --- serial twins -----------------------------------------------------

EvalReport evaluate_serial(const Dataset& dataset, const EvalParams& params,
                           const SimilarityFn& similarity, std::uint64_t seed);

Dataset preprocess_serial(const Dataset& sequences, const PipelineParams& params);

HeatmapStack compose_parts_serial(const HeatmapStack& keypoints);

Matrix pairwise_similarities_serial(const std::vector<DatasetItem>& a,
                                    const std::vector<DatasetItem>& b,
                                    const SimilarityFn& similarity);

// --- independent oracles ----------------------------------------------

// Contiguous agglomerative clustering, written the slow obvious way: every
// round recomputes every centroid and every adjacent distance from the raw
// frames, merges the leftmost smallest pair.
Segmentation cluster_sequence_quadratic(const FeatureSequence& seq, int k);

// Exact transport optimum by enumerating every spanning-tree basis of the
// bipartite supply/demand graph and solving each tree by leaf elimination.
// Exponential in m + n; refuses instances beyond ~5e6 candidate bases.
double bruteforce_optimum(const TransportProblem& problem);

// Best flow-weighted cosine similarity over the same basis enumeration.
double emd_similarity_bruteforce(const Matrix& a, const Matrix& b);

// Data-blind similarity: a stable hash of the two item ids and the salt,
// mapped to [0, 1). Classification under it is a coin toss, which makes it
// the null model for protocol checks.
SimilarityFn make_hash_similarity(std::uint64_t salt);

}  // namespace hcr::reference
