// One-shot calibration run for the synthetic-benchmark acceptance fixture.
// Rebuilds the benchmark entirely out of the slow independent pieces — the
// quadratic clustering reference, the brute-force transport similarity, and
// the serial evaluator — and reports the accuracies the fast pipeline is
// expected to reproduce. The printed thresholds are frozen into the
// acceptance fixture by hand.

#include <cmath>
#include <cstdio>

#include "hcr/fewshot.hpp"
#include "hcr/matrix.hpp"
#include "hcr/metrics.hpp"
#include "hcr/reference.hpp"
#include "hcr/seqcluster.hpp"
#include "hcr/synth.hpp"

namespace {

// The acceptance benchmark recipe: the generator's defaults, seed 0.
hcr::SynthSpec benchmark_spec() { return hcr::SynthSpec{}; }

hcr::Dataset oracle_preprocess(const hcr::Dataset& raw, int k, int frames_per_segment) {
  hcr::Dataset out;
  for (const hcr::DatasetItem& item : raw.items) {
    const hcr::FeatureSequence seq{item.data, item.id, ""};
    const hcr::Segmentation seg = hcr::reference::cluster_sequence_quadratic(seq, k);
    const hcr::Matrix reprs = hcr::segment_representation(seq, seg, frames_per_segment);
    out.add_item(reprs, raw.class_names[static_cast<std::size_t>(item.label)], item.id);
  }
  return out;
}

void report(const char* name, const hcr::EvalReport& r) {
  std::printf("%-22s mean accuracy %.6f   ci95 half-width %.6f\n", name, r.mean_accuracy,
              r.ci95_halfwidth);
}

}  // namespace

int main() {
  const hcr::SynthSpec spec = benchmark_spec();
  std::printf("benchmark: %d classes x %d items, %d atoms in %d dims, sigma %.3f, seed %llu\n",
              spec.classes, spec.items_per_class, spec.atoms_per_class, spec.atom_dim,
              spec.noise_sigma, static_cast<unsigned long long>(spec.seed));

  const hcr::Dataset raw = hcr::generate_synthetic(spec);
  const hcr::Dataset dataset = oracle_preprocess(raw, spec.atoms_per_class, 4);

  const hcr::SimilarityFn emd_oracle = [](const hcr::DatasetItem& q, const hcr::DatasetItem& s) {
    return hcr::reference::emd_similarity_bruteforce(q.data, s.data);
  };
  const hcr::SimilarityFn aligned = [](const hcr::DatasetItem& q, const hcr::DatasetItem& s) {
    return hcr::aligned_similarity(q.data, s.data);
  };

  hcr::EvalParams params;  // defaults: 5-way 1-shot, 15 queries, 1024 episodes
  const hcr::EvalReport emd_report = hcr::reference::evaluate_serial(dataset, params, emd_oracle, 0);
  const hcr::EvalReport aligned_report =
      hcr::reference::evaluate_serial(dataset, params, aligned, 0);

  report("transport (oracle)", emd_report);
  report("aligned baseline", aligned_report);

  const double emd_floor =
      std::floor((emd_report.mean_accuracy - 3.0 * emd_report.ci95_halfwidth) * 100.0) / 100.0;
  const double aligned_ceiling =
      std::ceil((aligned_report.mean_accuracy + 3.0 * aligned_report.ci95_halfwidth) * 100.0) /
      100.0;
  std::printf("\nsuggested frozen thresholds:\n");
  std::printf("  kEmdAccuracyFloor      = %.2f\n", emd_floor);
  std::printf("  kAlignedAccuracyCeiling = %.2f\n", aligned_ceiling);
  std::printf("  gap at thresholds       = %.2f (need >= 0.10 plus measured gap %.4f)\n",
              emd_floor - aligned_ceiling,
              emd_report.mean_accuracy - aligned_report.mean_accuracy);
  return 0;
}
