#include <doctest.h>

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "hcr/error.hpp"
#include "hcr/fewshot.hpp"
#include "hcr/matrix.hpp"
#include "hcr/metrics.hpp"
#include "hcr/parallel.hpp"
#include "hcr/parts.hpp"
#include "hcr/pipeline.hpp"
#include "hcr/reference.hpp"
#include "hcr/rng.hpp"
#include "hcr/synth.hpp"

using namespace hcr;

namespace {

// Restores the worker count even when a check fails mid-test.
struct WorkerGuard {
  int saved;
  WorkerGuard() : saved(worker_count()) {}
  ~WorkerGuard() { set_worker_count(saved); }
};

SynthSpec bench_spec() {
  SynthSpec spec;
  spec.classes = 4;
  spec.items_per_class = 6;
  spec.atoms_per_class = 3;
  spec.atom_dim = 12;
  spec.noise_sigma = 0.05;
  spec.seed = 77;
  return spec;
}

bool datasets_identical(const Dataset& a, const Dataset& b) {
  if (a.class_names != b.class_names) return false;
  if (a.items.size() != b.items.size()) return false;
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    if (a.items[i].label != b.items[i].label) return false;
    if (a.items[i].id != b.items[i].id) return false;
    if (!(a.items[i].data == b.items[i].data)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("parallel_for covers every index exactly once") {
  std::vector<int> hits(500, 0);
  parallel_for(500, [&](int i) { hits[static_cast<std::size_t>(i)] += 1; });
  for (int h : hits) CHECK(h == 1);
}

TEST_CASE("parallel_for propagates body exceptions") {
  CHECK_THROWS_AS(parallel_for(64,
                               [&](int i) {
                                 if (i == 17) throw InvalidInput("boom");
                               }),
                  InvalidInput);
}

TEST_CASE("worker count can be pinned and restored") {
  WorkerGuard guard;
  set_worker_count(1);
  CHECK(worker_count() == 1);
  set_worker_count(2);
  CHECK(worker_count() >= 1);  // clamped to what the machine offers
}

TEST_CASE("evaluation matches the serial twin bitwise") {
  const Dataset dataset = preprocess(generate_synthetic(bench_spec()), PipelineParams{3, 4});
  const SimilarityFn metric = make_metric(EvalMetric::emd);
  EvalParams params;
  params.way = 3;
  params.shot = 1;
  params.queries_per_class = 2;
  params.episodes = 48;

  const EvalReport serial = reference::evaluate_serial(dataset, params, metric, 5);
  const EvalReport parallel = evaluate(dataset, params, metric, 5);

  CHECK(parallel.per_episode == serial.per_episode);
  CHECK(parallel.mean_accuracy == serial.mean_accuracy);
  CHECK(parallel.ci95_halfwidth == serial.ci95_halfwidth);
}

TEST_CASE("preprocessing matches the serial twin bitwise") {
  const Dataset raw = generate_synthetic(bench_spec());
  const PipelineParams params{3, 4};
  CHECK(datasets_identical(preprocess(raw, params), reference::preprocess_serial(raw, params)));
}

TEST_CASE("part composition matches the serial twin bitwise") {
  Rng rng(404);
  HeatmapStack stack(kKeypointCount, 24, 17);
  for (double& v : stack.values) v = rng.uniform01();
  CHECK(compose_parts(stack) == reference::compose_parts_serial(stack));
}

TEST_CASE("pairwise similarity grids match the serial twin bitwise") {
  const Dataset dataset = preprocess(generate_synthetic(bench_spec()), PipelineParams{3, 4});
  const SimilarityFn metric = make_metric(EvalMetric::emd);
  const Matrix parallel = pairwise_similarities(dataset.items, dataset.items, metric);
  const Matrix serial =
      reference::pairwise_similarities_serial(dataset.items, dataset.items, metric);
  CHECK(parallel == serial);
}

TEST_CASE("results are identical across worker counts") {
  WorkerGuard guard;
  const Dataset dataset = preprocess(generate_synthetic(bench_spec()), PipelineParams{3, 4});
  const SimilarityFn metric = make_metric(EvalMetric::emd);
  EvalParams params;
  params.way = 3;
  params.shot = 2;
  params.queries_per_class = 2;
  params.episodes = 32;

  set_worker_count(1);
  const EvalReport single = evaluate(dataset, params, metric, 11);
  set_worker_count(guard.saved > 1 ? guard.saved : 4);
  const EvalReport many = evaluate(dataset, params, metric, 11);

  CHECK(single.per_episode == many.per_episode);
  CHECK(single.mean_accuracy == many.mean_accuracy);
}

TEST_CASE("HCR_THREADS caps the worker count") {
  WorkerGuard guard;
  ::setenv("HCR_THREADS", "1", 1);
  init_threads_from_env();
  CHECK(worker_count() == 1);
  ::unsetenv("HCR_THREADS");
  init_threads_from_env();
  CHECK(worker_count() >= 1);
}
