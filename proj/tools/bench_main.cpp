// Benchmark of the OpenMP kernels against their serial twins. Each kernel
// runs both ways on identical inputs; results must match bitwise, and the
// wall-clock ratio is reported as the speedup.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hcr/fewshot.hpp"
#include "hcr/matrix.hpp"
#include "hcr/parallel.hpp"
#include "hcr/parts.hpp"
#include "hcr/pipeline.hpp"
#include "hcr/reference.hpp"
#include "hcr/rng.hpp"
#include "hcr/synth.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double best_of(int reps, const std::function<void()>& work) {
  double best = 0.0;
  for (int r = 0; r < reps; ++r) {
    const auto start = Clock::now();
    work();
    const std::chrono::duration<double, std::milli> elapsed = Clock::now() - start;
    if (r == 0 || elapsed.count() < best) best = elapsed.count();
  }
  return best;
}

struct Row {
  std::string kernel;
  double serial_ms = 0.0;
  double parallel_ms = 0.0;
  bool match = false;
};

bool datasets_identical(const hcr::Dataset& a, const hcr::Dataset& b) {
  if (a.class_names != b.class_names || a.items.size() != b.items.size()) return false;
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    if (a.items[i].label != b.items[i].label || a.items[i].id != b.items[i].id ||
        !(a.items[i].data == b.items[i].data)) {
      return false;
    }
  }
  return true;
}

bool reports_identical(const hcr::EvalReport& a, const hcr::EvalReport& b) {
  return a.per_episode == b.per_episode && a.mean_accuracy == b.mean_accuracy &&
         a.ci95_halfwidth == b.ci95_halfwidth;
}

int run_bench(int items_per_class, int episodes, int grid_side, int reps) {
  hcr::SynthSpec spec;
  spec.classes = 5;
  spec.items_per_class = items_per_class;
  spec.atoms_per_class = 3;
  spec.atom_dim = 16;
  spec.seed = 42;
  const hcr::Dataset raw = hcr::generate_synthetic(spec);
  const hcr::PipelineParams pipeline{8, 4};

  std::vector<Row> rows;

  {
    Row row{"preprocess", 0, 0, false};
    hcr::Dataset parallel_out, serial_out;
    row.parallel_ms = best_of(reps, [&] { parallel_out = hcr::preprocess(raw, pipeline); });
    row.serial_ms =
        best_of(reps, [&] { serial_out = hcr::reference::preprocess_serial(raw, pipeline); });
    row.match = datasets_identical(parallel_out, serial_out);
    rows.push_back(row);
  }

  const hcr::Dataset dataset = hcr::preprocess(raw, pipeline);
  const hcr::SimilarityFn metric = hcr::make_metric(hcr::EvalMetric::emd);

  {
    Row row{"pairwise-emd", 0, 0, false};
    hcr::Matrix parallel_out, serial_out;
    row.parallel_ms = best_of(
        reps, [&] { parallel_out = hcr::pairwise_similarities(dataset.items, dataset.items, metric); });
    row.serial_ms = best_of(reps, [&] {
      serial_out =
          hcr::reference::pairwise_similarities_serial(dataset.items, dataset.items, metric);
    });
    row.match = parallel_out == serial_out;
    rows.push_back(row);
  }

  {
    Row row{"episode-eval", 0, 0, false};
    hcr::EvalParams params;
    params.way = 5;
    params.shot = 1;
    params.queries_per_class = 15;
    params.episodes = episodes;
    hcr::EvalReport parallel_out, serial_out;
    row.parallel_ms = best_of(1, [&] { parallel_out = hcr::evaluate(dataset, params, metric, 7); });
    row.serial_ms = best_of(
        1, [&] { serial_out = hcr::reference::evaluate_serial(dataset, params, metric, 7); });
    row.match = reports_identical(parallel_out, serial_out);
    rows.push_back(row);
  }

  {
    Row row{"parts-compose", 0, 0, false};
    hcr::Rng rng(9);
    hcr::HeatmapStack stack(hcr::kKeypointCount, grid_side, grid_side);
    for (double& v : stack.values) v = rng.uniform01();
    hcr::HeatmapStack parallel_out, serial_out;
    row.parallel_ms = best_of(reps, [&] { parallel_out = hcr::compose_parts(stack); });
    row.serial_ms =
        best_of(reps, [&] { serial_out = hcr::reference::compose_parts_serial(stack); });
    row.match = parallel_out == serial_out;
    rows.push_back(row);
  }

  std::printf("workers: %d\n", hcr::worker_count());
  std::printf("%-14s %12s %12s %9s %7s\n", "kernel", "serial_ms", "parallel_ms", "speedup",
              "match");
  bool all_match = true;
  for (const Row& row : rows) {
    const double speedup = row.parallel_ms > 0.0 ? row.serial_ms / row.parallel_ms : 0.0;
    std::printf("%-14s %12.2f %12.2f %9.2f %7s\n", row.kernel.c_str(), row.serial_ms,
                row.parallel_ms, speedup, row.match ? "yes" : "NO");
    all_match = all_match && row.match;
  }
  std::printf("all results match: %s\n", all_match ? "yes" : "NO");
  return all_match ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  hcr::init_threads_from_env();

  int items_per_class = 16;
  int episodes = 256;
  int grid_side = 256;
  int reps = 3;
  CLI::App app{"Serial-vs-parallel kernel benchmark"};
  app.add_option("--items-per-class", items_per_class, "Synthetic items per class")
      ->capture_default_str();
  app.add_option("--episodes", episodes, "Episodes for the evaluation kernel")
      ->capture_default_str();
  app.add_option("--grid-side", grid_side, "Heatmap height/width for part composition")
      ->capture_default_str();
  app.add_option("--reps", reps, "Timed repetitions; the best is reported")
      ->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  try {
    return run_bench(items_per_class, episodes, grid_side, reps);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
