#include <charconv>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hcr/error.hpp"
#include "hcr/fewshot.hpp"
#include "hcr/io.hpp"
#include "hcr/metrics.hpp"
#include "hcr/parallel.hpp"
#include "hcr/parts.hpp"
#include "hcr/pipeline.hpp"
#include "hcr/rng.hpp"
#include "hcr/seqcluster.hpp"
#include "hcr/synth.hpp"
#include "hcr/transport.hpp"

namespace {

using nlohmann::json;

std::string format_double(double value) {
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, end);
}

json matrix_to_json(const hcr::Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::optional<int> frames_option(int frames_per_segment) {
  if (frames_per_segment == 0) return std::nullopt;
  return frames_per_segment;
}

hcr::ShotAggregation aggregation_from_name(const std::string& name) {
  if (name == "mean") return hcr::ShotAggregation::mean;
  if (name == "max") return hcr::ShotAggregation::max;
  throw hcr::InvalidArgument("unknown aggregation '" + name + "'; expected mean or max");
}

struct ClusterArgs {
  std::string input;
  std::string out;
  std::string reprs_out;
  int k = 0;
  int frames_per_segment = 4;
};

int run_cluster(const ClusterArgs& args) {
  const hcr::Matrix frames = hcr::read_hcrf(args.input);
  hcr::FeatureSequence seq{frames, std::filesystem::path(args.input).stem().string(), ""};
  const hcr::Segmentation seg = hcr::cluster_sequence(seq, args.k);
  const hcr::Matrix reprs =
      hcr::segment_representation(seq, seg, frames_option(args.frames_per_segment));

  json doc;
  doc["k"] = seg.count();
  doc["segments"] = json::array();
  for (const auto& [start, end] : seg.segments) {
    doc["segments"].push_back(json::array({start, end}));
  }
  hcr::write_file_atomic(args.out, doc.dump(2) + "\n");

  std::filesystem::path reprs_path = args.reprs_out.empty()
                                         ? std::filesystem::path(args.out).replace_extension(".hcrf")
                                         : std::filesystem::path(args.reprs_out);
  hcr::write_hcrf(reprs_path, reprs);
  return 0;
}

struct EmdArgs {
  std::string a;
  std::string b;
  std::string metric = "emd";
  bool dump_solution = false;
};

int run_emd(const EmdArgs& args) {
  const hcr::EvalMetric metric = hcr::metric_from_name(args.metric);
  if (args.dump_solution && metric != hcr::EvalMetric::emd) {
    throw hcr::InvalidArgument("--dump-solution only applies to the emd metric");
  }

  const hcr::Matrix a = hcr::read_hcrf(args.a);
  const hcr::Matrix b = hcr::read_hcrf(args.b);

  json doc;
  doc["a"] = args.a;
  doc["b"] = args.b;
  doc["metric"] = args.metric;
  if (metric == hcr::EvalMetric::emd) {
    const hcr::EmdMatch match = hcr::emd_match(a, b);
    doc["similarity"] = match.similarity;
    if (args.dump_solution) {
      json solution;
      solution["supplies"] = match.problem.supplies;
      solution["demands"] = match.problem.demands;
      solution["cost"] = matrix_to_json(match.problem.cost);
      solution["flow"] = matrix_to_json(match.solution.flow);
      solution["row_duals"] = match.solution.row_duals;
      solution["col_duals"] = match.solution.col_duals;
      solution["objective"] = match.solution.objective;
      solution["iterations"] = match.solution.iterations;
      doc["solution"] = std::move(solution);
    }
  } else {
    doc["similarity"] = hcr::representation_similarity(a, b, metric);
    if (metric == hcr::EvalMetric::avg_euclid || metric == hcr::EvalMetric::max_euclid) {
      doc["note"] = "euclidean scores are negated distances; larger is more similar";
    }
  }
  std::cout << doc.dump(2) << "\n";
  return 0;
}

struct EpisodeEvalArgs {
  std::string manifest;
  std::string out;
  std::string csv_out;
  std::string metric = "emd";
  std::string aggregation = "mean";
  int way = 5;
  int shot = 1;
  int queries = 15;
  int episodes = 1024;
  int k_subactions = 8;
  int frames_per_segment = 4;
  std::uint64_t seed = 0;
};

int run_episode_eval(const EpisodeEvalArgs& args) {
  const hcr::EvalMetric metric = hcr::metric_from_name(args.metric);

  const hcr::Dataset raw = hcr::load_sequence_dataset(args.manifest);
  hcr::PipelineParams pipeline;
  pipeline.k_subactions = args.k_subactions;
  pipeline.frames_per_segment = frames_option(args.frames_per_segment);
  const hcr::Dataset dataset = hcr::preprocess(raw, pipeline);

  hcr::EvalParams params;
  params.way = args.way;
  params.shot = args.shot;
  params.queries_per_class = args.queries;
  params.episodes = args.episodes;
  params.aggregation = aggregation_from_name(args.aggregation);

  const hcr::EvalReport report =
      hcr::evaluate(dataset, params, hcr::make_metric(metric), args.seed);

  json doc;
  doc["way"] = args.way;
  doc["shot"] = args.shot;
  doc["queries_per_class"] = args.queries;
  doc["episodes"] = args.episodes;
  doc["metric"] = args.metric;
  doc["aggregation"] = args.aggregation;
  doc["k_subactions"] = args.k_subactions;
  doc["frames_per_segment"] = args.frames_per_segment;
  doc["seed"] = args.seed;
  doc["mean_accuracy"] = report.mean_accuracy;
  doc["ci95_halfwidth"] = report.ci95_halfwidth;
  doc["per_episode"] = report.per_episode;
  hcr::write_file_atomic(args.out, doc.dump(2) + "\n");

  if (!args.csv_out.empty()) {
    std::string csv = "episode,accuracy\n";
    for (std::size_t e = 0; e < report.per_episode.size(); ++e) {
      csv += std::to_string(e);
      csv += ',';
      csv += format_double(report.per_episode[e]);
      csv += '\n';
    }
    hcr::write_file_atomic(args.csv_out, csv);
  }

  json summary;
  summary["mean_accuracy"] = report.mean_accuracy;
  summary["ci95_halfwidth"] = report.ci95_halfwidth;
  summary["episodes"] = args.episodes;
  summary["out"] = args.out;
  std::cout << summary.dump(2) << "\n";
  return 0;
}

struct PartsComposeArgs {
  std::string input;
  std::string out;
  std::string pred;
  double cls_loss = 0.0;
  bool has_cls_loss = false;
  double lambda = 1.0;
  bool lenient = false;
  bool sum_reduction = false;
};

int run_parts_compose(const PartsComposeArgs& args) {
  const hcr::HeatmapStack keypoints = hcr::read_hcrh(args.input, !args.lenient);
  const hcr::HeatmapStack parts = hcr::compose_parts(keypoints);
  hcr::write_hcrh(args.out, parts);

  json doc;
  doc["input"] = args.input;
  doc["out"] = args.out;
  doc["channels"] = parts.channels;
  doc["height"] = parts.height;
  doc["width"] = parts.width;

  if (!args.pred.empty()) {
    const hcr::HeatmapStack predicted = hcr::read_hcrh(args.pred, /*strict_range=*/false);
    const hcr::LossReduction reduction =
        args.sum_reduction ? hcr::LossReduction::sum : hcr::LossReduction::mean;
    const double loss = hcr::parts_loss(predicted, parts, reduction);
    doc["parts_loss"] = loss;
    doc["reduction"] = args.sum_reduction ? "sum" : "mean";
    if (args.has_cls_loss) {
      doc["classification_loss"] = args.cls_loss;
      doc["lambda"] = args.lambda;
      doc["combined_loss"] = hcr::combined_loss(args.cls_loss, loss, {args.lambda});
    }
  }
  std::cout << doc.dump(2) << "\n";
  return 0;
}

struct SynthGenArgs {
  std::string out_dir;
  std::string manifest_out;
  hcr::SynthSpec spec;
};

int run_synth_gen(const SynthGenArgs& args) {
  const hcr::Dataset dataset = hcr::generate_synthetic(args.spec);

  std::error_code ec;
  std::filesystem::create_directories(args.out_dir, ec);
  if (ec) {
    throw hcr::IoError("cannot create directory " + args.out_dir + ": " + ec.message());
  }

  std::vector<hcr::ManifestItem> manifest;
  manifest.reserve(dataset.items.size());
  for (const hcr::DatasetItem& item : dataset.items) {
    const std::string file = item.id + ".hcrf";
    hcr::write_hcrf(std::filesystem::path(args.out_dir) / file, item.data);
    manifest.push_back(
        {file, dataset.class_names[static_cast<std::size_t>(item.label)], item.id});
  }

  const std::filesystem::path manifest_path =
      args.manifest_out.empty() ? std::filesystem::path(args.out_dir) / "manifest.json"
                                : std::filesystem::path(args.manifest_out);
  hcr::write_manifest(manifest_path, manifest);

  json doc;
  doc["out_dir"] = args.out_dir;
  doc["manifest"] = manifest_path.string();
  doc["classes"] = dataset.num_classes();
  doc["items"] = dataset.items.size();
  std::cout << doc.dump(2) << "\n";
  return 0;
}

struct GradcheckArgs {
  int m = 3;
  int n = 4;
  int trials = 100;
  std::uint64_t seed = 0;
  double step = 1e-6;
};

int run_gradcheck(const GradcheckArgs& args) {
  if (args.m < 1 || args.n < 1) throw hcr::InvalidArgument("m and n must be positive");
  if (args.trials < 1) throw hcr::InvalidArgument("trials must be positive");

  int checked = 0;
  int skipped = 0;
  double max_rel_error = 0.0;
  for (int t = 0; t < args.trials; ++t) {
    hcr::Rng rng = hcr::Rng::substream(args.seed, static_cast<std::uint64_t>(t));

    hcr::TransportProblem problem;
    problem.supplies.resize(static_cast<std::size_t>(args.m));
    problem.demands.resize(static_cast<std::size_t>(args.n));
    double total = 0.0;
    for (double& s : problem.supplies) {
      s = rng.uniform(0.1, 1.0);
      total += s;
    }
    for (double& s : problem.supplies) s /= total;
    total = 0.0;
    for (double& d : problem.demands) {
      d = rng.uniform(0.1, 1.0);
      total += d;
    }
    for (double& d : problem.demands) d /= total;
    problem.cost = hcr::Matrix(args.m, args.n);
    for (double& c : problem.cost.values()) c = rng.uniform01();

    const hcr::GradientCheck check = hcr::finite_difference_check(problem, args.step);
    if (check.degenerate) {
      ++skipped;
    } else {
      ++checked;
      if (check.max_rel_error > max_rel_error) max_rel_error = check.max_rel_error;
    }
  }

  constexpr double kThreshold = 1e-4;
  json doc;
  doc["m"] = args.m;
  doc["n"] = args.n;
  doc["trials"] = args.trials;
  doc["checked"] = checked;
  doc["skipped_degenerate"] = skipped;
  doc["max_rel_error"] = max_rel_error;
  doc["threshold"] = kThreshold;
  doc["pass"] = max_rel_error < kThreshold;
  std::cout << doc.dump(2) << "\n";
  return max_rel_error < kThreshold ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  hcr::init_threads_from_env();

  CLI::App app{"Sub-action sequence matching toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read defaults from a key=value file");

  ClusterArgs cluster_args;
  CLI::App* cluster = app.add_subcommand("cluster", "Segment a sequence into sub-actions");
  cluster->add_option("--input", cluster_args.input, "Input .hcrf sequence")->required();
  cluster->add_option("--k", cluster_args.k, "Number of segments")->required();
  cluster
      ->add_option("--frames-per-segment", cluster_args.frames_per_segment,
                   "Frames averaged per segment (0 = every frame)")
      ->capture_default_str();
  cluster->add_option("--out", cluster_args.out, "Segmentation JSON output path")->required();
  cluster->add_option("--reprs-out", cluster_args.reprs_out,
                      "Representation .hcrf output path (default: --out with .hcrf)");

  EmdArgs emd_args;
  CLI::App* emd = app.add_subcommand("emd", "Compare two sequence representations");
  emd->add_option("--a", emd_args.a, "First .hcrf file")->required();
  emd->add_option("--b", emd_args.b, "Second .hcrf file")->required();
  emd->add_option("--metric", emd_args.metric,
                  "emd, avg-euclid, avg-cos, max-euclid, max-cos, or aligned")
      ->capture_default_str();
  emd->add_flag("--dump-solution", emd_args.dump_solution,
                "Include the transport plan, duals, and objective");

  EpisodeEvalArgs eval_args;
  CLI::App* episode_eval =
      app.add_subcommand("episode-eval", "Run an n-way k-shot episodic evaluation");
  episode_eval->add_option("--manifest", eval_args.manifest, "Dataset manifest JSON")
      ->required();
  episode_eval->add_option("--way", eval_args.way, "Classes per episode")->capture_default_str();
  episode_eval->add_option("--shot", eval_args.shot, "Support items per class")
      ->capture_default_str();
  episode_eval->add_option("--queries", eval_args.queries, "Query items per class")
      ->capture_default_str();
  episode_eval->add_option("--episodes", eval_args.episodes, "Number of episodes")
      ->capture_default_str();
  episode_eval
      ->add_option("--metric", eval_args.metric,
                   "emd, avg-euclid, avg-cos, max-euclid, max-cos, or aligned")
      ->capture_default_str();
  episode_eval->add_option("--agg", eval_args.aggregation, "Shot aggregation: mean or max")
      ->capture_default_str();
  episode_eval->add_option("--k-subactions", eval_args.k_subactions, "Segments per sequence")
      ->capture_default_str();
  episode_eval
      ->add_option("--frames-per-segment", eval_args.frames_per_segment,
                   "Frames averaged per segment (0 = every frame)")
      ->capture_default_str();
  episode_eval->add_option("--seed", eval_args.seed, "Evaluation seed")->capture_default_str();
  episode_eval->add_option("--out", eval_args.out, "Report JSON output path")->required();
  episode_eval->add_option("--csv-out", eval_args.csv_out, "Optional per-episode CSV path");

  PartsComposeArgs parts_args;
  CLI::App* parts_compose =
      app.add_subcommand("parts-compose", "Compose body-part priors from keypoint heatmaps");
  parts_compose->add_option("--input", parts_args.input, "Keypoint .hcrh stack (18 channels)")
      ->required();
  parts_compose->add_option("--out", parts_args.out, "Part prior .hcrh output path")->required();
  parts_compose->add_flag("--lenient", parts_args.lenient,
                          "Accept heatmap values outside [0, 1]");
  parts_compose->add_option("--pred", parts_args.pred,
                            "Predicted part grids (.hcrh) to score against the priors");
  CLI::Option* cls_loss_opt = parts_compose->add_option(
      "--cls-loss", parts_args.cls_loss, "Classification loss to combine with the parts loss");
  parts_compose->add_option("--lambda", parts_args.lambda, "Parts loss weight")
      ->capture_default_str();
  parts_compose->add_flag("--sum-reduction", parts_args.sum_reduction,
                          "Sum squared errors instead of averaging them");

  SynthGenArgs synth_args;
  CLI::App* synth_gen = app.add_subcommand("synth-gen", "Generate a synthetic dataset");
  synth_gen->add_option("--out-dir", synth_args.out_dir, "Directory for .hcrf files")
      ->required();
  synth_gen->add_option("--manifest-out", synth_args.manifest_out,
                        "Manifest path (default: <out-dir>/manifest.json)");
  synth_gen->add_option("--classes", synth_args.spec.classes, "Number of classes")
      ->capture_default_str();
  synth_gen->add_option("--items-per-class", synth_args.spec.items_per_class, "Items per class")
      ->capture_default_str();
  synth_gen->add_option("--atoms", synth_args.spec.atoms_per_class, "Sub-action atoms per class")
      ->capture_default_str();
  synth_gen->add_option("--dim", synth_args.spec.atom_dim, "Feature dimension")
      ->capture_default_str();
  synth_gen->add_option("--frames-min", synth_args.spec.frames_per_atom_min,
                        "Minimum frames per atom block")
      ->capture_default_str();
  synth_gen->add_option("--frames-max", synth_args.spec.frames_per_atom_max,
                        "Maximum frames per atom block")
      ->capture_default_str();
  synth_gen->add_option("--sigma", synth_args.spec.noise_sigma, "Frame noise level")
      ->capture_default_str();
  synth_gen->add_flag("--permute,!--no-permute", synth_args.spec.permute,
                      "Shuffle each item's atom order");
  synth_gen->add_option("--shared-atoms", synth_args.spec.shared_atoms,
                        "Atoms shared across all classes")
      ->capture_default_str();
  synth_gen->add_option("--seed", synth_args.spec.seed, "Generator seed")->capture_default_str();

  GradcheckArgs grad_args;
  CLI::App* gradcheck =
      app.add_subcommand("gradcheck", "Finite-difference check of the transport gradient");
  gradcheck->add_option("--m", grad_args.m, "Sources per instance")->capture_default_str();
  gradcheck->add_option("--n", grad_args.n, "Sinks per instance")->capture_default_str();
  gradcheck->add_option("--trials", grad_args.trials, "Random instances to try")
      ->capture_default_str();
  gradcheck->add_option("--seed", grad_args.seed, "Instance seed")->capture_default_str();
  gradcheck->add_option("--step", grad_args.step, "Finite difference step")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    parts_args.has_cls_loss = cls_loss_opt->count() > 0;
    if (cluster->parsed()) return run_cluster(cluster_args);
    if (emd->parsed()) return run_emd(emd_args);
    if (episode_eval->parsed()) return run_episode_eval(eval_args);
    if (parts_compose->parsed()) return run_parts_compose(parts_args);
    if (synth_gen->parsed()) return run_synth_gen(synth_args);
    if (gradcheck->parsed()) return run_gradcheck(grad_args);
    std::cerr << "error: no subcommand selected\n";
    return 2;
  } catch (const hcr::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const hcr::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const hcr::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const hcr::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const hcr::DegenerateVector& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const hcr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
