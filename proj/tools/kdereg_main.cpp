// kdereg command-line front end: back-projection, correspondence weighting,
// rigid alignment, ICP, benchmarks, and PLY conversion.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <kdereg/kdereg.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitDegenerate = 2;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

kdereg::DepthImage load_depth(const std::string& path, double depth_scale) {
  if (has_suffix(path, ".png")) return kdereg::io::read_png_depth(path, depth_scale);
  if (has_suffix(path, ".pgm")) return kdereg::io::read_pgm16(path, depth_scale);
  throw kdereg::IoError(path + ": depth images must be 16-bit PGM or PNG");
}

kdereg::MaskImage load_mask(const std::string& path) {
  if (has_suffix(path, ".png")) return kdereg::io::read_png_mask(path);
  if (has_suffix(path, ".pgm")) return kdereg::io::read_pgm8(path);
  throw kdereg::IoError(path + ": masks must be 8-bit PGM or PNG");
}

void require_file(const std::string& path, const std::string& role) {
  if (path.empty()) throw kdereg::IoError("missing required " + role + " path");
  if (!std::filesystem::exists(path)) throw kdereg::IoError(path + ": no such file (" + role + ")");
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
  const char* env = std::getenv("KDEREG_SEED");
  if (!env || !*env) return fallback;
  return static_cast<std::uint64_t>(std::strtoull(env, nullptr, 10));
}

struct BackprojectArgs {
  std::string depth, mask, camera, output_prefix = "cloud";
  int outlier_k = 20;
  double outlier_sigma = 2.0;
  bool ascii = false;
};

int run_backproject(const BackprojectArgs& args) {
  require_file(args.depth, "depth image");
  require_file(args.mask, "mask image");
  require_file(args.camera, "camera model");

  const kdereg::CameraModel camera = kdereg::io::read_camera_json(args.camera);
  const kdereg::DepthImage depth = load_depth(args.depth, camera.depth_scale);
  const kdereg::MaskImage mask = load_mask(args.mask);

  bool all_zero = false;
  const kdereg::DepthImage filled = kdereg::fill_holes(depth, &all_zero);
  if (all_zero) std::cerr << "warning: depth image has no readings\n";

  const kdereg::DepthImage aligned =
      kdereg::align_depth_to_color(filled, camera, mask.width, mask.height);
  const kdereg::DepthImage masked = kdereg::rectify_with_mask(aligned, mask);
  const auto instances =
      kdereg::backproject_instances(masked, mask, camera.color_intrinsics);

  const auto format =
      args.ascii ? kdereg::io::PlyFormat::kAscii : kdereg::io::PlyFormat::kBinaryLittleEndian;
  kdereg::PointCloud aggregate;
  for (const auto& [label, cloud] : instances) {
    const kdereg::PointCloud cleaned =
        kdereg::remove_outliers(cloud, args.outlier_k, args.outlier_sigma);
    kdereg::concatenate(aggregate, cleaned);
    const std::string path =
        args.output_prefix + "_instance_" + std::to_string(static_cast<int>(label)) + ".ply";
    kdereg::io::write_ply(path, cleaned, format);
    std::cout << "instance " << static_cast<int>(label) << ": " << cleaned.size() << " points -> "
              << path << "\n";
  }
  if (instances.empty()) std::cerr << "warning: mask selects no depth pixels\n";
  const std::string aggregate_path = args.output_prefix + "_aggregate.ply";
  kdereg::io::write_ply(aggregate_path, aggregate, format);
  std::cout << "aggregate: " << aggregate.size() << " points -> " << aggregate_path << "\n";
  return kExitOk;
}

struct EmbedArgs {
  double x = 0, y = 0;
  int dimension = 128;
  double base = 10000.0;
};

int run_embed(const EmbedArgs& args) {
  kdereg::EmbeddingConfig config{args.dimension, args.base};
  const std::vector<double> values = kdereg::embed(args.x, args.y, config);
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::cout << (i ? "," : "") << fmt17(values[i]);
  }
  std::cout << "\n";
  return kExitOk;
}

struct WeighArgs {
  std::string input, output;
  double radius = 0.0;
  int grid_size = 1024;
};

int run_weigh(const WeighArgs& args) {
  require_file(args.input, "correspondence CSV");
  const kdereg::CorrespondenceSet set = kdereg::io::read_correspondences_csv(args.input);
  kdereg::WeightingOptions options;
  options.radius = args.radius;
  options.grid_size = args.grid_size;
  const kdereg::WeightingResult result = kdereg::weigh_correspondences(set, options);
  if (result.uniform_fallback) std::cerr << "note: fell back to uniform weights\n";
  if (result.silverman_fallback) {
    std::cerr << "note: bandwidth fell back to Silverman's rule on at least one axis\n";
  }
  if (args.output.empty()) {
    for (double w : result.weights) std::cout << fmt17(w) << "\n";
  } else {
    kdereg::io::write_weights_csv(args.output, result.weights);
    std::cout << "wrote " << result.weights.size() << " weights -> " << args.output << "\n";
  }
  return kExitOk;
}

struct AlignArgs {
  std::string correspondences, weights, output;
};

int run_align(const AlignArgs& args) {
  require_file(args.correspondences, "correspondence CSV");
  kdereg::CorrespondenceSet set = kdereg::io::read_correspondences_csv(args.correspondences);
  if (!args.weights.empty()) {
    require_file(args.weights, "weight CSV");
    auto w = kdereg::io::read_weights_csv(args.weights);
    if (w.size() != set.size()) {
      throw kdereg::IoError(args.weights + ": weight count does not match correspondence count");
    }
    set.weights = std::move(w);
  }
  const kdereg::AlignmentResult result = kdereg::solve_weighted(set);
  if (!args.output.empty()) kdereg::io::write_transform_json(args.output, result.transform);
  std::cout << "weighted_residual " << fmt17(result.weighted_residual) << "\n";
  std::cout << "rmse " << fmt17(result.rmse) << "\n";
  if (args.output.empty()) std::cout << kdereg::io::transform_to_json_string(result.transform);
  return kExitOk;
}

struct IcpArgs {
  std::string source, target, output;
  int max_iterations = 50;
  double tolerance = 1e-6;
};

int run_icp(const IcpArgs& args) {
  require_file(args.source, "source PLY");
  require_file(args.target, "target PLY");
  const kdereg::PointCloud source = kdereg::io::read_ply(args.source);
  const kdereg::PointCloud target = kdereg::io::read_ply(args.target);
  kdereg::IcpOptions options;
  options.max_iterations = args.max_iterations;
  options.tolerance = args.tolerance;
  const kdereg::AlignmentResult result = kdereg::icp_point_to_point(source, target, options);
  if (!args.output.empty()) kdereg::io::write_transform_json(args.output, result.transform);
  std::cout << "rmse " << fmt17(result.rmse) << "\n";
  std::cout << "iterations " << result.iterations << "\n";
  if (args.output.empty()) std::cout << kdereg::io::transform_to_json_string(result.transform);
  return kExitOk;
}

struct PipelineArgs {
  std::string config;
  std::string depth_current, mask_current, depth_previous, mask_previous;
  std::string camera, correspondences, weights;
  std::string output_transform = "transform.json";
  std::string output_cloud = "merged.ply";
  double radius = 0.0;
  int grid_size = 1024;
  int outlier_k = 20;
  double outlier_sigma = 2.0;
  int verbosity = 0;
};

void merge_pipeline_config(PipelineArgs& args) {
  if (args.config.empty()) return;
  require_file(args.config, "pipeline config");
  const nlohmann::json j = kdereg::io::detail::parse_file(args.config);
  auto pick_string = [&](const char* key, std::string& out) {
    if (out.empty() && j.contains(key)) out = j[key].get<std::string>();
  };
  pick_string("depth_current", args.depth_current);
  pick_string("mask_current", args.mask_current);
  pick_string("depth_previous", args.depth_previous);
  pick_string("mask_previous", args.mask_previous);
  pick_string("camera", args.camera);
  pick_string("correspondences", args.correspondences);
  pick_string("weights", args.weights);
  if (j.contains("output_transform")) args.output_transform = j["output_transform"].get<std::string>();
  if (j.contains("output_cloud")) args.output_cloud = j["output_cloud"].get<std::string>();
  if (j.contains("radius")) args.radius = j["radius"].get<double>();
  if (j.contains("grid_size")) args.grid_size = j["grid_size"].get<int>();
  if (j.contains("outlier_k")) args.outlier_k = j["outlier_k"].get<int>();
  if (j.contains("outlier_sigma")) args.outlier_sigma = j["outlier_sigma"].get<double>();
  if (j.contains("verbosity")) args.verbosity = j["verbosity"].get<int>();
}

int run_pipeline(PipelineArgs args) {
  using clock = std::chrono::steady_clock;
  merge_pipeline_config(args);

  // fail fast: every input must exist and parse before any stage runs
  require_file(args.depth_current, "current depth image");
  require_file(args.mask_current, "current mask image");
  require_file(args.depth_previous, "previous depth image");
  require_file(args.mask_previous, "previous mask image");
  require_file(args.camera, "camera model");
  require_file(args.correspondences, "correspondence CSV");
  const kdereg::CameraModel camera = kdereg::io::read_camera_json(args.camera);
  const kdereg::DepthImage depth_t = load_depth(args.depth_current, camera.depth_scale);
  const kdereg::MaskImage mask_t = load_mask(args.mask_current);
  const kdereg::DepthImage depth_p = load_depth(args.depth_previous, camera.depth_scale);
  const kdereg::MaskImage mask_p = load_mask(args.mask_previous);
  kdereg::CorrespondenceSet set = kdereg::io::read_correspondences_csv(args.correspondences);
  std::optional<std::vector<double>> file_weights;
  if (!args.weights.empty()) {
    require_file(args.weights, "weight CSV");
    file_weights = kdereg::io::read_weights_csv(args.weights);
    if (file_weights->size() != set.size()) {
      throw kdereg::IoError(args.weights + ": weight count does not match correspondence count");
    }
  }

  auto backproject_frame = [&](const kdereg::DepthImage& depth, const kdereg::MaskImage& mask) {
    const kdereg::DepthImage filled = kdereg::fill_holes(depth);
    const kdereg::DepthImage aligned =
        kdereg::align_depth_to_color(filled, camera, mask.width, mask.height);
    const kdereg::DepthImage masked = kdereg::rectify_with_mask(aligned, mask);
    kdereg::PointCloud cloud;
    for (const auto& [label, instance] :
         kdereg::backproject_instances(masked, mask, camera.color_intrinsics)) {
      kdereg::concatenate(cloud,
                          kdereg::remove_outliers(instance, args.outlier_k, args.outlier_sigma));
    }
    return cloud;
  };

  const auto t0 = clock::now();
  kdereg::PointCloud cloud_t, cloud_p;
  try {
    cloud_t = backproject_frame(depth_t, mask_t);
    cloud_p = backproject_frame(depth_p, mask_p);
  } catch (const std::invalid_argument& e) {
    throw kdereg::IoError(std::string("back-projection stage failed: ") + e.what());
  }
  const auto t1 = clock::now();

  if (file_weights) {
    set.weights = *file_weights;
  } else {
    std::cerr << "note: weights computed internally\n";
    try {
      kdereg::WeightingOptions options;
      options.radius = args.radius;
      options.grid_size = args.grid_size;
      const kdereg::WeightingResult wr = kdereg::weigh_correspondences(set, options);
      if (wr.uniform_fallback && args.verbosity > 0) {
        std::cerr << "note: fell back to uniform weights\n";
      }
      set.weights = wr.weights;
    } catch (const std::invalid_argument& e) {
      throw kdereg::IoError(std::string("weighting stage failed: ") + e.what());
    }
  }
  const auto t2 = clock::now();

  kdereg::AlignmentResult result;
  try {
    result = kdereg::solve_weighted(set);
  } catch (const kdereg::DegeneracyError& e) {
    throw kdereg::DegeneracyError(std::string("alignment stage failed: ") + e.what());
  }
  const auto t3 = clock::now();

  const kdereg::PointCloud merged = kdereg::align_clouds(cloud_t, cloud_p, result.transform);
  kdereg::io::write_transform_json(args.output_transform, result.transform);
  kdereg::io::write_ply(args.output_cloud, merged);

  auto ms = [](auto a, auto b) { return std::chrono::duration<double, std::milli>(b - a).count(); };
  std::printf("stage timings (ms):\n");
  std::printf("  %-24s %10.3f\n", "Back-projection", ms(t0, t1));
  std::printf("  %-24s %10.3f\n", "Keypoint Weighting", ms(t1, t2));
  std::printf("  %-24s %10.3f\n", "Point Cloud Alignment", ms(t2, t3));
  std::printf("weighted_residual %s\n", fmt17(result.weighted_residual).c_str());
  std::printf("rmse %s\n", fmt17(result.rmse).c_str());
  std::printf("merged cloud: %zu points -> %s\n", merged.size(), args.output_cloud.c_str());
  std::printf("transform -> %s\n", args.output_transform.c_str());
  return kExitOk;
}

struct SweepArgs {
  std::vector<double> angles = {0, 10, 20, 30, 45};
  int seeds = 20;
  double noise = 0.003;
  double outliers = 0.1;
  int objects = 4;
  int points_per_object = 50;
  double distance = 2.0;
  bool no_partial_overlap = false;
  std::uint64_t seed = 7;
  std::string csv = "sweep.csv";
  std::string svg;
};

int run_bench_sweep(const SweepArgs& args) {
  kdereg::bench::SweepConfig config;
  config.angles = args.angles;
  config.seeds = args.seeds;
  config.noise_sigma = args.noise;
  config.outlier_fraction = args.outliers;
  config.n_objects = args.objects;
  config.points_per_object = args.points_per_object;
  config.distance = args.distance;
  config.partial_overlap = !args.no_partial_overlap;
  config.base_seed = seed_from_env(args.seed);

  const kdereg::bench::SweepReport report = kdereg::bench::run_angle_sweep(config);
  kdereg::bench::write_sweep_csv(args.csv, report);
  std::cout << "angle  rmse(KDE)      rmse(no KDE)   rmse(ICP)\n";
  for (const auto& cell : report.cells) {
    std::printf("%5.0f  %-13.6g  %-13.6g  %-13.6g\n", cell.angle,
                kdereg::bench::mean_ignoring_nan(cell.rmse_weighted),
                kdereg::bench::mean_ignoring_nan(cell.rmse_unweighted),
                kdereg::bench::mean_ignoring_nan(cell.rmse_icp));
  }
  std::cout << "report -> " << args.csv << "\n";
  if (!args.svg.empty()) {
    kdereg::bench::write_sweep_svg(args.svg, report);
    std::cout << "plot -> " << args.svg << "\n";
  }
  return kExitOk;
}

struct ScalingArgs {
  std::vector<int> m_values = {1000, 2000, 4000, 8000};
  int grid_size = 1024;
  int repetitions = 11;
  std::uint64_t seed = 7;
  std::string csv = "scaling.csv";
};

int run_bench_scaling(const ScalingArgs& args) {
  kdereg::bench::ScalingConfig config;
  config.m_values = args.m_values;
  config.grid_size = args.grid_size;
  config.repetitions = args.repetitions;
  config.seed = seed_from_env(args.seed);
  const kdereg::bench::ScalingReport report = kdereg::bench::run_scaling_benchmark(config);
  kdereg::bench::write_scaling_csv(args.csv, report);
  std::cout << "m      init_ms    kde_ms     solve_ms\n";
  for (const auto& row : report.rows) {
    std::printf("%-6d %-10.4f %-10.4f %-10.4f\n", row.m, row.init_ms, row.kde_ms, row.solve_ms);
  }
  std::printf("kde log-log slope:   %.3f\n", report.kde_slope);
  std::printf("solve log-log slope: %.3f\n", report.solve_slope);
  std::cout << "report -> " << args.csv << "\n";
  return kExitOk;
}

struct ConvertArgs {
  std::string input, output;
  std::string format = "binary";
};

int run_convert(const ConvertArgs& args) {
  require_file(args.input, "input PLY");
  const kdereg::PointCloud cloud = kdereg::io::read_ply(args.input);
  const auto format = args.format == "ascii" ? kdereg::io::PlyFormat::kAscii
                                             : kdereg::io::PlyFormat::kBinaryLittleEndian;
  kdereg::io::write_ply(args.output, cloud, format);
  std::cout << cloud.size() << " points -> " << args.output << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"KDE-weighted point-cloud registration toolkit"};
  app.require_subcommand(1);

  BackprojectArgs backproject_args;
  auto* backproject = app.add_subcommand(
      "backproject", "Lift a masked depth frame into per-instance point clouds");
  backproject->add_option("--depth", backproject_args.depth, "16-bit depth image (PGM or PNG)")
      ->required();
  backproject->add_option("--mask", backproject_args.mask, "8-bit instance mask (PGM or PNG)")
      ->required();
  backproject->add_option("--camera", backproject_args.camera, "camera model JSON")->required();
  backproject->add_option("--output-prefix", backproject_args.output_prefix,
                          "prefix for the emitted PLY files");
  backproject->add_option("--outlier-k", backproject_args.outlier_k,
                          "neighbors for statistical outlier removal");
  backproject->add_option("--outlier-sigma", backproject_args.outlier_sigma,
                          "outlier threshold in standard deviations");
  backproject->add_flag("--ascii", backproject_args.ascii, "write ASCII PLY instead of binary");

  EmbedArgs embed_args;
  auto* embed = app.add_subcommand("embed", "Print the 2D positional embedding of a pixel as CSV");
  embed->add_option("--x", embed_args.x, "pixel x coordinate")->required();
  embed->add_option("--y", embed_args.y, "pixel y coordinate")->required();
  embed->add_option("--d", embed_args.dimension, "embedding dimension (divisible by 4)");
  embed->add_option("--base", embed_args.base, "frequency base");

  WeighArgs weigh_args;
  auto* weigh = app.add_subcommand("weigh", "Density-weight a correspondence CSV");
  weigh->add_option("--input", weigh_args.input, "correspondence CSV")->required();
  weigh->add_option("--output", weigh_args.output, "weight CSV (stdout when omitted)");
  weigh->add_option("--radius", weigh_args.radius,
                    "neighbor radius in meters (0 = 5% of bounding-box diagonal)");
  weigh->add_option("--grid-size", weigh_args.grid_size, "KDE grid size (power of two)");

  AlignArgs align_args;
  auto* align = app.add_subcommand("align", "Solve the weighted rigid alignment in closed form");
  align->add_option("--correspondences", align_args.correspondences, "correspondence CSV")
      ->required();
  align->add_option("--weights", align_args.weights, "optional weight CSV");
  align->add_option("--output", align_args.output, "transform JSON path (stdout when omitted)");

  IcpArgs icp_args;
  auto* icp = app.add_subcommand("icp", "Point-to-point ICP between two PLY clouds");
  icp->add_option("--source", icp_args.source, "source PLY")->required();
  icp->add_option("--target", icp_args.target, "target PLY")->required();
  icp->add_option("--output", icp_args.output, "transform JSON path (stdout when omitted)");
  icp->add_option("--max-iter", icp_args.max_iterations, "iteration cap");
  icp->add_option("--tol", icp_args.tolerance, "RMSE improvement tolerance");

  PipelineArgs pipeline_args;
  auto* pipeline = app.add_subcommand(
      "pipeline", "Back-project two frames, weigh correspondences, solve, and merge");
  pipeline->add_option("--config", pipeline_args.config, "pipeline config JSON");
  pipeline->add_option("--depth-current", pipeline_args.depth_current, "current depth image");
  pipeline->add_option("--mask-current", pipeline_args.mask_current, "current mask image");
  pipeline->add_option("--depth-previous", pipeline_args.depth_previous, "previous depth image");
  pipeline->add_option("--mask-previous", pipeline_args.mask_previous, "previous mask image");
  pipeline->add_option("--camera", pipeline_args.camera, "camera model JSON");
  pipeline->add_option("--correspondences", pipeline_args.correspondences, "correspondence CSV");
  pipeline->add_option("--weights", pipeline_args.weights, "optional weight CSV");
  pipeline->add_option("--output-transform", pipeline_args.output_transform, "transform JSON path");
  pipeline->add_option("--output-cloud", pipeline_args.output_cloud, "merged PLY path");
  pipeline->add_option("--radius", pipeline_args.radius, "weighting neighbor radius");
  pipeline->add_option("--grid-size", pipeline_args.grid_size, "KDE grid size");
  pipeline->add_option("--outlier-k", pipeline_args.outlier_k, "outlier-removal neighbor count");
  pipeline->add_option("--outlier-sigma", pipeline_args.outlier_sigma,
                       "outlier-removal threshold");
  pipeline->add_flag_function(
      "-v,--verbose", [&](std::int64_t n) { pipeline_args.verbosity = static_cast<int>(n); },
      "verbose logging");

  auto* bench = app.add_subcommand("bench", "Benchmarks");
  bench->require_subcommand(1);

  SweepArgs sweep_args;
  auto* sweep = bench->add_subcommand("sweep", "Angle-sweep RMSE comparison on synthetic scenes");
  sweep->add_option("--angles", sweep_args.angles, "angle magnitudes in degrees")
      ->delimiter(',');
  sweep->add_option("--seeds", sweep_args.seeds, "seeds per angle");
  sweep->add_option("--noise", sweep_args.noise, "target noise sigma in meters");
  sweep->add_option("--outliers", sweep_args.outliers, "outlier pair fraction");
  sweep->add_option("--objects", sweep_args.objects, "object clusters per scene");
  sweep->add_option("--points-per-object", sweep_args.points_per_object,
                    "correspondences per cluster");
  sweep->add_option("--distance", sweep_args.distance, "camera-to-scene distance in meters");
  sweep->add_flag("--no-partial-overlap", sweep_args.no_partial_overlap,
                  "disable the occlusion simulation");
  sweep->add_option("--seed", sweep_args.seed, "base seed (KDEREG_SEED overrides)");
  sweep->add_option("--csv", sweep_args.csv, "report CSV path");
  sweep->add_option("--svg", sweep_args.svg, "optional SVG plot path");

  ScalingArgs scaling_args;
  auto* scaling = bench->add_subcommand("scaling", "Stage-runtime scaling against pair count");
  scaling->add_option("--m", scaling_args.m_values, "ascending pair counts")->delimiter(',');
  scaling->add_option("--grid-size", scaling_args.grid_size, "KDE grid size");
  scaling->add_option("--reps", scaling_args.repetitions, "repetitions per measurement");
  scaling->add_option("--seed", scaling_args.seed, "scene seed (KDEREG_SEED overrides)");
  scaling->add_option("--csv", scaling_args.csv, "report CSV path");

  ConvertArgs convert_args;
  auto* convert = app.add_subcommand("convert", "Convert a PLY between ASCII and binary");
  convert->add_option("--input", convert_args.input, "input PLY")->required();
  convert->add_option("--output", convert_args.output, "output PLY")->required();
  convert->add_option("--format", convert_args.format, "ascii or binary")
      ->check(CLI::IsMember({"ascii", "binary"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (backproject->parsed()) return run_backproject(backproject_args);
    if (embed->parsed()) return run_embed(embed_args);
    if (weigh->parsed()) return run_weigh(weigh_args);
    if (align->parsed()) return run_align(align_args);
    if (icp->parsed()) return run_icp(icp_args);
    if (pipeline->parsed()) return run_pipeline(pipeline_args);
    if (bench->parsed()) {
      if (sweep->parsed()) return run_bench_sweep(sweep_args);
      if (scaling->parsed()) return run_bench_scaling(scaling_args);
    }
    if (convert->parsed()) return run_convert(convert_args);
  } catch (const kdereg::DegeneracyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
