#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include <kdereg/bench/scaling.hpp>
#include <kdereg/bench/svg_plot.hpp>
#include <kdereg/bench/sweep.hpp>
#include <kdereg/bench/synthetic.hpp>
#include <kdereg/solver.hpp>
#include <kdereg/weighting.hpp>

using namespace kdereg;
using namespace kdereg::bench;

namespace {

bool scenes_identical(const SyntheticScene& a, const SyntheticScene& b) {
  if (a.correspondences.size() != b.correspondences.size()) return false;
  if (a.ground_truth.matrix() != b.ground_truth.matrix()) return false;
  for (std::size_t i = 0; i < a.correspondences.size(); ++i) {
    if (a.correspondences.source[i] != b.correspondences.source[i]) return false;
    if (a.correspondences.target[i] != b.correspondences.target[i]) return false;
    if (a.outlier_mask[i] != b.outlier_mask[i]) return false;
  }
  return true;
}

}  // namespace

TEST(GenerateScene, ZeroAngleNoPerturbationIsIdentity) {
  SceneParams params;
  params.seed = 5;
  const SyntheticScene scene = generate_scene(params);
  EXPECT_EQ(scene.ground_truth.matrix(), Eigen::Matrix4d::Identity());
  ASSERT_EQ(scene.correspondences.size(), 200u);
  for (std::size_t i = 0; i < scene.correspondences.size(); ++i) {
    EXPECT_EQ(scene.correspondences.source[i], scene.correspondences.target[i]);
    EXPECT_FALSE(scene.outlier_mask[i]);
  }
}

TEST(GenerateScene, SameSeedIsBitIdentical) {
  SceneParams params;
  params.angle_deg = 30.0;
  params.noise_sigma = 0.004;
  params.outlier_fraction = 0.15;
  params.partial_overlap = true;
  params.seed = 77;
  EXPECT_TRUE(scenes_identical(generate_scene(params), generate_scene(params)));
  const SyntheticScene a = generate_scene(params);
  params.seed = 78;
  EXPECT_FALSE(scenes_identical(a, generate_scene(params)));
}

TEST(GenerateScene, NoiselessTargetsAreExactlyTransformedSources) {
  SceneParams params;
  params.angle_deg = 20.0;
  params.seed = 9;
  const SyntheticScene scene = generate_scene(params);
  for (std::size_t i = 0; i < scene.correspondences.size(); ++i) {
    const Point3 expected = scene.ground_truth.apply(scene.correspondences.source[i]);
    EXPECT_EQ(scene.correspondences.target[i], expected);
  }
}

TEST(GenerateScene, OutlierAccounting) {
  SceneParams params;
  params.angle_deg = 10.0;
  params.outlier_fraction = 0.2;
  params.seed = 13;
  const SyntheticScene scene = generate_scene(params);
  int marked = 0;
  for (bool f : scene.outlier_mask) marked += f ? 1 : 0;
  EXPECT_EQ(marked, 40);  // 20% of 200
  EXPECT_EQ(scene.clean_pairs().size(), 160u);
}

TEST(GenerateScene, OcclusionConvertsClusterZeroPairsToMismatches) {
  SceneParams params;
  params.angle_deg = 45.0;
  params.partial_overlap = true;
  params.seed = 14;
  const SyntheticScene wide = generate_scene(params);
  params.angle_deg = 10.0;
  const SyntheticScene narrow = generate_scene(params);
  params.partial_overlap = false;
  const SyntheticScene base = generate_scene(params);

  // pairs are never deleted, they only lose their true match
  EXPECT_EQ(wide.correspondences.size(), 200u);
  EXPECT_EQ(wide.source_view.size(), 200u);
  EXPECT_EQ(wide.target_view.size(), 200u);

  auto count_outliers = [](const SyntheticScene& s) {
    int n = 0;
    for (bool f : s.outlier_mask) n += f ? 1 : 0;
    return n;
  };
  // the occluded share of the 50-point cluster: all of it at 45 degrees,
  // 2 * 10/90 of it at 10 degrees
  EXPECT_EQ(count_outliers(base), 0);
  EXPECT_EQ(count_outliers(narrow), 11);
  EXPECT_EQ(count_outliers(wide), 50);

  // nested: every pair occluded at 10 degrees is also occluded at 45
  for (std::size_t i = 0; i < narrow.outlier_mask.size(); ++i) {
    if (narrow.outlier_mask[i]) EXPECT_TRUE(wide.outlier_mask[i]);
    if (wide.outlier_mask[i]) EXPECT_LT(i, 50u);  // only cluster 0 is occluded
  }
}

TEST(GenerateScene, RejectsBadParameters) {
  SceneParams params;
  params.outlier_fraction = 1.0;
  EXPECT_THROW(generate_scene(params), std::invalid_argument);
  params.outlier_fraction = 0.0;
  params.n_objects = 0;
  EXPECT_THROW(generate_scene(params), std::invalid_argument);
}

TEST(AngleSweep, CleanScenesRecoverExactly) {
  SweepConfig config;
  config.seeds = 3;
  config.noise_sigma = 0.0;
  config.outlier_fraction = 0.0;
  config.partial_overlap = false;
  const SweepReport report = run_angle_sweep(config);
  ASSERT_EQ(report.cells.size(), 9u);  // 0, +/-10, +/-20, +/-30, +/-45
  for (const auto& cell : report.cells) {
    for (double r : cell.rmse_weighted) EXPECT_LT(r, 1e-9);
    for (double r : cell.rmse_unweighted) EXPECT_LT(r, 1e-9);
    if (cell.angle == 0.0) {
      for (double r : cell.rmse_icp) EXPECT_LT(r, 1e-9);
    }
  }
}

TEST(AngleSweep, ReproducibleAcrossRuns) {
  SweepConfig config;
  config.seeds = 2;
  config.angles = {0.0, 20.0};
  config.points_per_object = 30;
  const SweepReport a = run_angle_sweep(config);
  const SweepReport b = run_angle_sweep(config);
  ASSERT_EQ(a.cells.size(), b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    EXPECT_EQ(a.cells[i].rmse_weighted, b.cells[i].rmse_weighted);
    EXPECT_EQ(a.cells[i].rmse_unweighted, b.cells[i].rmse_unweighted);
    EXPECT_EQ(a.cells[i].rmse_icp, b.cells[i].rmse_icp);
  }
}

TEST(AngleSweep, WeightedRmseInvariantUnderSceneTranslationAndRelabeling) {
  SceneParams params;
  params.angle_deg = 20.0;
  params.noise_sigma = 0.003;
  params.outlier_fraction = 0.1;
  params.seed = 15;
  const SyntheticScene scene = generate_scene(params);

  auto weighted_clean_rmse = [](const SyntheticScene& s, const CorrespondenceSet& c) {
    CorrespondenceSet set = c;
    set.weights = weigh_correspondences(set).weights;
    const AlignmentResult result = solve_weighted(set);
    double sq = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (s.outlier_mask[i]) continue;
      sq += (c.target[i] - result.transform.apply(c.source[i])).squaredNorm();
      ++n;
    }
    return std::sqrt(sq / static_cast<double>(n));
  };

  const double base = weighted_clean_rmse(scene, scene.correspondences);

  // global translation of both views
  CorrespondenceSet shifted = scene.correspondences;
  const Point3 offset(1.3, -0.7, 2.1);
  for (std::size_t i = 0; i < shifted.size(); ++i) {
    shifted.source[i] += offset;
    shifted.target[i] += offset;
  }
  SyntheticScene shifted_scene = scene;
  shifted_scene.correspondences = shifted;
  EXPECT_NEAR(weighted_clean_rmse(shifted_scene, shifted), base, 1e-9);

  // relabeling: reverse the pair order (clusters renumbered)
  CorrespondenceSet reversed;
  std::vector<bool> reversed_mask;
  for (std::size_t i = scene.correspondences.size(); i-- > 0;) {
    reversed.add(scene.correspondences.source[i], scene.correspondences.target[i]);
    reversed_mask.push_back(scene.outlier_mask[i]);
  }
  SyntheticScene reversed_scene = scene;
  reversed_scene.correspondences = reversed;
  reversed_scene.outlier_mask = reversed_mask;
  EXPECT_NEAR(weighted_clean_rmse(reversed_scene, reversed), base, 1e-9);
}

TEST(AngleSweep, DegenerateCellsRecordNanWithoutAborting) {
  SweepConfig config;
  config.seeds = 2;
  config.angles = {0.0};
  config.n_objects = 1;
  config.points_per_object = 2;  // below the solver minimum
  SweepReport report;
  EXPECT_NO_THROW(report = run_angle_sweep(config));
  ASSERT_EQ(report.cells.size(), 1u);
  for (double r : report.cells[0].rmse_weighted) EXPECT_TRUE(std::isnan(r));
  for (double r : report.cells[0].rmse_icp) EXPECT_TRUE(std::isnan(r));
}

TEST(Scaling, MediansStableAcrossRepetitionCounts) {
  ScalingConfig config;
  config.m_values = {2000};
  config.repetitions = 1;
  const double once = run_scaling_benchmark(config).rows[0].kde_ms;
  config.repetitions = 11;
  const double eleven = run_scaling_benchmark(config).rows[0].kde_ms;
  EXPECT_LT(std::max(once, eleven) / std::min(once, eleven), 3.0);
}

TEST(Scaling, ReportsRowsAndSlopes) {
  ScalingConfig config;
  config.m_values = {500, 1000, 2000};
  config.repetitions = 5;
  const ScalingReport report = run_scaling_benchmark(config);
  ASSERT_EQ(report.rows.size(), 3u);
  for (const auto& row : report.rows) {
    EXPECT_GT(row.init_ms, 0.0);
    EXPECT_GT(row.kde_ms, 0.0);
    EXPECT_GT(row.solve_ms, 0.0);
  }
  EXPECT_LT(report.kde_slope, 1.3);
  EXPECT_LT(report.solve_slope, 1.3);

  const auto csv = std::filesystem::temp_directory_path() / "kdereg_scaling_test.csv";
  write_scaling_csv(csv.string(), report);
  EXPECT_TRUE(std::filesystem::exists(csv));
  std::filesystem::remove(csv);
}

TEST(Scaling, RejectsUnsortedCounts) {
  ScalingConfig config;
  config.m_values = {2000, 1000};
  EXPECT_THROW(run_scaling_benchmark(config), std::invalid_argument);
}

TEST(SweepOutputs, CsvAndSvgAreWritten) {
  SweepConfig config;
  config.seeds = 2;
  config.angles = {0.0, 10.0};
  config.points_per_object = 30;
  const SweepReport report = run_angle_sweep(config);
  const auto dir = std::filesystem::temp_directory_path();
  const auto csv = dir / "kdereg_sweep_test.csv";
  const auto svg = dir / "kdereg_sweep_test.svg";
  write_sweep_csv(csv.string(), report);
  write_sweep_svg(svg.string(), report);
  std::ifstream csv_in(csv);
  std::string line;
  std::getline(csv_in, line);
  EXPECT_NE(line.find("angle_deg"), std::string::npos);
  int rows = 0;
  while (std::getline(csv_in, line)) ++rows;
  EXPECT_EQ(rows, 3);  // -10, 0, +10
  std::ifstream svg_in(svg);
  std::string svg_text((std::istreambuf_iterator<char>(svg_in)), std::istreambuf_iterator<char>());
  EXPECT_NE(svg_text.find("with KDE"), std::string::npos);
  EXPECT_NE(svg_text.find("ICP"), std::string::npos);
  std::filesystem::remove(csv);
  std::filesystem::remove(svg);
}
