#include <gtest/gtest.h>

#include <random>

#include <kdereg/correspondence.hpp>
#include <kdereg/point_cloud.hpp>
#include <kdereg/rigid_transform.hpp>

#include "oracles.hpp"

using namespace kdereg;

namespace {

PointCloud random_cloud(std::size_t n, std::uint64_t seed, double extent = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-extent, extent);
  PointCloud cloud;
  for (std::size_t i = 0; i < n; ++i) cloud.add(Point3(u(rng), u(rng), u(rng)));
  return cloud;
}

}  // namespace

TEST(RigidTransform, IdentityLeavesCloudUnchanged) {
  const PointCloud cloud = random_cloud(25, 1);
  const PointCloud out = apply_transform(cloud, RigidTransform::identity());
  ASSERT_EQ(out.size(), cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    EXPECT_EQ(out.points[i], cloud.points[i]);
  }
}

TEST(RigidTransform, QuarterTurnAboutZ) {
  RigidTransform t;
  t.rotation = Eigen::AngleAxisd(M_PI / 2.0, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  const Point3 out = t.apply(Point3(1, 0, 0));
  EXPECT_NEAR(out.x(), 0.0, 1e-12);
  EXPECT_NEAR(out.y(), 1.0, 1e-12);
  EXPECT_NEAR(out.z(), 0.0, 1e-12);
}

TEST(RigidTransform, PreservesAllPairwiseDistances) {
  std::mt19937_64 rng(7);
  const PointCloud cloud = random_cloud(100, 2);
  const RigidTransform t = oracle::random_rigid_transform(rng);
  const PointCloud out = apply_transform(cloud, t);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (std::size_t j = i + 1; j < cloud.size(); ++j) {
      const double before = (cloud.points[i] - cloud.points[j]).norm();
      const double after = (out.points[i] - out.points[j]).norm();
      ASSERT_NEAR(before, after, 1e-9);
    }
  }
}

TEST(RigidTransform, ColorsSurviveTransform) {
  PointCloud cloud;
  cloud.add(Point3(1, 2, 3), Color{10, 20, 30});
  cloud.add(Point3(4, 5, 6), Color{40, 50, 60});
  std::mt19937_64 rng(3);
  const PointCloud out = apply_transform(cloud, oracle::random_rigid_transform(rng));
  ASSERT_TRUE(out.has_colors());
  EXPECT_EQ(out.colors[1], (Color{40, 50, 60}));
}

TEST(Compose, IdentityIsNeutral) {
  std::mt19937_64 rng(4);
  const RigidTransform t = oracle::random_rigid_transform(rng);
  const RigidTransform left = compose(t, RigidTransform::identity());
  const RigidTransform right = compose(RigidTransform::identity(), t);
  EXPECT_LT((left.matrix() - t.matrix()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((right.matrix() - t.matrix()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Compose, InverseCancels) {
  std::mt19937_64 rng(5);
  const RigidTransform t = oracle::random_rigid_transform(rng);
  const RigidTransform round = compose(t, t.inverse());
  EXPECT_LT((round.matrix() - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Compose, MatchesSequentialApplication) {
  std::mt19937_64 rng(6);
  const RigidTransform a = oracle::random_rigid_transform(rng);
  const RigidTransform b = oracle::random_rigid_transform(rng);
  const RigidTransform ab = compose(a, b);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 20; ++i) {
    const Point3 p(u(rng), u(rng), u(rng));
    EXPECT_LT((ab.apply(p) - a.apply(b.apply(p))).norm(), 1e-9);
  }
}

TEST(Compose, AssociativeOnPoints) {
  std::mt19937_64 rng(8);
  const RigidTransform a = oracle::random_rigid_transform(rng);
  const RigidTransform b = oracle::random_rigid_transform(rng);
  const RigidTransform c = oracle::random_rigid_transform(rng);
  const RigidTransform left = compose(compose(a, b), c);
  const RigidTransform right = compose(a, compose(b, c));
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 20; ++i) {
    const Point3 p(u(rng), u(rng), u(rng));
    EXPECT_LT((left.apply(p) - right.apply(p)).norm(), 1e-9);
  }
}

TEST(Rmse, ZeroForPerfectAlignment) {
  CorrespondenceSet set;
  for (int i = 0; i < 10; ++i) {
    const Point3 p(i * 0.1, -i * 0.2, i * 0.3);
    set.add(p, p);
  }
  EXPECT_DOUBLE_EQ(rmse(set, RigidTransform::identity()), 0.0);
}

TEST(Rmse, UnitOffsetGivesOne) {
  CorrespondenceSet set;
  for (int i = 0; i < 7; ++i) {
    const Point3 p(i * 0.4, i * 0.1, -i * 0.5);
    set.add(p, p + Point3(0, 0, 1));
  }
  EXPECT_NEAR(rmse(set, RigidTransform::identity()), 1.0, 1e-15);
}

TEST(Rmse, MatchesNaiveLoop) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CorrespondenceSet set;
  for (int i = 0; i < 40; ++i) {
    set.add(Point3(u(rng), u(rng), u(rng)), Point3(u(rng), u(rng), u(rng)));
  }
  const RigidTransform t = oracle::random_rigid_transform(rng);
  double sum = 0.0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const Point3 moved = t.rotation * set.source[i] + t.translation;
    const Point3 diff = set.target[i] - moved;
    sum += diff.x() * diff.x() + diff.y() * diff.y() + diff.z() * diff.z();
  }
  const double expected = std::sqrt(sum / static_cast<double>(set.size()));
  EXPECT_NEAR(rmse(set, t), expected, 1e-12);
}

TEST(Rmse, ZeroExactlyWhenAligned) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const RigidTransform t = oracle::random_rigid_transform(rng);
  CorrespondenceSet set;
  for (int i = 0; i < 15; ++i) {
    const Point3 p(u(rng), u(rng), u(rng));
    set.add(p, t.apply(p));
  }
  EXPECT_LT(rmse(set, t), 1e-12);
  set.target[3] += Point3(1e-6, 0, 0);
  EXPECT_GT(rmse(set, t), 1e-12);
}

TEST(Rmse, EmptySetIsAnError) {
  CorrespondenceSet set;
  EXPECT_THROW(rmse(set, RigidTransform::identity()), std::invalid_argument);
}

TEST(RigidTransform, ValidityChecks) {
  RigidTransform good;
  EXPECT_TRUE(good.is_valid());

  RigidTransform scaled;
  scaled.rotation = 1.001 * Eigen::Matrix3d::Identity();
  EXPECT_FALSE(scaled.is_valid());
  EXPECT_THROW(scaled.validate(), std::invalid_argument);

  RigidTransform reflected;
  reflected.rotation = Eigen::Matrix3d::Identity();
  reflected.rotation(2, 2) = -1.0;  // orthonormal but det -1
  EXPECT_FALSE(reflected.is_valid());
}

TEST(RigidTransform, FromMatrixRejectsBadBottomRow) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(3, 1) = 0.25;
  EXPECT_THROW(RigidTransform::from_matrix(m), std::invalid_argument);
  m(3, 1) = 0.0;
  EXPECT_NO_THROW(RigidTransform::from_matrix(m));
}

TEST(RigidTransform, HomogeneousBottomRow) {
  std::mt19937_64 rng(11);
  const Eigen::Matrix4d m = oracle::random_rigid_transform(rng).matrix();
  EXPECT_EQ(m(3, 0), 0.0);
  EXPECT_EQ(m(3, 1), 0.0);
  EXPECT_EQ(m(3, 2), 0.0);
  EXPECT_EQ(m(3, 3), 1.0);
}

TEST(RigidTransform, ExplicitReorthonormalization) {
  std::mt19937_64 rng(12);
  RigidTransform t = oracle::random_rigid_transform(rng);
  t.rotation(0, 1) += 1e-4;  // drift past the validity tolerance
  EXPECT_FALSE(t.is_valid());
  const RigidTransform repaired = t.orthonormalized();
  EXPECT_TRUE(repaired.is_valid());
  EXPECT_LT((repaired.rotation - t.rotation).cwiseAbs().maxCoeff(), 1e-3);
}
