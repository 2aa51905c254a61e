#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace kdereg {

using Point3 = Eigen::Vector3d;

/// Proper rigid motion of 3D space: rotation followed by translation.
/// No scaling, no reflection.
struct RigidTransform {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static RigidTransform identity() { return RigidTransform{}; }

  Point3 apply(const Point3& p) const { return rotation * p + translation; }

  /// 4x4 homogeneous matrix, bottom row [0 0 0 1].
  Eigen::Matrix4d matrix() const {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.topLeftCorner<3, 3>() = rotation;
    m.topRightCorner<3, 1>() = translation;
    return m;
  }

  /// Builds from a homogeneous matrix. Rejects matrices whose bottom row is
  /// not [0 0 0 1]; rotation validity is checked separately via is_valid().
  static RigidTransform from_matrix(const Eigen::Matrix4d& m) {
    const Eigen::RowVector4d bottom = m.row(3);
    if ((bottom - Eigen::RowVector4d(0, 0, 0, 1)).cwiseAbs().maxCoeff() > 1e-12) {
      throw std::invalid_argument("homogeneous matrix bottom row must be [0 0 0 1]");
    }
    RigidTransform t;
    t.rotation = m.topLeftCorner<3, 3>();
    t.translation = m.topRightCorner<3, 1>();
    return t;
  }

  RigidTransform inverse() const {
    RigidTransform t;
    t.rotation = rotation.transpose();
    t.translation = -(rotation.transpose() * translation);
    return t;
  }

  /// True when the rotation block is orthonormal with det +1 within tol.
  bool is_valid(double tol = 1e-9) const {
    const Eigen::Matrix3d gram = rotation.transpose() * rotation;
    if ((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > tol) return false;
    if (std::abs(rotation.determinant() - 1.0) > tol) return false;
    if (!rotation.allFinite() || !translation.allFinite()) return false;
    return true;
  }

  void validate(double tol = 1e-9) const {
    if (!is_valid(tol)) {
      throw std::invalid_argument("rotation block is not a proper rotation");
    }
  }

  /// Nearest proper rotation by polar decomposition. Never applied silently;
  /// callers repair drifted transforms explicitly.
  RigidTransform orthonormalized() const {
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(rotation, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
    d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant();
    RigidTransform t;
    t.rotation = svd.matrixU() * d * svd.matrixV().transpose();
    t.translation = translation;
    return t;
  }
};

/// Composition: result applies b first, then a.
inline RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  RigidTransform t;
  t.rotation = a.rotation * b.rotation;
  t.translation = a.rotation * b.translation + a.translation;
  return t;
}

inline RigidTransform operator*(const RigidTransform& a, const RigidTransform& b) {
  return compose(a, b);
}

/// Geodesic distance between two rotations, in radians.
inline double rotation_geodesic_error(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
  return Eigen::AngleAxisd(Eigen::Matrix3d(a.transpose() * b)).angle();
}

}  // namespace kdereg
