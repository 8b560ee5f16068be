#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace toolforge {

/// Unordered set of 3D points, meters, in the frame named by `frame_id`.
struct PointCloud {
  std::vector<Eigen::Vector3d> points;
  std::string frame_id = "scene";

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }

  Eigen::Vector3d centroid() const;

  /// True iff every coordinate is finite.
  bool all_finite() const;
};

/// Proper rigid motion: p' = rotation * p + translation.
struct RigidTransform {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static RigidTransform identity() { return {}; }

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const {
    return rotation * p + translation;
  }

  RigidTransform inverse() const {
    RigidTransform inv;
    inv.rotation = rotation.transpose();
    inv.translation = -(rotation.transpose() * translation);
    return inv;
  }

  /// Composition: (a * b).apply(p) == a.apply(b.apply(p)).
  RigidTransform operator*(const RigidTransform& rhs) const {
    RigidTransform out;
    out.rotation = rotation * rhs.rotation;
    out.translation = rotation * rhs.translation + translation;
    return out;
  }

  /// Orthonormal with determinant +1 within tol.
  bool is_rigid(double tol = 1e-9) const;
};

/// Centroid + orthonormal axes ordered by descending eigenvalue.
/// Axis signs are fixed by the farthest-from-centroid point and the third
/// axis is the cross product of the first two, so the frame is deterministic
/// and right-handed.
struct PcaFrame {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Matrix3d axes = Eigen::Matrix3d::Identity();  // columns, e1 e2 e3
  Eigen::Vector3d eigenvalues = Eigen::Vector3d::Zero();  // descending, m^2
};

/// One cross-cloud match from closest_pairs.
struct PairMatch {
  std::size_t index_a = 0;
  std::size_t index_b = 0;
  double distance = 0.0;
  Eigen::Vector3d point_a = Eigen::Vector3d::Zero();
  Eigen::Vector3d point_b = Eigen::Vector3d::Zero();
};

/// Reads an ASCII PLY with x,y,z vertex properties. Faces and extra
/// properties are ignored. Binary PLY is rejected.
PointCloud load_ply(const std::filesystem::path& path);

/// Writes an ASCII PLY with double x,y,z at full precision, so that
/// load_ply(save_ply(c)) == c bit-exactly. Empty clouds are an error.
void save_ply(const PointCloud& cloud, const std::filesystem::path& path);

PcaFrame pca_frame(const PointCloud& cloud);

PointCloud transform_cloud(const PointCloud& cloud, const RigidTransform& t);

/// The k cross-cloud pairs with smallest Euclidean distance, ascending, ties
/// broken by (index_a, index_b). k is clipped to |a|*|b|. Exact (not
/// approximate); parallel over blocks of `a` with a deterministic merge.
std::vector<PairMatch> closest_pairs(const PointCloud& a, const PointCloud& b,
                                     std::size_t k);

/// Single-threaded reference implementation of closest_pairs; kept for
/// testing and benchmarking against the parallel version.
std::vector<PairMatch> closest_pairs_serial(const PointCloud& a,
                                            const PointCloud& b,
                                            std::size_t k);

}  // namespace toolforge
