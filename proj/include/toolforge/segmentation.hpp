#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "toolforge/geometry.hpp"

namespace toolforge {

/// Plane n.p = offset with unit normal.
struct Plane {
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
  double offset = 0.0;

  double distance(const Eigen::Vector3d& p) const {
    return std::abs(normal.dot(p) - offset);
  }
};

struct SegmentationConfig {
  double plane_distance = 0.005;   // RANSAC inlier threshold, m
  int ransac_iterations = 400;
  double cluster_tolerance = 0.02;  // single-linkage radius, m
  std::size_t min_cluster_size = 50;
  std::uint64_t seed = 0;
};

/// Parts detected in a scene cloud.
struct SegmentedScene {
  std::vector<PointCloud> parts;
  Plane plane;
  std::size_t residual_points = 0;  // off-plane points not in any kept cluster
};

/// RANSAC dominant plane: largest inlier set at dist_thresh, deterministic
/// for a fixed seed. Returns the plane and the off-plane points. Fails with
/// no_plane_found when no candidate reaches 30% inliers.
std::pair<Plane, PointCloud> remove_dominant_plane(const PointCloud& scene,
                                                   double dist_thresh,
                                                   int iters,
                                                   std::uint64_t seed);

/// Connected components under dist < cluster_tol (single-linkage Euclidean
/// clustering); clusters below min_size are dropped. Output ordered by
/// descending size, then lexicographic centroid.
std::vector<PointCloud> cluster_parts(const PointCloud& cloud,
                                      double cluster_tol,
                                      std::size_t min_size);

/// Loads pre-segmented reference component clouds and scales each uniformly
/// about its own centroid. Path order defines the component order.
std::vector<PointCloud> load_reference_components(
    const std::vector<std::filesystem::path>& paths, double real_world_scale);

/// Plane subtraction followed by clustering.
SegmentedScene segment_scene(const PointCloud& scene,
                             const SegmentationConfig& config);

}  // namespace toolforge
