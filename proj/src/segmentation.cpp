#include "toolforge/segmentation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "toolforge/error.hpp"
#include "toolforge/rng.hpp"

namespace toolforge {

std::pair<Plane, PointCloud> remove_dominant_plane(const PointCloud& scene,
                                                   double dist_thresh,
                                                   int iters,
                                                   std::uint64_t seed) {
  if (scene.size() < 3) {
    throw Error(ErrorKind::insufficient_data,
                "plane RANSAC needs at least 3 points");
  }
  if (dist_thresh <= 0.0) {
    throw Error(ErrorKind::invalid_argument, "dist_thresh must be > 0");
  }

  Rng rng(seed);
  const auto& pts = scene.points;
  const std::size_t n = pts.size();

  Plane best;
  std::size_t best_inliers = 0;
  for (int it = 0; it < iters; ++it) {
    const std::size_t i = rng.uniform_index(n);
    const std::size_t j = rng.uniform_index(n);
    const std::size_t k = rng.uniform_index(n);
    if (i == j || j == k || i == k) continue;
    const Eigen::Vector3d normal =
        (pts[j] - pts[i]).cross(pts[k] - pts[i]);
    const double len = normal.norm();
    if (len < 1e-12) continue;  // collinear sample

    Plane cand;
    cand.normal = normal / len;
    cand.offset = cand.normal.dot(pts[i]);
    std::size_t inliers = 0;
    for (const auto& p : pts) {
      if (cand.distance(p) <= dist_thresh) ++inliers;
    }
    if (inliers > best_inliers) {
      best_inliers = inliers;
      best = cand;
    }
  }

  if (best_inliers < (n * 3 + 9) / 10) {  // ceil(0.3 * n)
    throw Error(ErrorKind::no_plane_found,
                "no plane with >= 30% inliers at threshold " +
                    std::to_string(dist_thresh));
  }

  // Canonical orientation keeps output independent of the sampled triplet.
  if (best.normal.z() < 0.0 ||
      (best.normal.z() == 0.0 &&
       (best.normal.x() < 0.0 ||
        (best.normal.x() == 0.0 && best.normal.y() < 0.0)))) {
    best.normal = -best.normal;
    best.offset = -best.offset;
  }

  PointCloud off_plane;
  off_plane.frame_id = scene.frame_id;
  for (const auto& p : pts) {
    if (best.distance(p) > dist_thresh) off_plane.points.push_back(p);
  }
  return {best, off_plane};
}

std::vector<PointCloud> cluster_parts(const PointCloud& cloud,
                                      double cluster_tol,
                                      std::size_t min_size) {
  if (cluster_tol <= 0.0) {
    throw Error(ErrorKind::invalid_argument, "cluster_tol must be > 0");
  }
  const auto& pts = cloud.points;
  const std::size_t n = pts.size();
  if (n == 0) return {};

  // Union-find over a uniform grid with cell size = cluster_tol; linking is
  // exact (distance test), the grid only prunes candidate pairs.
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  auto unite = [&](std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };

  using Cell = std::array<long long, 3>;
  std::map<Cell, std::vector<std::size_t>> grid;
  auto cell_of = [&](const Eigen::Vector3d& p) {
    return Cell{static_cast<long long>(std::floor(p.x() / cluster_tol)),
                static_cast<long long>(std::floor(p.y() / cluster_tol)),
                static_cast<long long>(std::floor(p.z() / cluster_tol))};
  };
  for (std::size_t i = 0; i < n; ++i) grid[cell_of(pts[i])].push_back(i);

  const double tol2 = cluster_tol * cluster_tol;
  for (std::size_t i = 0; i < n; ++i) {
    const Cell c = cell_of(pts[i]);
    for (long long dx = -1; dx <= 1; ++dx) {
      for (long long dy = -1; dy <= 1; ++dy) {
        for (long long dz = -1; dz <= 1; ++dz) {
          const auto it = grid.find(Cell{c[0] + dx, c[1] + dy, c[2] + dz});
          if (it == grid.end()) continue;
          for (const std::size_t j : it->second) {
            if (j <= i) continue;
            if ((pts[i] - pts[j]).squaredNorm() < tol2) unite(i, j);
          }
        }
      }
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);

  std::vector<PointCloud> clusters;
  for (const auto& [root, members] : groups) {
    if (members.size() < min_size) continue;
    PointCloud part;
    part.frame_id = cloud.frame_id;
    part.points.reserve(members.size());
    for (const std::size_t i : members) part.points.push_back(pts[i]);
    clusters.push_back(std::move(part));
  }

  std::sort(clusters.begin(), clusters.end(),
            [](const PointCloud& a, const PointCloud& b) {
              if (a.size() != b.size()) return a.size() > b.size();
              const Eigen::Vector3d ca = a.centroid();
              const Eigen::Vector3d cb = b.centroid();
              return std::lexicographical_compare(ca.data(), ca.data() + 3,
                                                  cb.data(), cb.data() + 3);
            });
  return clusters;
}

std::vector<PointCloud> load_reference_components(
    const std::vector<std::filesystem::path>& paths, double real_world_scale) {
  if (paths.empty()) {
    throw Error(ErrorKind::invalid_argument, "no reference component paths");
  }
  if (!(real_world_scale > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "real_world_scale must be > 0");
  }
  std::vector<PointCloud> components;
  components.reserve(paths.size());
  for (const auto& path : paths) {
    PointCloud cloud = load_ply(path);
    if (real_world_scale != 1.0) {
      const Eigen::Vector3d c = cloud.centroid();
      for (auto& p : cloud.points) p = c + real_world_scale * (p - c);
    }
    components.push_back(std::move(cloud));
  }
  return components;
}

SegmentedScene segment_scene(const PointCloud& scene,
                             const SegmentationConfig& config) {
  SegmentedScene out;
  PointCloud off_plane;
  try {
    std::tie(out.plane, off_plane) = remove_dominant_plane(
        scene, config.plane_distance, config.ransac_iterations, config.seed);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::no_plane_found) throw;
    off_plane = scene;  // tabletop absent; cluster the raw cloud
  }
  out.parts = cluster_parts(off_plane, config.cluster_tolerance,
                            config.min_cluster_size);
  std::size_t clustered = 0;
  for (const auto& part : out.parts) clustered += part.size();
  out.residual_points = off_plane.size() - clustered;
  return out;
}

}  // namespace toolforge
