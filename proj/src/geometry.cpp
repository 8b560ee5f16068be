#include "toolforge/geometry.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "toolforge/error.hpp"
#include "toolforge/parallel.hpp"

namespace toolforge {

Eigen::Vector3d PointCloud::centroid() const {
  if (points.empty()) {
    throw Error(ErrorKind::empty_cloud, "centroid of empty cloud");
  }
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  for (const auto& p : points) sum += p;
  return sum / static_cast<double>(points.size());
}

bool PointCloud::all_finite() const {
  for (const auto& p : points) {
    if (!p.allFinite()) return false;
  }
  return true;
}

bool RigidTransform::is_rigid(double tol) const {
  const Eigen::Matrix3d gram = rotation.transpose() * rotation;
  if ((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > tol) {
    return false;
  }
  return std::abs(rotation.determinant() - 1.0) <= tol;
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream iss(line);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] void ply_error(const std::filesystem::path& path, int line_no,
                            const std::string& what) {
  throw Error(ErrorKind::parse, path.string() + ":" + std::to_string(line_no) +
                                    ": " + what);
}

}  // namespace

PointCloud load_ply(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::io, "cannot open " + path.string());
  }

  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++line_no;
    return true;
  };

  if (!next_line() || line != "ply") ply_error(path, line_no, "missing 'ply' magic");

  long long vertex_count = -1;
  // Per-vertex property names in declaration order; x,y,z located among them.
  std::vector<std::string> vertex_props;
  std::string current_element;
  bool format_seen = false;
  bool header_done = false;

  while (next_line()) {
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok[0] == "comment") continue;
    if (tok[0] == "format") {
      if (tok.size() < 2 || tok[1] != "ascii") {
        ply_error(path, line_no, "only ASCII PLY is supported");
      }
      format_seen = true;
    } else if (tok[0] == "element") {
      if (tok.size() != 3) ply_error(path, line_no, "malformed element line");
      current_element = tok[1];
      if (tok[1] == "vertex") {
        vertex_count = std::strtoll(tok[2].c_str(), nullptr, 10);
      }
    } else if (tok[0] == "property") {
      if (current_element == "vertex") {
        if (tok.size() < 3) ply_error(path, line_no, "malformed property line");
        if (tok[1] == "list") ply_error(path, line_no, "list property on vertex element");
        vertex_props.push_back(tok.back());
      }
    } else if (tok[0] == "end_header") {
      header_done = true;
      break;
    } else {
      ply_error(path, line_no, "unknown header keyword '" + tok[0] + "'");
    }
  }

  if (!header_done) ply_error(path, line_no, "missing end_header");
  if (!format_seen) ply_error(path, line_no, "missing format line");
  if (vertex_count < 0) ply_error(path, line_no, "missing vertex element");
  if (vertex_count == 0) {
    throw Error(ErrorKind::empty_cloud, path.string() + ": zero vertices");
  }

  int ix = -1, iy = -1, iz = -1;
  for (std::size_t i = 0; i < vertex_props.size(); ++i) {
    if (vertex_props[i] == "x") ix = static_cast<int>(i);
    if (vertex_props[i] == "y") iy = static_cast<int>(i);
    if (vertex_props[i] == "z") iz = static_cast<int>(i);
  }
  if (ix < 0 || iy < 0 || iz < 0) {
    ply_error(path, line_no, "vertex element lacks x,y,z properties");
  }

  PointCloud cloud;
  cloud.points.reserve(static_cast<std::size_t>(vertex_count));
  for (long long v = 0; v < vertex_count; ++v) {
    if (!next_line()) ply_error(path, line_no, "unexpected end of file in vertex data");
    const auto tok = split_ws(line);
    if (tok.size() < vertex_props.size()) {
      ply_error(path, line_no, "vertex line has too few values");
    }
    Eigen::Vector3d p;
    const int col[3] = {ix, iy, iz};
    for (int slot = 0; slot < 3; ++slot) {
      const std::string& field = tok[static_cast<std::size_t>(col[slot])];
      char* end = nullptr;
      p[slot] = std::strtod(field.c_str(), &end);
      if (end == field.c_str()) {
        ply_error(path, line_no, "unparsable coordinate");
      }
    }
    if (!p.allFinite()) ply_error(path, line_no, "non-finite coordinate");
    cloud.points.push_back(p);
  }
  cloud.frame_id = path.stem().string();
  return cloud;
}

void save_ply(const PointCloud& cloud, const std::filesystem::path& path) {
  if (cloud.empty()) {
    throw Error(ErrorKind::empty_cloud,
                "refusing to write empty cloud to " + path.string());
  }
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f) {
    throw Error(ErrorKind::io, "cannot write " + path.string());
  }
  std::fprintf(f,
               "ply\nformat ascii 1.0\nelement vertex %zu\n"
               "property double x\nproperty double y\nproperty double z\n"
               "end_header\n",
               cloud.size());
  for (const auto& p : cloud.points) {
    std::fprintf(f, "%.17g %.17g %.17g\n", p.x(), p.y(), p.z());
  }
  if (std::fclose(f) != 0) {
    throw Error(ErrorKind::io, "write failed for " + path.string());
  }
}

PcaFrame pca_frame(const PointCloud& cloud) {
  if (cloud.size() < 4) {
    throw Error(ErrorKind::degenerate_geometry,
                "pca_frame needs at least 4 points, got " +
                    std::to_string(cloud.size()));
  }
  const Eigen::Vector3d c = cloud.centroid();
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& p : cloud.points) {
    const Eigen::Vector3d d = p - c;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(cloud.size());

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::degenerate_geometry, "eigen decomposition failed");
  }
  // Eigen returns ascending eigenvalues; we want descending.
  Eigen::Vector3d evals;
  Eigen::Matrix3d axes;
  for (int i = 0; i < 3; ++i) {
    evals[i] = solver.eigenvalues()[2 - i];
    axes.col(i) = solver.eigenvectors().col(2 - i);
  }

  if (evals[0] <= 0.0 || evals[1] <= 1e-12 * evals[0]) {
    throw Error(ErrorKind::degenerate_geometry,
                "points are collinear or coincident");
  }

  // Deterministic signs: each of the first two axes points toward the
  // farthest point from the centroid; the third completes a right-handed
  // basis.
  std::size_t far_idx = 0;
  double far_d2 = -1.0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double d2 = (cloud.points[i] - c).squaredNorm();
    if (d2 > far_d2) {
      far_d2 = d2;
      far_idx = i;
    }
  }
  const Eigen::Vector3d far_dir = cloud.points[far_idx] - c;
  for (int i = 0; i < 2; ++i) {
    if (axes.col(i).dot(far_dir) < 0.0) axes.col(i) = -axes.col(i);
  }
  axes.col(2) = axes.col(0).cross(axes.col(1));

  PcaFrame frame;
  frame.center = c;
  frame.axes = axes;
  frame.eigenvalues = evals;
  return frame;
}

PointCloud transform_cloud(const PointCloud& cloud, const RigidTransform& t) {
  PointCloud out;
  out.frame_id = cloud.frame_id + "'";
  out.points.resize(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    out.points[i] = t.apply(cloud.points[i]);
  }
  return out;
}

namespace {

struct PairCand {
  double d2;
  std::size_t ia;
  std::size_t ib;

  // "worse" ordering: larger distance first, then larger indices.
  bool operator<(const PairCand& o) const {
    if (d2 != o.d2) return d2 < o.d2;
    if (ia != o.ia) return ia < o.ia;
    return ib < o.ib;
  }
};

// Keeps the k best candidates seen so far as a max-heap on PairCand order.
class BestK {
 public:
  explicit BestK(std::size_t k) : k_(k) {}

  void offer(const PairCand& c) {
    if (heap_.size() < k_) {
      heap_.push_back(c);
      std::push_heap(heap_.begin(), heap_.end());
    } else if (c < heap_.front()) {
      std::pop_heap(heap_.begin(), heap_.end());
      heap_.back() = c;
      std::push_heap(heap_.begin(), heap_.end());
    }
  }

  /// Upper bound for pruning; only valid when full.
  bool full() const { return heap_.size() == k_; }
  double worst_d2() const { return heap_.front().d2; }

  std::vector<PairCand> sorted() && {
    std::sort(heap_.begin(), heap_.end());
    return std::move(heap_);
  }

  const std::vector<PairCand>& raw() const { return heap_; }

 private:
  std::size_t k_;
  std::vector<PairCand> heap_;
};

std::vector<PairMatch> finalize_pairs(std::vector<PairCand> cands,
                                      const PointCloud& a,
                                      const PointCloud& b) {
  std::vector<PairMatch> out;
  out.reserve(cands.size());
  for (const auto& c : cands) {
    PairMatch m;
    m.index_a = c.ia;
    m.index_b = c.ib;
    m.distance = std::sqrt(c.d2);
    m.point_a = a.points[c.ia];
    m.point_b = b.points[c.ib];
    out.push_back(m);
  }
  return out;
}

void check_pair_inputs(const PointCloud& a, const PointCloud& b,
                       std::size_t k) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorKind::empty_cloud, "closest_pairs on empty cloud");
  }
  if (k == 0) {
    throw Error(ErrorKind::invalid_argument, "closest_pairs needs k >= 1");
  }
}

}  // namespace

std::vector<PairMatch> closest_pairs_serial(const PointCloud& a,
                                            const PointCloud& b,
                                            std::size_t k) {
  check_pair_inputs(a, b, k);
  const std::size_t kk = std::min(k, a.size() * b.size());
  BestK best(kk);
  for (std::size_t ia = 0; ia < a.size(); ++ia) {
    for (std::size_t ib = 0; ib < b.size(); ++ib) {
      best.offer({(a.points[ia] - b.points[ib]).squaredNorm(), ia, ib});
    }
  }
  return finalize_pairs(std::move(best).sorted(), a, b);
}

std::vector<PairMatch> closest_pairs(const PointCloud& a, const PointCloud& b,
                                     std::size_t k) {
  check_pair_inputs(a, b, k);
  const std::size_t kk = std::min(k, a.size() * b.size());

  // Fixed block grid over rows of `a`; per-block top-k heaps merged in block
  // order, so the result does not depend on the thread count.
  const std::size_t block = 128;
  const std::size_t nblocks = (a.size() + block - 1) / block;
  std::vector<std::vector<PairCand>> partial(nblocks);

  parallel_for(nblocks, [&](std::size_t bi) {
    const std::size_t lo = bi * block;
    const std::size_t hi = std::min(lo + block, a.size());
    BestK best(kk);
    for (std::size_t ia = lo; ia < hi; ++ia) {
      const Eigen::Vector3d& pa = a.points[ia];
      for (std::size_t ib = 0; ib < b.size(); ++ib) {
        best.offer({(pa - b.points[ib]).squaredNorm(), ia, ib});
      }
    }
    partial[bi] = std::move(best).sorted();
  });

  std::vector<PairCand> merged;
  for (auto& p : partial) {
    merged.insert(merged.end(), p.begin(), p.end());
  }
  std::sort(merged.begin(), merged.end());
  if (merged.size() > kk) merged.resize(kk);
  return finalize_pairs(std::move(merged), a, b);
}

}  // namespace toolforge
