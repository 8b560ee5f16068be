#include "toolforge/attachment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "toolforge/error.hpp"

namespace toolforge {

namespace {

// The four proper rotations that preserve the PCA axes as lines.
const std::array<Eigen::Vector3d, 4>& flip_signs() {
  static const std::array<Eigen::Vector3d, 4> signs = {
      Eigen::Vector3d(1, 1, 1), Eigen::Vector3d(1, -1, -1),
      Eigen::Vector3d(-1, 1, -1), Eigen::Vector3d(-1, -1, 1)};
  return signs;
}

double frame_extent_error(const PcaFrame& ref, const PcaFrame& part) {
  double err = 0.0;
  for (int i = 0; i < 3; ++i) {
    err += std::abs(std::sqrt(ref.eigenvalues[i]) -
                    std::sqrt(part.eigenvalues[i]));
  }
  return err / 3.0;
}

}  // namespace

std::vector<Alignment> align_parts(
    const std::vector<const CandidatePart*>& tuple, const ReferenceTool& ref,
    std::size_t max_alignments) {
  const std::size_t m = tuple.size();
  if (m == 0 || m != ref.m()) {
    throw Error(ErrorKind::invalid_argument,
                "tuple size must equal the reference component count");
  }

  std::vector<PcaFrame> part_frames(m), ref_frames(m);
  double mean_extent_error = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    part_frames[j] = pca_frame(tuple[j]->cloud);
    ref_frames[j] = pca_frame(ref.components[j].cloud);
    mean_extent_error += frame_extent_error(ref_frames[j], part_frames[j]);
  }
  mean_extent_error /= static_cast<double>(m);

  std::size_t total = 1;
  for (std::size_t j = 0; j < m; ++j) {
    if (total > max_alignments / 4) {
      total = max_alignments;
      break;
    }
    total *= 4;
  }
  total = std::min(total, max_alignments);

  std::vector<Alignment> alignments;
  alignments.reserve(total);
  for (std::size_t combo = 0; combo < total; ++combo) {
    Alignment alignment;
    alignment.flip_index = combo;
    alignment.alignment_error = mean_extent_error;
    alignment.part_transforms.resize(m);
    std::size_t rest = combo;
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t f = rest % 4;
      rest /= 4;
      const Eigen::Matrix3d flipped_axes =
          part_frames[j].axes * flip_signs()[f].asDiagonal();
      RigidTransform t;
      t.rotation = ref_frames[j].axes * flipped_axes.transpose();
      t.translation =
          ref_frames[j].center - t.rotation * part_frames[j].center;
      alignment.part_transforms[j] = t;
    }
    alignments.push_back(std::move(alignment));
  }
  // alignment_error is flip-invariant, so the order reduces to flip index;
  // kept explicit for when callers merge alignments across tuples.
  std::stable_sort(alignments.begin(), alignments.end(),
                   [](const Alignment& a, const Alignment& b) {
                     if (a.alignment_error != b.alignment_error) {
                       return a.alignment_error < b.alignment_error;
                     }
                     return a.flip_index < b.flip_index;
                   });
  return alignments;
}

std::vector<CandidateLocation> compute_intersections_detailed(
    const std::vector<Alignment>& alignments,
    const std::vector<const CandidatePart*>& tuple, std::size_t closest_k,
    double dedup_radius) {
  if (alignments.empty()) {
    throw Error(ErrorKind::invalid_argument,
                "compute_intersections needs at least one alignment");
  }

  std::vector<CandidateLocation> locations;
  for (std::size_t ai = 0; ai < alignments.size(); ++ai) {
    const Alignment& alignment = alignments[ai];
    for (std::size_t j = 0; j + 1 < tuple.size(); ++j) {
      const PointCloud a =
          transform_cloud(tuple[j]->cloud, alignment.part_transforms[j]);
      const PointCloud b = transform_cloud(tuple[j + 1]->cloud,
                                           alignment.part_transforms[j + 1]);
      const auto pairs = closest_pairs(a, b, closest_k);
      Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
      for (const auto& pm : pairs) centroid += pm.point_a + pm.point_b;
      centroid /= static_cast<double>(2 * pairs.size());

      bool duplicate = false;
      for (const auto& seen : locations) {
        if ((seen.location - centroid).norm() <= dedup_radius) {
          duplicate = true;
          break;
        }
      }
      if (!duplicate) locations.push_back({ai, centroid});
    }
  }
  return locations;
}

std::vector<Eigen::Vector3d> compute_intersections(
    const std::vector<Alignment>& alignments,
    const std::vector<const CandidatePart*>& tuple, std::size_t closest_k,
    double dedup_radius) {
  std::vector<Eigen::Vector3d> out;
  for (const auto& loc : compute_intersections_detailed(alignments, tuple,
                                                        closest_k, dedup_radius)) {
    out.push_back(loc.location);
  }
  return out;
}

AttachmentFitResult attachment_fit(
    const std::vector<const CandidatePart*>& tuple,
    const AttachmentLibrary* library, const ReferenceTool& ref,
    const AttachmentOptions& options) {
  for (const auto* part : tuple) {
    if (!part || part->cloud.empty()) {
      throw Error(ErrorKind::empty_cloud,
                  "attachment_fit: tuple part has no point cloud");
    }
  }

  AttachmentFitResult result;

  if (library != nullptr) {
    // A known-empty part rules the whole tuple out before any alignment work.
    for (const auto* part : tuple) {
      const auto* points = library->find(part->id);
      if (points != nullptr && points->empty()) {
        result.e_att = std::numeric_limits<double>::infinity();
        return result;
      }
    }
  }

  result.alignments = align_parts(tuple, ref, options.max_alignments);
  result.candidate_locations = compute_intersections_detailed(
      result.alignments, tuple, options.closest_k, options.dedup_radius);

  if (library == nullptr) {
    result.e_att = 0.0;  // exploration is guided by the candidate locations
    return result;
  }

  double accum = 0.0;
  double min_per_alignment = std::numeric_limits<double>::infinity();
  for (std::size_t ai = 0; ai < result.alignments.size(); ++ai) {
    const Alignment& alignment = result.alignments[ai];
    double alignment_sum = 0.0;
    for (std::size_t j = 0; j < tuple.size(); ++j) {
      const auto* points = library->find(tuple[j]->id);
      if (points == nullptr) continue;  // unknown for this part

      ChosenAttachment best;
      best.distance = std::numeric_limits<double>::infinity();
      for (const AttachmentPoint& ap : *points) {
        const Eigen::Vector3d aligned =
            alignment.part_transforms[j].apply(ap.location);
        double nearest = std::numeric_limits<double>::infinity();
        for (const auto& loc : result.candidate_locations) {
          nearest = std::min(nearest, (aligned - loc.location).norm());
        }
        if (nearest < best.distance) {
          best.alignment_index = ai;
          best.part_id = tuple[j]->id;
          best.local_location = ap.location;
          best.aligned_location = aligned;
          best.kind = ap.kind;
          best.polarity = ap.polarity;
          best.distance = nearest;
        }
      }
      if (std::isfinite(best.distance)) {
        alignment_sum += best.distance;
        result.chosen.push_back(best);
      }
    }
    accum += alignment_sum;
    min_per_alignment = std::min(min_per_alignment, alignment_sum);
  }

  switch (options.aggregate) {
    case AttAggregate::sum:
      result.e_att = accum;
      break;
    case AttAggregate::mean:
      result.e_att = accum / static_cast<double>(result.alignments.size());
      break;
    case AttAggregate::min:
      result.e_att = min_per_alignment;
      break;
  }
  return result;
}

}  // namespace toolforge
