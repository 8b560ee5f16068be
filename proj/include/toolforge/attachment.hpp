#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "toolforge/parts.hpp"

namespace toolforge {

/// One way of posing a part tuple in the reference tool frame: a rigid
/// transform per part. alignment_error is the mean absolute difference of
/// sorted PCA eigenvalue square roots between each part and its component, a
/// flip-invariant proxy for how well the extents match.
struct Alignment {
  std::vector<RigidTransform> part_transforms;
  double alignment_error = 0.0;
  std::size_t flip_index = 0;
};

/// Candidate attachment location with the alignment that produced it.
struct CandidateLocation {
  std::size_t alignment_index = 0;
  Eigen::Vector3d location = Eigen::Vector3d::Zero();
};

/// A library attachment point selected for one (alignment, part) pair, with
/// its pose under that alignment.
struct ChosenAttachment {
  std::size_t alignment_index = 0;
  std::string part_id;
  Eigen::Vector3d local_location = Eigen::Vector3d::Zero();
  Eigen::Vector3d aligned_location = Eigen::Vector3d::Zero();
  AttachmentKind kind = AttachmentKind::magnet;
  std::optional<Polarity> polarity;
  double distance = 0.0;  // to the nearest candidate location
};

/// How per-alignment attachment distances combine into e_att.
enum class AttAggregate { sum, mean, min };

struct AttachmentOptions {
  std::size_t closest_k = 20;      // pairs per intersection centroid
  double dedup_radius = 0.005;     // m, candidate location dedup
  std::size_t max_alignments = 256;
  AttAggregate aggregate = AttAggregate::sum;
};

struct AttachmentFitResult {
  double e_att = 0.0;  // +infinity when a part is known to have none
  std::vector<ChosenAttachment> chosen;          // known-attachment regime
  std::vector<CandidateLocation> candidate_locations;  // deduplicated P
  std::vector<Alignment> alignments;             // ordered as explored
};

/// Poses each part of the tuple onto its reference component by matching PCA
/// frames, enumerating the four proper 180-degree flips per part (up to
/// max_alignments total). Ordered by ascending alignment_error, then flip
/// index.
std::vector<Alignment> align_parts(
    const std::vector<const CandidatePart*>& tuple, const ReferenceTool& ref,
    std::size_t max_alignments = 256);

/// Candidate attachment locations: for every alignment and every adjacent
/// component pair, the centroid of the 2k endpoints of the k closest
/// cross-cloud pairs; concatenated over alignments and deduplicated at
/// dedup_radius (first occurrence kept).
std::vector<Eigen::Vector3d> compute_intersections(
    const std::vector<Alignment>& alignments,
    const std::vector<const CandidatePart*>& tuple, std::size_t closest_k = 20,
    double dedup_radius = 0.005);

/// As compute_intersections but keeping each location's alignment of origin.
std::vector<CandidateLocation> compute_intersections_detailed(
    const std::vector<Alignment>& alignments,
    const std::vector<const CandidatePart*>& tuple, std::size_t closest_k = 20,
    double dedup_radius = 0.005);

/// Attachment scoring for one part tuple. With no library the candidate
/// locations alone are returned and e_att stays 0; with a library, the
/// closest known attachment per (alignment, part) is accumulated into e_att.
/// Any part known to have no attachment points forces e_att to +infinity.
/// Parts the library does not mention contribute nothing.
AttachmentFitResult attachment_fit(
    const std::vector<const CandidatePart*>& tuple,
    const AttachmentLibrary* library, const ReferenceTool& ref,
    const AttachmentOptions& options = {});

}  // namespace toolforge
