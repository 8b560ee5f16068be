#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "toolforge/attachment.hpp"
#include "toolforge/parts.hpp"

namespace toolforge {

/// Importance weights for the four error terms, bound positionally to
/// (scale, shape, ratio, attachment).
struct ScoreWeights {
  double scale = 1.0;
  double shape = 1.0;
  double ratio = 5.0;
  double att = 5.0;

  void validate() const;
};

/// One ordered part tuple with its error breakdown. Position j in `parts`
/// pairs the part with reference component j.
struct CandidateBuild {
  std::vector<std::size_t> part_indices;
  std::vector<std::string> part_ids;
  double e_shape = 0.0;
  double e_scale = 0.0;
  double e_ratio = 0.0;
  double e_att = 0.0;
  double e_const = 0.0;
  std::vector<ChosenAttachment> attachments_chosen;
  std::vector<CandidateLocation> candidate_locations;
  std::vector<Alignment> alignments;
};

struct RankOptions {
  AttachmentOptions attachment;
  bool parallel = true;
};

/// All ordered m-tuples of distinct indices from {0..n-1} in lexicographic
/// order; n!/(n-m)! tuples.
std::vector<std::vector<std::size_t>> permute_candidates(std::size_t n,
                                                         std::size_t m);

/// L1 distance of the canonicalized shape exponent pairs.
double shape_error(const SuperquadricParams& r, const SuperquadricParams& c);

/// L1 distance of the canonicalized scale triples, meters.
double scale_error(const SuperquadricParams& r, const SuperquadricParams& c);

/// L1 distance between the elementwise canonical-scale ratio vectors
/// rel(r_j, r_k) and rel(c_j, c_k).
double ratio_error(const SuperquadricParams& r_j, const SuperquadricParams& r_k,
                   const SuperquadricParams& c_j, const SuperquadricParams& c_k);

/// Weighted sum of the four error terms; any infinite term makes the result
/// infinite regardless of its weight.
double aggregate_error(double e_scale, double e_shape, double e_ratio,
                       double e_att, const ScoreWeights& w);

/// Ascending stable sort by e_const with infinities last; ties broken by
/// lexicographic part indices.
void sort_builds(std::vector<CandidateBuild>& builds);

/// Scores every ordered part tuple against the reference tool and returns
/// them sorted by aggregate error. A null library means attachments are
/// unknown and contribute nothing. Tuples are scored independently (in
/// parallel when enabled) and the final order is deterministic.
std::vector<CandidateBuild> rank_builds(const ReferenceTool& ref,
                                        const std::vector<CandidatePart>& parts,
                                        const ScoreWeights& weights,
                                        const AttachmentLibrary* library,
                                        const RankOptions& options = {});

}  // namespace toolforge
