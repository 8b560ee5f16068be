#include "toolforge/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>

#include "toolforge/error.hpp"
#include "toolforge/parallel.hpp"

namespace toolforge {

void ScoreWeights::validate() const {
  const double vals[4] = {scale, shape, ratio, att};
  double total = 0.0;
  for (double v : vals) {
    if (v < 0.0 || !std::isfinite(v)) {
      throw Error(ErrorKind::invalid_argument,
                  "weights must be finite and non-negative");
    }
    total += v;
  }
  if (total == 0.0) {
    throw Error(ErrorKind::invalid_argument, "weights must not all be zero");
  }
}

std::vector<std::vector<std::size_t>> permute_candidates(std::size_t n,
                                                         std::size_t m) {
  if (m < 2) {
    throw Error(ErrorKind::invalid_argument,
                "tuples need at least 2 components");
  }
  if (n < m) {
    throw Error(ErrorKind::insufficient_parts,
                "need at least " + std::to_string(m) + " parts, have " +
                    std::to_string(n));
  }

  std::vector<std::vector<std::size_t>> tuples;
  std::vector<std::size_t> current;
  std::vector<bool> used(n, false);
  // Depth-first in index order yields lexicographic tuple order.
  auto recurse = [&](auto&& self) -> void {
    if (current.size() == m) {
      tuples.push_back(current);
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      used[i] = true;
      current.push_back(i);
      self(self);
      current.pop_back();
      used[i] = false;
    }
  };
  recurse(recurse);
  return tuples;
}

double shape_error(const SuperquadricParams& r, const SuperquadricParams& c) {
  const Eigen::Vector2d rs = canonicalize(r).shape;
  const Eigen::Vector2d cs = canonicalize(c).shape;
  return (rs - cs).lpNorm<1>();
}

double scale_error(const SuperquadricParams& r, const SuperquadricParams& c) {
  const Eigen::Vector3d rs = canonicalize(r).scale;
  const Eigen::Vector3d cs = canonicalize(c).scale;
  return (rs - cs).lpNorm<1>();
}

namespace {

Eigen::Vector3d rel_scale(const SuperquadricParams& a,
                          const SuperquadricParams& b) {
  return canonicalize(a).scale.cwiseQuotient(canonicalize(b).scale);
}

}  // namespace

double ratio_error(const SuperquadricParams& r_j, const SuperquadricParams& r_k,
                   const SuperquadricParams& c_j,
                   const SuperquadricParams& c_k) {
  return (rel_scale(r_j, r_k) - rel_scale(c_j, c_k)).lpNorm<1>();
}

double aggregate_error(double e_scale, double e_shape, double e_ratio,
                       double e_att, const ScoreWeights& w) {
  if (std::isinf(e_scale) || std::isinf(e_shape) || std::isinf(e_ratio) ||
      std::isinf(e_att)) {
    return std::numeric_limits<double>::infinity();
  }
  return w.scale * e_scale + w.shape * e_shape + w.ratio * e_ratio +
         w.att * e_att;
}

void sort_builds(std::vector<CandidateBuild>& builds) {
  std::stable_sort(builds.begin(), builds.end(),
                   [](const CandidateBuild& a, const CandidateBuild& b) {
                     const bool a_inf = std::isinf(a.e_const);
                     const bool b_inf = std::isinf(b.e_const);
                     if (a_inf != b_inf) return b_inf;
                     if (!a_inf && a.e_const != b.e_const) {
                       return a.e_const < b.e_const;
                     }
                     return a.part_indices < b.part_indices;
                   });
}

std::vector<CandidateBuild> rank_builds(const ReferenceTool& ref,
                                        const std::vector<CandidatePart>& parts,
                                        const ScoreWeights& weights,
                                        const AttachmentLibrary* library,
                                        const RankOptions& options) {
  weights.validate();
  const std::size_t m = ref.m();
  if (m < 2) {
    throw Error(ErrorKind::invalid_argument,
                "reference tool needs at least 2 components");
  }
  const auto tuples = permute_candidates(parts.size(), m);

  std::vector<CandidateBuild> builds(tuples.size());
  auto score_tuple = [&](std::size_t ti) {
    const auto& tuple = tuples[ti];
    CandidateBuild build;
    build.part_indices = tuple;
    std::vector<const CandidatePart*> tuple_parts(m);
    for (std::size_t j = 0; j < m; ++j) {
      tuple_parts[j] = &parts[tuple[j]];
      build.part_ids.push_back(parts[tuple[j]].id);
    }

    for (std::size_t j = 0; j < m; ++j) {
      build.e_shape += shape_error(ref.components[j].sq, tuple_parts[j]->sq);
      build.e_scale += scale_error(ref.components[j].sq, tuple_parts[j]->sq);
      for (std::size_t k = 0; k < m; ++k) {
        if (k == j) continue;
        build.e_ratio += ratio_error(ref.components[j].sq, ref.components[k].sq,
                                     tuple_parts[j]->sq, tuple_parts[k]->sq);
      }
    }

    AttachmentFitResult att =
        attachment_fit(tuple_parts, library, ref, options.attachment);
    build.e_att = att.e_att;
    build.attachments_chosen = std::move(att.chosen);
    build.candidate_locations = std::move(att.candidate_locations);
    build.alignments = std::move(att.alignments);

    build.e_const = aggregate_error(build.e_scale, build.e_shape,
                                    build.e_ratio, build.e_att, weights);
    builds[ti] = std::move(build);
  };

  if (options.parallel) {
    // Exceptions may not cross an OpenMP region; transport the first one.
    std::exception_ptr error;
    std::mutex error_mutex;
    parallel_for(tuples.size(), [&](std::size_t ti) {
      try {
        score_tuple(ti);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
    if (error) std::rethrow_exception(error);
  } else {
    for (std::size_t ti = 0; ti < tuples.size(); ++ti) score_tuple(ti);
  }

  sort_builds(builds);
  return builds;
}

}  // namespace toolforge
