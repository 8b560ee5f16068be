#include "toolforge/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "toolforge/error.hpp"

namespace toolforge {

const char* outcome_name(AttemptOutcome o) {
  switch (o) {
    case AttemptOutcome::attach_failed: return "attach_failed";
    case AttemptOutcome::broke_in_validation: return "broke_in_validation";
    case AttemptOutcome::task_failed: return "task_failed";
    case AttemptOutcome::success: return "success";
  }
  return "unknown";
}

namespace {

Eigen::Vector3d sorted_full_extents(const SuperquadricParams& sq) {
  Eigen::Vector3d s = canonicalize(sq).scale;
  std::sort(s.data(), s.data() + 3, std::greater<double>());
  return 2.0 * s;
}

bool task_satisfied(const CandidateBuild& build,
                    const std::vector<CandidatePart>& parts,
                    const TaskSpec& task) {
  const auto& action_sq = parts[build.part_indices[task.action_slot]].sq;
  const auto& handle_sq = parts[build.part_indices[task.handle_slot]].sq;
  const Eigen::Vector3d action = sorted_full_extents(action_sq);
  const Eigen::Vector3d handle = sorted_full_extents(handle_sq);
  if (action[1] < task.min_action_width) return false;
  if (handle[0] < task.min_handle_length) return false;
  if (action[2] > task.max_action_thickness) return false;
  return true;
}

bool matches_breakage(const CandidateBuild& build, const BreakageRule& rule) {
  return build.part_ids == rule.parts;
}

/// Nearest true attachment of `part_id` to `target`; nullptr when none is
/// within `radius`.
const AttachmentPoint* resolve_attachment(const WorldModel& world,
                                          const std::string& part_id,
                                          const Eigen::Vector3d& target,
                                          const RigidTransform& to_tool_frame,
                                          double radius) {
  const auto* points = world.true_attachments.find(part_id);
  if (points == nullptr) return nullptr;
  const AttachmentPoint* best = nullptr;
  double best_d = radius;
  for (const auto& ap : *points) {
    const double d = (to_tool_frame.apply(ap.location) - target).norm();
    if (d <= best_d) {
      best_d = d;
      best = &ap;
    }
  }
  return best;
}

bool polarity_compatible(const AttachmentPoint& a, const AttachmentPoint& b) {
  if (a.kind != AttachmentKind::magnet || b.kind != AttachmentKind::magnet) {
    return true;
  }
  if (!a.polarity || !b.polarity) return true;
  return *a.polarity != *b.polarity;
}

}  // namespace

AttemptOutcome validate_tool(const CandidateBuild& build,
                             const std::vector<CandidatePart>& parts,
                             const WorldModel& world) {
  for (const auto& rule : world.breakage_rules) {
    if (matches_breakage(build, rule)) {
      return AttemptOutcome::broke_in_validation;
    }
  }
  return task_satisfied(build, parts, world.task) ? AttemptOutcome::success
                                                  : AttemptOutcome::task_failed;
}

AttemptLog simulate_known(const std::vector<CandidateBuild>& ranked,
                          const std::vector<CandidatePart>& parts,
                          const WorldModel& world) {
  if (ranked.empty()) {
    throw Error(ErrorKind::invalid_argument, "empty ranked build list");
  }

  AttemptLog log;
  for (std::size_t rank = 0; rank < ranked.size(); ++rank) {
    const CandidateBuild& build = ranked[rank];
    if (std::isinf(build.e_const)) continue;

    Attempt attempt;
    attempt.rank_index = rank;
    attempt.build_parts = build.part_ids;
    attempt.alignment_index = 0;

    // The chosen attachments under the best alignment, one per part.
    const std::size_t m = build.part_ids.size();
    std::vector<const ChosenAttachment*> chosen(m, nullptr);
    for (const auto& ca : build.attachments_chosen) {
      if (ca.alignment_index != 0) continue;
      for (std::size_t j = 0; j < m; ++j) {
        if (build.part_ids[j] == ca.part_id) chosen[j] = &ca;
      }
    }

    bool attached = true;
    std::vector<const AttachmentPoint*> world_points(m, nullptr);
    Eigen::Vector3d mean_location = Eigen::Vector3d::Zero();
    std::size_t located = 0;
    for (std::size_t j = 0; j < m && attached; ++j) {
      if (chosen[j] == nullptr) {
        attached = false;  // nothing known to attach with on this part
        break;
      }
      mean_location += chosen[j]->aligned_location;
      ++located;
      const auto& transform =
          build.alignments.empty()
              ? RigidTransform::identity()
              : build.alignments[0].part_transforms[j];
      world_points[j] =
          resolve_attachment(world, build.part_ids[j],
                             chosen[j]->aligned_location, transform,
                             world.attach_radius);
      if (world_points[j] == nullptr) attached = false;
    }
    if (located > 0) mean_location /= static_cast<double>(located);
    attempt.location = mean_location;

    if (attached) {
      for (std::size_t j = 0; j + 1 < m; ++j) {
        if (!polarity_compatible(*world_points[j], *world_points[j + 1])) {
          attached = false;
          break;
        }
      }
    }

    attempt.outcome = attached ? validate_tool(build, parts, world)
                               : AttemptOutcome::attach_failed;
    log.attempts.push_back(attempt);
    if (attempt.outcome == AttemptOutcome::success) {
      log.solution = build;
      log.solution_rank = rank;
      break;
    }
  }
  log.total_attempts = log.attempts.size();
  return log;
}

AttemptLog simulate_unknown(const std::vector<CandidateBuild>& ranked,
                            const std::vector<CandidatePart>& parts,
                            const WorldModel& world) {
  if (ranked.empty()) {
    throw Error(ErrorKind::invalid_argument, "empty ranked build list");
  }

  AttemptLog log;
  for (std::size_t rank = 0; rank < ranked.size() && !log.solution; ++rank) {
    const CandidateBuild& build = ranked[rank];
    if (std::isinf(build.e_const)) continue;
    const std::size_t m = build.part_ids.size();

    for (const CandidateLocation& loc : build.candidate_locations) {
      Attempt attempt;
      attempt.rank_index = rank;
      attempt.build_parts = build.part_ids;
      attempt.alignment_index = loc.alignment_index;
      attempt.location = loc.location;

      const Alignment& alignment = build.alignments[loc.alignment_index];
      bool attached = true;
      std::vector<const AttachmentPoint*> world_points(m, nullptr);
      for (std::size_t j = 0; j < m; ++j) {
        world_points[j] =
            resolve_attachment(world, build.part_ids[j], loc.location,
                               alignment.part_transforms[j],
                               world.attach_radius);
        if (world_points[j] == nullptr) {
          attached = false;
          break;
        }
      }
      if (attached) {
        for (std::size_t j = 0; j + 1 < m; ++j) {
          if (!polarity_compatible(*world_points[j], *world_points[j + 1])) {
            attached = false;
            break;
          }
        }
      }

      attempt.outcome = attached ? validate_tool(build, parts, world)
                                 : AttemptOutcome::attach_failed;
      log.attempts.push_back(attempt);
      if (attempt.outcome == AttemptOutcome::success) {
        log.solution = build;
        log.solution_rank = rank;
        break;
      }
    }
  }
  log.total_attempts = log.attempts.size();
  return log;
}

}  // namespace toolforge
