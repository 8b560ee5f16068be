#pragma once

#include <optional>
#include <string>
#include <vector>

#include "toolforge/scoring.hpp"

namespace toolforge {

enum class AttemptOutcome { attach_failed, broke_in_validation, task_failed, success };

/// Builds whose ordered part ids match the pattern break when the tool's
/// action is applied.
struct BreakageRule {
  std::vector<std::string> parts;
};

enum class TaskKind { hit, scoop, flip };

/// Geometric proxy for task success, evaluated on the canonicalized fitted
/// models of the built tool. Extents are sorted per part, so length means
/// the largest full extent, width the second, thickness the smallest.
struct TaskSpec {
  TaskKind kind = TaskKind::hit;
  std::size_t action_slot = 0;
  std::size_t handle_slot = 1;
  double min_action_width = 0.02;
  double min_handle_length = 0.10;
  double max_action_thickness = std::numeric_limits<double>::infinity();
};

/// Ground truth used to adjudicate attempts. Deterministic: the same model
/// and ranked list always produce the same log.
struct WorldModel {
  AttachmentLibrary true_attachments;  // with polarity
  std::vector<BreakageRule> breakage_rules;
  TaskSpec task;
  double attach_radius = 0.02;  // m
};

struct Attempt {
  std::size_t rank_index = 0;  // position in the ranked list
  std::vector<std::string> build_parts;
  std::size_t alignment_index = 0;
  Eigen::Vector3d location = Eigen::Vector3d::Zero();
  AttemptOutcome outcome = AttemptOutcome::attach_failed;
};

struct AttemptLog {
  std::vector<Attempt> attempts;
  std::size_t total_attempts = 0;
  std::optional<CandidateBuild> solution;
  std::optional<std::size_t> solution_rank;  // 0-based index into the ranking
};

const char* outcome_name(AttemptOutcome o);

/// Breakage rules first, then the task proxy.
AttemptOutcome validate_tool(const CandidateBuild& build,
                             const std::vector<CandidatePart>& parts,
                             const WorldModel& world);

/// Known-attachment loop: walk the ranking, skip impossible builds, attempt
/// the chosen attachment of each build once (best alignment), stop at the
/// first success.
AttemptLog simulate_known(const std::vector<CandidateBuild>& ranked,
                          const std::vector<CandidatePart>& parts,
                          const WorldModel& world);

/// Unknown-attachment loop: walk the ranking and, within each build, try
/// every candidate location in deterministic order (alignments by ascending
/// error, locations in deduplicated order). A trial attaches when every part
/// has a true attachment point within attach_radius of the location.
AttemptLog simulate_unknown(const std::vector<CandidateBuild>& ranked,
                            const std::vector<CandidatePart>& parts,
                            const WorldModel& world);

}  // namespace toolforge
