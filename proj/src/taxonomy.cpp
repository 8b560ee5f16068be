#include "toolforge/taxonomy.hpp"

#include "toolforge/error.hpp"

namespace toolforge {

const char* level_name(EquivalenceLevel level) {
  switch (level) {
    case EquivalenceLevel::object: return "object";
    case EquivalenceLevel::object_action: return "object-action";
    case EquivalenceLevel::object_action_effect: return "object-action-effect";
  }
  return "unknown";
}

const char* variant_name(SolutionVariant variant) {
  return variant == SolutionVariant::substitution ? "substitution"
                                                  : "construction";
}

bool is_goal_satisfied(const TaskGoal& goal, const std::string& effect) {
  return goal.satisfied_by.count(effect) > 0;
}

Classification classify_equivalence(const AffordanceSolution& reference,
                                    const AffordanceSolution& candidate,
                                    const TaskGoal& goal) {
  if (reference.object.empty() || reference.action.empty() ||
      reference.effect.empty() || candidate.object.empty() ||
      candidate.action.empty() || candidate.effect.empty()) {
    throw Error(ErrorKind::invalid_argument,
                "affordance solutions need non-empty labels");
  }
  if (!is_goal_satisfied(goal, candidate.effect)) {
    throw Error(ErrorKind::not_a_solution,
                "candidate effect '" + candidate.effect +
                    "' does not satisfy the goal");
  }
  const bool same_action = candidate.action == reference.action;
  const bool same_effect = candidate.effect == reference.effect;
  if (same_action && same_effect && candidate.object == reference.object &&
      candidate.provenance == Provenance::existing) {
    throw Error(ErrorKind::not_a_solution,
                "candidate is identical to the reference solution");
  }

  const int differing = (same_action ? 0 : 1) + (same_effect ? 0 : 1);
  Classification out;
  out.level = differing == 0   ? EquivalenceLevel::object
              : differing == 1 ? EquivalenceLevel::object_action
                               : EquivalenceLevel::object_action_effect;
  out.variant = candidate.provenance == Provenance::existing
                    ? SolutionVariant::substitution
                    : SolutionVariant::construction;
  return out;
}

}  // namespace toolforge
