#pragma once

#include <set>
#include <string>
#include <vector>

namespace toolforge {

/// Which elements of the reference solution the candidate replaces.
enum class EquivalenceLevel {
  object,                // same action, same effect, different object
  object_action,         // different action, same effect
  object_action_effect,  // different action and effect, same goal
};

enum class SolutionVariant { substitution, construction };

enum class Provenance { existing, constructed };

/// Affordance solution tuple (object, action, effect).
struct AffordanceSolution {
  std::string object;
  std::string action;
  std::string effect;
  Provenance provenance = Provenance::existing;
};

/// Persistent relationship between objects, satisfied by a set of effects.
struct TaskGoal {
  std::string predicate;
  std::vector<std::string> arguments;
  std::set<std::string> satisfied_by;
};

struct Classification {
  EquivalenceLevel level;
  SolutionVariant variant;
};

const char* level_name(EquivalenceLevel level);
const char* variant_name(SolutionVariant variant);

/// Exact label membership test (case sensitive).
bool is_goal_satisfied(const TaskGoal& goal, const std::string& effect);

/// Classifies a candidate against a reference solution: the level counts how
/// many of {action, effect} differ (0, 1 or 2) and the variant reflects the
/// candidate's provenance. A candidate whose effect does not satisfy the goal
/// is not a solution; a candidate identical to the reference in object,
/// action and effect is not an improvisation. Both are errors.
Classification classify_equivalence(const AffordanceSolution& reference,
                                    const AffordanceSolution& candidate,
                                    const TaskGoal& goal);

}  // namespace toolforge
