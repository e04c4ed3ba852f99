#pragma once

#include <string>
#include <variant>
#include <vector>

#include "ecosim/simulator.hpp"

namespace ecosim {

inline constexpr int kDefaultDepthLimit = 8;

struct Plan {
  std::vector<GroundedAction> actions;
  int length = 0;
  std::size_t expanded = 0;
};

struct NoPlan {
  enum class Reason { DepthExceeded, Exhausted, NodeLimit };
  Reason reason = Reason::Exhausted;
  std::size_t expanded = 0;
  std::string detail;
};

const char* to_string(NoPlan::Reason r);

using PlanResult = std::variant<Plan, NoPlan>;

/// Breadth-first search over derived affordances from the session's state,
/// pruning states already seen (by state hash). Goal noun phrases are resolved
/// once against the session's discourse context. Eco-actions are never
/// search operators.
PlanResult plan(const Session& s, const dsl::GoalSpec& goal, int depth_limit = kDefaultDepthLimit,
                std::size_t node_limit = 1'000'000);

/// True iff every step applies and the goal holds afterwards.
bool validate_plan(const Session& s, const Plan& p, const dsl::GoalSpec& goal);

}  // namespace ecosim
