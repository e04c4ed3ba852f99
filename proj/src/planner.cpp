#include "ecosim/planner.hpp"

#include <algorithm>
#include <unordered_set>

namespace ecosim {

const char* to_string(NoPlan::Reason r) {
  switch (r) {
    case NoPlan::Reason::DepthExceeded: return "DepthExceeded";
    case NoPlan::Reason::Exhausted: return "Exhausted";
    case NoPlan::Reason::NodeLimit: return "NodeLimit";
  }
  return "?";
}

namespace {

struct Node {
  WorldState state;
  int parent;
  GroundedAction via;
  int depth;
};

Plan unwind(const std::vector<Node>& nodes, int leaf, std::size_t expanded) {
  Plan p;
  for (int i = leaf; nodes[i].parent >= 0; i = nodes[i].parent) p.actions.push_back(nodes[i].via);
  std::reverse(p.actions.begin(), p.actions.end());
  p.length = static_cast<int>(p.actions.size());
  p.expanded = expanded;
  return p;
}

}  // namespace

PlanResult plan(const Session& s, const dsl::GoalSpec& goal, int depth_limit,
                std::size_t node_limit) {
  const ResolvedCondition cond = resolve_condition(s, goal.condition);
  if (holds(s.em, s.state, cond)) return Plan{{}, 0, 0};

  std::vector<Node> nodes;
  nodes.push_back(Node{s.state, -1, {}, 0});
  std::unordered_set<std::uint64_t> seen{state_hash(s.state)};
  std::size_t expanded = 0;
  bool cut = false;
  for (std::size_t head = 0; head < nodes.size(); ++head) {
    if (nodes[head].depth >= depth_limit) {
      cut = true;
      continue;
    }
    if (expanded >= node_limit) {
      return NoPlan{NoPlan::Reason::NodeLimit, expanded,
                    "gave up after " + std::to_string(expanded) + " expansions"};
    }
    ++expanded;
    // Copy: `nodes` may reallocate while children are appended.
    const WorldState state = nodes[head].state;
    const int depth = nodes[head].depth;
    for (const auto& act : derive_affordances(s.em, state)) {
      ApplyOutcome out = apply(s.em, state, act);
      auto* next = std::get_if<WorldState>(&out);
      if (!next) continue;
      if (!seen.insert(state_hash(*next)).second) continue;
      nodes.push_back(Node{std::move(*next), static_cast<int>(head), act, depth + 1});
      if (holds(s.em, nodes.back().state, cond)) {
        return unwind(nodes, static_cast<int>(nodes.size()) - 1, expanded);
      }
    }
  }
  if (cut) {
    return NoPlan{NoPlan::Reason::DepthExceeded, expanded,
                  "no plan within " + std::to_string(depth_limit) + " steps"};
  }
  return NoPlan{NoPlan::Reason::Exhausted, expanded, "goal unreachable from this state"};
}

bool validate_plan(const Session& s, const Plan& p, const dsl::GoalSpec& goal) {
  if (p.length != static_cast<int>(p.actions.size())) return false;
  ResolvedCondition cond;
  try {
    cond = resolve_condition(s, goal.condition);
  } catch (const std::exception&) {
    return false;
  }
  WorldState state = s.state;
  for (const auto& act : p.actions) {
    ApplyOutcome out = apply(s.em, state, act);
    auto* next = std::get_if<WorldState>(&out);
    if (!next) return false;
    state = std::move(*next);
  }
  return holds(s.em, state, cond);
}

}  // namespace ecosim
