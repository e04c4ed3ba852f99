#pragma once

#include <string>

#include "ecosim/planner.hpp"
#include "ecosim/serialize.hpp"
#include "ecosim/simulator.hpp"

namespace ecosim {

/// Human-readable command for a grounded action, using definite descriptions
/// ("Put the watermelon in the bag."). Not guaranteed to be unambiguous.
std::string action_label(const WorldState& state, const GroundedAction& act);

Json to_json(const GroundedAction& act);
Json to_json(const WorldState& state, const GroundedAction& act);  // adds "label"
Json to_json(const StepRecord& r);
Json to_json(const Trace& t);
Json to_json(const Answer& a);
Json to_json(const WorldState& s0, const PlanResult& p);

}  // namespace ecosim
