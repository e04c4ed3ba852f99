#pragma once

#include "json.hpp"

#include "ecosim/world.hpp"

namespace ecosim {

using Json = nlohmann::json;

// Canonical encodings. Object keys are sorted by nlohmann::json, entity and
// relation order comes from the ordered containers in WorldState.
Json to_json(const Quantity& q);
Json to_json(const PropValue& v);
Json to_json(const Relation& r);
Json to_json(const EventRecord& e);
Json to_json(const Entity& e);
Json to_json(const WorldState& state);

}  // namespace ecosim
