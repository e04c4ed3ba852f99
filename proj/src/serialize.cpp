#include "ecosim/serialize.hpp"

namespace ecosim {

Json to_json(const Quantity& q) {
  switch (q.dimension) {
    case Dimension::Mass: return Json{{"g", q.magnitude}};
    case Dimension::Count: return Json{{"count", q.magnitude}};
    case Dimension::Dimensionless: return Json{{"value", q.magnitude}};
  }
  return {};
}

Json to_json(const PropValue& v) {
  if (const auto* q = std::get_if<Quantity>(&v)) return to_json(*q);
  return std::get<bool>(v);
}

Json to_json(const Relation& r) {
  Json j{{"rel", to_string(r.kind)}, {"subject", r.subject}, {"object", r.object}};
  if (r.kind == RelationKind::WornBy) {
    j["slot"] = r.slot;
    j["layer"] = r.layer;
  }
  return j;
}

Json to_json(const EventRecord& e) {
  return Json{{"event", e.name}, {"subject", e.subject}};
}

Json to_json(const Entity& e) {
  Json props = Json::object();
  for (const auto& [k, v] : e.props) props[k] = to_json(v);
  return Json{{"id", e.id}, {"kind", e.kind}, {"labels", e.labels}, {"props", props}};
}

Json to_json(const WorldState& state) {
  Json entities = Json::array();
  for (const auto& [id, e] : state.entities) entities.push_back(to_json(e));
  Json relations = Json::array();
  for (const auto& r : state.relations) relations.push_back(to_json(r));
  Json events = Json::array();
  for (const auto& e : state.events) events.push_back(to_json(e));
  Json defaults = Json::object();
  for (const auto& [kind, props] : state.kind_defaults) {
    Json p = Json::object();
    for (const auto& [k, v] : props) p[k] = to_json(v);
    defaults[kind] = p;
  }
  return Json{{"entities", entities},
              {"relations", relations},
              {"events", events},
              {"kind_defaults", defaults}};
}

}  // namespace ecosim
