#include "ecosim/world.hpp"

#include <algorithm>

#include "json.hpp"

#include "ecosim/error.hpp"
#include "ecosim/serialize.hpp"

namespace ecosim {

const char* to_string(PropertyType t) {
  switch (t) {
    case PropertyType::Mass: return "mass";
    case PropertyType::Count: return "count";
    case PropertyType::Flag: return "flag";
  }
  return "?";
}

const char* to_string(RelationKind k) {
  switch (k) {
    case RelationKind::In: return "in";
    case RelationKind::WornBy: return "worn-by";
    case RelationKind::At: return "at";
  }
  return "?";
}

Taxonomy::Taxonomy() {
  kinds_.emplace(kRootKind, KindInfo{kRootKind, std::nullopt, {}});
  properties_.emplace(kHeldFlag, PropertySchema{kHeldFlag, PropertyType::Flag, kRootKind});
}

const KindInfo& Taxonomy::kind(const std::string& name) const {
  auto it = kinds_.find(name);
  if (it == kinds_.end()) throw Error(ErrorCode::UnknownKind, "unknown kind '" + name + "'");
  return it->second;
}

void Taxonomy::add_kind(const std::string& name, const std::string& parent) {
  if (kinds_.count(name)) throw Error(ErrorCode::DuplicateKind, "kind '" + name + "' already exists");
  if (!kinds_.count(parent)) throw Error(ErrorCode::UnknownKind, "unknown kind '" + parent + "'");
  // A fresh name cannot be anyone's ancestor, so the hierarchy stays acyclic.
  kinds_.emplace(name, KindInfo{name, parent, {}});
}

int Taxonomy::depth(const std::string& name) const {
  return static_cast<int>(ancestry(name).size()) - 1;
}

bool Taxonomy::is_a(const std::string& kind, const std::string& ancestor) const {
  auto it = kinds_.find(kind);
  while (it != kinds_.end()) {
    if (it->first == ancestor) return true;
    if (!it->second.parent) return false;
    it = kinds_.find(*it->second.parent);
  }
  return false;
}

std::vector<std::string> Taxonomy::ancestry(const std::string& kind) const {
  std::vector<std::string> out;
  const KindInfo* k = &this->kind(kind);
  for (;;) {
    out.push_back(k->name);
    if (!k->parent) break;
    k = &this->kind(*k->parent);
  }
  return out;
}

void Taxonomy::declare_property(const std::string& name, PropertyType type,
                                const std::string& owner) {
  kind(owner);
  auto it = properties_.find(name);
  if (it != properties_.end()) {
    if (it->second.type != type) {
      throw Error(ErrorCode::DimensionMismatch,
                  "property '" + name + "' already declared as " + to_string(it->second.type));
    }
    return;
  }
  properties_.emplace(name, PropertySchema{name, type, owner});
}

const PropertySchema* Taxonomy::property(const std::string& name) const {
  auto it = properties_.find(name);
  return it == properties_.end() ? nullptr : &it->second;
}

namespace {

void check_value(const Taxonomy& tax, const std::string& property, const PropValue& value) {
  const PropertySchema* schema = tax.property(property);
  if (!schema) throw Error(ErrorCode::UnknownProperty, "unknown property '" + property + "'");
  bool ok = false;
  if (const auto* q = std::get_if<Quantity>(&value)) {
    ok = (schema->type == PropertyType::Mass && q->dimension == Dimension::Mass) ||
         (schema->type == PropertyType::Count && q->dimension == Dimension::Count);
  } else {
    ok = schema->type == PropertyType::Flag;
  }
  if (!ok) {
    throw Error(ErrorCode::DimensionMismatch,
                "value does not fit " + std::string(to_string(schema->type)) + " property '" +
                    property + "'");
  }
}

}  // namespace

void Taxonomy::set_default(const std::string& kind, const std::string& property, PropValue value) {
  this->kind(kind);
  check_value(*this, property, value);
  kinds_.at(kind).defaults[property] = std::move(value);
}

WorldState new_world() { return {}; }

EntityId next_entity_id(const WorldState& state) {
  return state.entities.empty() ? 1 : state.entities.rbegin()->first + 1;
}

bool has_entity(const WorldState& state, EntityId id) { return state.entities.count(id) != 0; }

const Entity& entity(const WorldState& state, EntityId id) {
  auto it = state.entities.find(id);
  if (it == state.entities.end()) {
    throw Error(ErrorCode::UnknownEntity, "unknown entity #" + std::to_string(id));
  }
  return it->second;
}

std::pair<WorldState, EntityId> add_entity(const Taxonomy& tax, const WorldState& state,
                                           const std::string& kind, const PropMap& props,
                                           const std::vector<std::string>& labels) {
  tax.kind(kind);
  for (const auto& [name, value] : props) check_value(tax, name, value);
  WorldState next = state;
  EntityId id = next_entity_id(state);
  next.entities.emplace(id, Entity{id, kind, props, labels});
  return {std::move(next), id};
}

WorldState set_property(const Taxonomy& tax, const WorldState& state, EntityId id,
                        const std::string& property, const PropValue& value) {
  entity(state, id);
  check_value(tax, property, value);
  WorldState next = state;
  next.entities.at(id).props[property] = value;
  return next;
}

WorldState set_kind_default(const Taxonomy& tax, const WorldState& state,
                            const std::string& kind, const std::string& property,
                            const PropValue& value) {
  tax.kind(kind);
  check_value(tax, property, value);
  WorldState next = state;
  next.kind_defaults[kind][property] = value;
  return next;
}

std::optional<EntityId> container_of(const WorldState& state, EntityId id) {
  for (const auto& r : state.relations) {
    if (r.kind == RelationKind::In && r.subject == id) return r.object;
  }
  return std::nullopt;
}

std::vector<EntityId> contents_of(const WorldState& state, EntityId container) {
  std::vector<EntityId> out;
  for (const auto& r : state.relations) {
    if (r.kind == RelationKind::In && r.object == container) out.push_back(r.subject);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool inside_transitively(const WorldState& state, EntityId inner, EntityId outer) {
  std::optional<EntityId> cur = container_of(state, inner);
  // Bounded by entity count; the In graph is acyclic by construction.
  for (std::size_t guard = 0; cur && guard <= state.entities.size(); ++guard) {
    if (*cur == outer) return true;
    cur = container_of(state, *cur);
  }
  return false;
}

WorldState remove_from_container(const WorldState& state, EntityId subject) {
  WorldState next = state;
  std::erase_if(next.relations, [&](const Relation& r) {
    return r.kind == RelationKind::In && r.subject == subject;
  });
  return next;
}

WorldState place_in(const WorldState& state, EntityId subject, EntityId container) {
  entity(state, subject);
  entity(state, container);
  if (subject == container || inside_transitively(state, container, subject)) {
    throw Error(ErrorCode::CycleRejected, "containment of #" + std::to_string(subject) +
                                              " in #" + std::to_string(container) +
                                              " would form a cycle");
  }
  WorldState next = remove_from_container(state, subject);
  next.relations.insert(Relation{RelationKind::In, subject, container, {}, 0});
  return next;
}

WorldState add_relation(const WorldState& state, const Relation& rel) {
  if (rel.kind == RelationKind::In) return place_in(state, rel.subject, rel.object);
  entity(state, rel.subject);
  entity(state, rel.object);
  WorldState next = state;
  next.relations.insert(rel);
  return next;
}

WorldState append_event(const WorldState& state, EventRecord ev) {
  WorldState next = state;
  next.events.push_back(std::move(ev));
  return next;
}

std::vector<Relation> worn_by(const WorldState& state, EntityId wearer) {
  std::vector<Relation> out;
  for (const auto& r : state.relations) {
    if (r.kind == RelationKind::WornBy && r.object == wearer) out.push_back(r);
  }
  return out;
}

std::optional<Relation> wearing_of(const WorldState& state, EntityId garment) {
  for (const auto& r : state.relations) {
    if (r.kind == RelationKind::WornBy && r.subject == garment) return r;
  }
  return std::nullopt;
}

std::optional<PropValue> effective_property(const Taxonomy& tax, const WorldState& state,
                                            EntityId id, const std::string& property) {
  const Entity& e = entity(state, id);
  if (auto it = e.props.find(property); it != e.props.end()) return it->second;
  for (const auto& k : tax.ancestry(e.kind)) {
    if (auto sd = state.kind_defaults.find(k); sd != state.kind_defaults.end()) {
      if (auto it = sd->second.find(property); it != sd->second.end()) return it->second;
    }
    const auto& defaults = tax.kind(k).defaults;
    if (auto it = defaults.find(property); it != defaults.end()) return it->second;
  }
  return std::nullopt;
}

namespace {

Dimension dimension_of(const Taxonomy& tax, const std::string& property) {
  const PropertySchema* schema = tax.property(property);
  if (!schema) throw Error(ErrorCode::UnknownProperty, "unknown property '" + property + "'");
  switch (schema->type) {
    case PropertyType::Mass: return Dimension::Mass;
    case PropertyType::Count: return Dimension::Count;
    case PropertyType::Flag: break;
  }
  throw Error(ErrorCode::DimensionMismatch, "property '" + property + "' is a flag");
}

}  // namespace

Quantity effective_quantity(const Taxonomy& tax, const WorldState& state, EntityId id,
                            const std::string& property) {
  Dimension dim = dimension_of(tax, property);
  auto v = effective_property(tax, state, id, property);
  if (!v) return Quantity{0, dim};
  return std::get<Quantity>(*v);
}

bool effective_flag(const Taxonomy& tax, const WorldState& state, EntityId id,
                    const std::string& flag) {
  auto v = effective_property(tax, state, id, flag);
  if (!v) return false;
  if (const bool* b = std::get_if<bool>(&*v)) return *b;
  return false;
}

Quantity aggregate_quantity(const Taxonomy& tax, const WorldState& state, EntityId id,
                            const std::string& property) {
  Quantity sum = effective_quantity(tax, state, id, property);
  for (EntityId child : contents_of(state, id)) {
    sum = sum + aggregate_quantity(tax, state, child, property);
  }
  return sum;
}

Quantity total_quantity(const Taxonomy& tax, const WorldState& state, EntityId container,
                        const std::string& property) {
  entity(state, container);
  Quantity sum{0, dimension_of(tax, property)};
  for (EntityId child : contents_of(state, container)) {
    sum = sum + aggregate_quantity(tax, state, child, property);
  }
  return sum;
}

std::string canonical_json(const WorldState& state) { return to_json(state).dump(); }

std::uint64_t state_hash(const WorldState& state) {
  // FNV-1a over the canonical serialization.
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canonical_json(state)) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace ecosim
