#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ecosim/quantity.hpp"

namespace ecosim {

using EntityId = std::int64_t;

/// A property value is either a quantity or a boolean flag.
using PropValue = std::variant<Quantity, bool>;
using PropMap = std::map<std::string, PropValue>;

enum class PropertyType { Mass, Count, Flag };

const char* to_string(PropertyType t);

struct PropertySchema {
  std::string name;
  PropertyType type = PropertyType::Flag;
  std::string owner;  // kind the property was declared on
  friend bool operator==(const PropertySchema&, const PropertySchema&) = default;
};

struct KindInfo {
  std::string name;
  std::optional<std::string> parent;
  PropMap defaults;
  friend bool operator==(const KindInfo&, const KindInfo&) = default;
};

inline constexpr const char* kRootKind = "thing";
inline constexpr const char* kHeldFlag = "held";
inline constexpr const char* kContainerKind = "container";
inline constexpr const char* kPersonKind = "person";

/// Single-inheritance kind hierarchy rooted at "thing", plus property schemas
/// and compiled (library) property defaults.
class Taxonomy {
 public:
  Taxonomy();

  bool has_kind(const std::string& name) const { return kinds_.count(name) != 0; }
  const KindInfo& kind(const std::string& name) const;
  const std::map<std::string, KindInfo>& kinds() const { return kinds_; }

  void add_kind(const std::string& name, const std::string& parent);

  /// Distance from the root; "thing" has depth 0.
  int depth(const std::string& name) const;

  /// True when `kind` equals `ancestor` or descends from it.
  bool is_a(const std::string& kind, const std::string& ancestor) const;

  /// `kind`, its parent, ... up to the root.
  std::vector<std::string> ancestry(const std::string& kind) const;

  void declare_property(const std::string& name, PropertyType type, const std::string& owner);
  const PropertySchema* property(const std::string& name) const;
  const std::map<std::string, PropertySchema>& properties() const { return properties_; }

  void set_default(const std::string& kind, const std::string& property, PropValue value);

  friend bool operator==(const Taxonomy&, const Taxonomy&) = default;

 private:
  std::map<std::string, KindInfo> kinds_;
  std::map<std::string, PropertySchema> properties_;
};

struct Entity {
  EntityId id = 0;
  std::string kind;
  PropMap props;
  std::vector<std::string> labels;  // adjectives from the introducing noun phrase
  friend bool operator==(const Entity&, const Entity&) = default;
};

enum class RelationKind { In, WornBy, At };

const char* to_string(RelationKind k);

struct Relation {
  RelationKind kind = RelationKind::In;
  EntityId subject = 0;
  EntityId object = 0;
  std::string slot;  // WornBy only
  int layer = 0;     // WornBy only
  friend auto operator<=>(const Relation&, const Relation&) = default;
};

struct EventRecord {
  std::string name;
  EntityId subject = 0;
  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

/// Immutable-by-convention snapshot of the world. Every engine operation takes
/// a state by const reference and returns a new one.
struct WorldState {
  std::map<EntityId, Entity> entities;
  std::set<Relation> relations;
  std::vector<EventRecord> events;
  /// Kind-level defaults asserted by facts ("The weight of a watermelon is 9 kg.").
  std::map<std::string, PropMap> kind_defaults;

  friend bool operator==(const WorldState&, const WorldState&) = default;
};

WorldState new_world();

EntityId next_entity_id(const WorldState& state);

const Entity& entity(const WorldState& state, EntityId id);
bool has_entity(const WorldState& state, EntityId id);

std::pair<WorldState, EntityId> add_entity(const Taxonomy& tax, const WorldState& state,
                                           const std::string& kind, const PropMap& props = {},
                                           const std::vector<std::string>& labels = {});

WorldState set_property(const Taxonomy& tax, const WorldState& state, EntityId id,
                        const std::string& property, const PropValue& value);

WorldState set_kind_default(const Taxonomy& tax, const WorldState& state,
                            const std::string& kind, const std::string& property,
                            const PropValue& value);

/// Moves `subject` into `container`, replacing any previous In parent.
/// Throws CycleRejected if the container is `subject` or lies inside it.
WorldState place_in(const WorldState& state, EntityId subject, EntityId container);
WorldState remove_from_container(const WorldState& state, EntityId subject);

WorldState add_relation(const WorldState& state, const Relation& rel);
WorldState append_event(const WorldState& state, EventRecord ev);

std::optional<EntityId> container_of(const WorldState& state, EntityId id);
std::vector<EntityId> contents_of(const WorldState& state, EntityId container);
bool inside_transitively(const WorldState& state, EntityId inner, EntityId outer);
std::vector<Relation> worn_by(const WorldState& state, EntityId wearer);
std::optional<Relation> wearing_of(const WorldState& state, EntityId garment);

/// Own value, else per ancestor kind (nearest first): fact default, then
/// compiled default.
std::optional<PropValue> effective_property(const Taxonomy& tax, const WorldState& state,
                                            EntityId id, const std::string& property);

/// Effective quantity; zero of the declared dimension when nothing is set.
Quantity effective_quantity(const Taxonomy& tax, const WorldState& state, EntityId id,
                            const std::string& property);

bool effective_flag(const Taxonomy& tax, const WorldState& state, EntityId id,
                    const std::string& flag);

/// Entity's own effective quantity plus, recursively, everything inside it.
Quantity aggregate_quantity(const Taxonomy& tax, const WorldState& state, EntityId id,
                            const std::string& property);

/// Sum of aggregate_quantity over the direct children of `container`.
Quantity total_quantity(const Taxonomy& tax, const WorldState& state, EntityId container,
                        const std::string& property);

std::string canonical_json(const WorldState& state);
std::uint64_t state_hash(const WorldState& state);
std::string hash_hex(std::uint64_t h);

}  // namespace ecosim
