#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ecosim/ast.hpp"
#include "ecosim/world.hpp"

namespace ecosim {

using dsl::Modality;

enum class Provenance { Compiled, Situation };
enum class Scope { Generic, Specific };
enum class ActionRole { Agent, Patient, Target };

const char* to_string(Provenance p);
const char* to_string(Scope s);

/// Matches one entity: by id (specific) or by kind subsumption plus labels.
struct Selector {
  std::optional<EntityId> entity;
  std::string kind;
  std::vector<std::string> labels;
  friend bool operator==(const Selector&, const Selector&) = default;
};

struct ActionPattern {
  std::vector<std::string> verbs;
  std::optional<Selector> agent;
  std::optional<Selector> patient;
  std::optional<Selector> target;
  friend bool operator==(const ActionPattern&, const ActionPattern&) = default;
};

struct Guard {
  enum class Kind { NotFlag, NotWorn, NoWornAtOrAbove };
  Kind kind = Kind::NotFlag;
  ActionRole role = ActionRole::Patient;
  std::string name;  // flag name or body slot
  int layer = 0;
  friend bool operator==(const Guard&, const Guard&) = default;
};

struct Effect {
  enum class Kind { Detach, PlaceIn, SetFlag, WearOn, RecordEvent, Spill };
  Kind kind = Kind::Detach;
  ActionRole subject = ActionRole::Patient;
  ActionRole object = ActionRole::Target;
  std::string name;  // flag / event / slot
  bool value = true;
  int layer = 0;
  friend bool operator==(const Effect&, const Effect&) = default;
};

/// Fires when total(target) + aggregate(patient) of `property` exceeds `limit`.
struct EventClause {
  std::string property;
  Quantity limit;
  std::string event;
  std::vector<Effect> effects;
  friend bool operator==(const EventClause&, const EventClause&) = default;
};

struct AffordanceRule {
  int id = 0;
  Modality modality = Modality::Can;
  ActionPattern pattern;
  std::vector<Guard> guards;
  std::map<std::string, std::vector<Effect>> effects;  // per verb
  std::vector<EventClause> events;
  Provenance provenance = Provenance::Situation;
  int installed_at = 0;
  Scope scope = Scope::Generic;
  int depth = 0;
  /// Licensing rules grant the action; modifier rules (capacities) only add
  /// guards and event clauses to actions licensed elsewhere.
  bool licensing = true;
  dsl::AffordanceDecl source;
  friend bool operator==(const AffordanceRule&, const AffordanceRule&) = default;
};

/// Strict precedence: specific > generic, deeper kind > shallower, Cannot >
/// Can, later installation > earlier, higher id > lower.
bool outranks(const AffordanceRule& a, const AffordanceRule& b);

struct Emulator {
  int version = 0;
  Taxonomy taxonomy;
  std::vector<AffordanceRule> rules;
  std::map<std::string, std::string> event_flags;  // event name -> flag it sets
  std::vector<std::string> warnings;
  std::vector<std::string> libraries;  // prelude libraries loaded, in order

  friend bool operator==(const Emulator&, const Emulator&) = default;
};

struct GroundedAction {
  std::string verb;
  std::optional<EntityId> agent;
  EntityId patient = 0;
  std::optional<EntityId> target;

  /// Canonical order: verb, patient, target, agent.
  friend auto operator<=>(const GroundedAction& a, const GroundedAction& b) {
    if (auto c = a.verb <=> b.verb; c != 0) return c;
    if (auto c = a.patient <=> b.patient; c != 0) return c;
    if (auto c = a.target <=> b.target; c != 0) return c;
    return a.agent <=> b.agent;
  }
  friend bool operator==(const GroundedAction&, const GroundedAction&) = default;
};

std::string to_string(const GroundedAction& act);

enum class DenyReason { NoAffordance, Prohibited, Inapplicable };

const char* to_string(DenyReason r);

struct Deny {
  DenyReason reason = DenyReason::NoAffordance;
  std::optional<int> rule;
  std::string detail;
  friend bool operator==(const Deny&, const Deny&) = default;
};

struct Permit {
  int rule = 0;
  std::optional<EventClause> event;
  friend bool operator==(const Permit&, const Permit&) = default;
};

using Verdict = std::variant<Permit, Deny>;

struct ActionFailure {
  Deny deny;
  friend bool operator==(const ActionFailure&, const ActionFailure&) = default;
};

using ApplyOutcome = std::variant<WorldState, ActionFailure>;

/// Entity a specific declaration ("This bag ...") has been resolved to.
struct Binding {
  EntityId id = 0;
  std::string kind;
};

Emulator base_emulator();

bool is_builtin_verb(const std::string& verb);

/// Verbs an action may use under `em`: built-ins plus custom verbs from rules.
std::vector<std::string> known_verbs(const Emulator& em);

AffordanceRule compile_rule(const dsl::AffordanceDecl& decl, const Emulator& em,
                            const std::optional<Binding>& binding = std::nullopt,
                            Provenance provenance = Provenance::Situation);

/// Absorbs one eco-statement. No world state is involved.
Emulator eco_apply(const Emulator& em, const dsl::Statement& stmt,
                   const std::optional<Binding>& binding = std::nullopt,
                   Provenance provenance = Provenance::Situation);

Verdict check_action(const Emulator& em, const WorldState& state, const GroundedAction& act);

/// Applies `act` atomically. The emulator is read-only here.
ApplyOutcome apply(const Emulator& em, const WorldState& state, const GroundedAction& act);

std::string guard_sexpr(const Guard& g);
std::string effect_sexpr(const Effect& e);
std::string event_sexpr(const EventClause& e);

}  // namespace ecosim
