#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ecosim/quantity.hpp"
#include "ecosim/world.hpp"

namespace ecosim::dsl {

/// Byte range [begin, end) in the source text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  friend bool operator==(const Span&, const Span&) = default;
};

enum class Determiner {
  Indefinite,     // a / an
  Definite,       // the
  Demonstrative,  // this
  Count,          // no, one, two, 3 ...
  DefiniteCount,  // the two ...
  Bare,           // bare plural or plurale tantum ("watermelons", "blue jeans")
  All,            // all ...
  Pronoun,        // it / he / she
};

struct NounPhrase {
  Determiner det = Determiner::Indefinite;
  std::int64_t count = 1;
  std::vector<std::string> adjectives;
  std::string noun;  // singular kind name, or the pronoun itself

  bool is_generic() const {
    return det == Determiner::Indefinite || det == Determiner::Bare || det == Determiner::All;
  }
  bool is_specific() const {
    return det == Determiner::Definite || det == Determiner::Demonstrative ||
           det == Determiner::Pronoun;
  }
  friend bool operator==(const NounPhrase&, const NounPhrase&) = default;
};

// --- eco declarations ------------------------------------------------------

struct KindDecl {
  std::string kind;
  std::string parent;
  friend bool operator==(const KindDecl&, const KindDecl&) = default;
};

struct PropertyDecl {
  std::string kind;
  std::string property;
  PropertyType type = PropertyType::Flag;
  friend bool operator==(const PropertyDecl&, const PropertyDecl&) = default;
};

enum class Modality { Can, Cannot };

struct HoldFrame {
  Quantity limit;
  std::string event;
  friend bool operator==(const HoldFrame&, const HoldFrame&) = default;
};

/// Slot and layer are empty/zero in prohibitions ("cannot be worn").
struct WearFrame {
  std::string slot;
  int layer = 0;
  friend bool operator==(const WearFrame&, const WearFrame&) = default;
};

struct PortableFrame {
  friend bool operator==(const PortableFrame&, const PortableFrame&) = default;
};

struct VerbFrame {
  std::string verb;
  std::string patient_kind;
  friend bool operator==(const VerbFrame&, const VerbFrame&) = default;
};

using Frame = std::variant<HoldFrame, WearFrame, PortableFrame, VerbFrame>;

struct AffordanceDecl {
  Modality modality = Modality::Can;
  NounPhrase subject;  // generic (kind-level) or specific (one entity)
  Frame frame;
  friend bool operator==(const AffordanceDecl&, const AffordanceDecl&) = default;
};

struct DefaultDecl {
  NounPhrase subject;  // generic
  std::string property;
  PropValue value;
  friend bool operator==(const DefaultDecl&, const DefaultDecl&) = default;
};

// --- facts -----------------------------------------------------------------

struct ExistsFact {
  NounPhrase np;  // Indefinite or Count
  friend bool operator==(const ExistsFact&, const ExistsFact&) = default;
};

struct AssignFact {
  NounPhrase subject;
  std::string property;
  Quantity value;
  friend bool operator==(const AssignFact&, const AssignFact&) = default;
};

struct FlagFact {
  NounPhrase subject;
  std::string flag;
  bool value = true;
  friend bool operator==(const FlagFact&, const FlagFact&) = default;
};

struct InsideFact {
  NounPhrase subject;
  NounPhrase container;
  friend bool operator==(const InsideFact&, const InsideFact&) = default;
};

struct Fact {
  std::variant<ExistsFact, AssignFact, FlagFact, InsideFact> content;
  friend bool operator==(const Fact&, const Fact&) = default;
};

// --- commands --------------------------------------------------------------

inline constexpr const char* kVerbPutIn = "put-in";
inline constexpr const char* kVerbTake = "take";
inline constexpr const char* kVerbWear = "wear";
inline constexpr const char* kVerbDrop = "drop";

struct Command {
  std::optional<NounPhrase> agent;
  std::string verb;
  std::vector<NounPhrase> patients;  // conjunction expands into sequential actions
  std::optional<NounPhrase> target;  // put-in only
  friend bool operator==(const Command&, const Command&) = default;
};

// --- conditions, queries, goals ---------------------------------------------

enum class Comparison { AtLeast, AtMost, MoreThan, LessThan, Exactly };

struct FlagAtom {
  NounPhrase subject;
  std::string flag;
  bool negated = false;
  friend bool operator==(const FlagAtom&, const FlagAtom&) = default;
};

struct InAtom {
  NounPhrase subject;
  NounPhrase container;
  friend bool operator==(const InAtom&, const InAtom&) = default;
};

/// "the bag contains three watermelons": at least `contents.count` direct children.
struct ContainsAtom {
  NounPhrase container;
  NounPhrase contents;
  friend bool operator==(const ContainsAtom&, const ContainsAtom&) = default;
};

struct WearsAtom {
  NounPhrase wearer;
  NounPhrase garment;
  friend bool operator==(const WearsAtom&, const WearsAtom&) = default;
};

struct TotalAtom {
  std::string property;
  NounPhrase container;
  Comparison cmp = Comparison::AtLeast;
  Quantity value;
  friend bool operator==(const TotalAtom&, const TotalAtom&) = default;
};

struct EventAtom {
  NounPhrase subject;
  std::string event;
  friend bool operator==(const EventAtom&, const EventAtom&) = default;
};

/// Affordance membership ("Can he wear the jacket?"); queries only.
struct CanAtom {
  Command command;
  friend bool operator==(const CanAtom&, const CanAtom&) = default;
};

using Atom = std::variant<FlagAtom, InAtom, ContainsAtom, WearsAtom, TotalAtom, EventAtom, CanAtom>;

struct Condition {
  std::vector<Atom> conjuncts;
  friend bool operator==(const Condition&, const Condition&) = default;
};

struct PolarQuery {
  Condition condition;
  friend bool operator==(const PolarQuery&, const PolarQuery&) = default;
};

struct TotalQuery {
  std::string property;
  NounPhrase container;
  friend bool operator==(const TotalQuery&, const TotalQuery&) = default;
};

struct PropertyQuery {
  std::string property;
  NounPhrase subject;
  friend bool operator==(const PropertyQuery&, const PropertyQuery&) = default;
};

struct CountQuery {
  NounPhrase contents;  // bare plural
  NounPhrase container;
  friend bool operator==(const CountQuery&, const CountQuery&) = default;
};

using BasicQuery = std::variant<PolarQuery, TotalQuery, PropertyQuery, CountQuery>;

struct Query {
  bool what_if = false;
  std::vector<Command> hypotheticals;
  BasicQuery body;
  friend bool operator==(const Query&, const Query&) = default;
};

struct GoalSpec {
  Condition condition;
  friend bool operator==(const GoalSpec&, const GoalSpec&) = default;
};

using Body = std::variant<KindDecl, PropertyDecl, AffordanceDecl, DefaultDecl, Fact, Command,
                          Query, GoalSpec>;

struct Statement {
  Body body;
  Span span;
  /// Structural equality; spans are ignored.
  friend bool operator==(const Statement& a, const Statement& b) { return a.body == b.body; }
};

enum class Role { Eco, Fact, Do, Query, Goal };

const char* to_string(Role r);

Role classify(const Statement& stmt);

}  // namespace ecosim::dsl
