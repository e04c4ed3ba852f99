#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ecosim/ast.hpp"
#include "ecosim/emulator.hpp"
#include "ecosim/indexer.hpp"
#include "ecosim/world.hpp"

namespace ecosim {

/// One executing discourse: the emulator chain head, the world, and the
/// discourse context. `step` is the index the next step record will get.
struct Session {
  Emulator em;
  WorldState state;
  DiscourseContext ctx;
  int step = 0;
  friend bool operator==(const Session&, const Session&) = default;
};

Session new_session(const Emulator& prelude);

struct Answer {
  enum class Kind { Yes, No, Value, Blocked };
  Kind kind = Kind::No;
  std::optional<PropValue> value;
  std::string blocked;  // "blocked at step k: reason"
  friend bool operator==(const Answer&, const Answer&) = default;
};

std::string to_string(const Answer& a);

struct StepRecord {
  int index = 0;
  dsl::Role role = dsl::Role::Fact;
  std::string text;
  int emulator_version = 0;
  std::string state_hash;
  std::vector<EventRecord> events;
  std::vector<GroundedAction> actions;
  std::optional<std::string> answer;
  std::optional<std::string> failure;
  std::vector<std::string> warnings;
  bool synthesized = false;  // inserted by the engine ("This X" introductions)
};

struct Trace {
  std::vector<StepRecord> steps;
  Session final;
  bool halted = false;
};

enum class RunMode { Halt, Continue };

struct StepOutcome {
  Session session;  // unchanged on failure
  std::vector<StepRecord> records;
  bool failed = false;
};

/// Executes one statement. Engine errors and denied actions become a failure
/// record; nothing is thrown except for programming errors.
StepOutcome run_step(const Session& s, const dsl::Statement& stmt);

Trace run_scenario(const Emulator& prelude, const std::vector<dsl::Statement>& stmts,
                   RunMode mode = RunMode::Halt);

/// Continues an existing session (the REPL and the service use this).
Trace run_scenario(const Session& start, const std::vector<dsl::Statement>& stmts,
                   RunMode mode = RunMode::Halt);

/// All permitted grounded actions, canonical order. Agents range over persons
/// when any exist; only put-in takes a target.
std::vector<GroundedAction> derive_affordances(const Emulator& em, const WorldState& state);

struct CommandResult {
  Session session;  // input session when failed
  std::vector<GroundedAction> actions;
  std::optional<std::string> failure;
  int failed_index = -1;  // index into the expanded action list
};

/// Grounds and executes a command atomically. With `introduce` false, an
/// indefinite phrase never creates entities.
CommandResult execute_command(const Session& s, const dsl::Command& cmd, bool introduce = true);

/// A condition whose noun phrases have been resolved against one context.
struct ResolvedCondition {
  struct Term {
    std::vector<EntityId> ids;
    std::size_t need = 0;  // how many of `ids` must satisfy the atom
  };
  struct Item {
    dsl::Atom atom;
    Term subject;
    Term object;
  };
  std::vector<Item> items;
  DiscourseContext ctx;
};

ResolvedCondition resolve_condition(const Session& s, const dsl::Condition& cond);
bool holds(const Emulator& em, const WorldState& state, const ResolvedCondition& cond);

bool check_goal(const Session& s, const dsl::GoalSpec& goal);

/// Evaluates a query on the session; what-if queries run on a fork.
Answer evaluate_query(const Session& s, const dsl::Query& q);
Answer evaluate_basic(const Session& s, const dsl::BasicQuery& q);

Answer what_if(const Session& s, const std::vector<dsl::Command>& hypotheticals,
               const dsl::BasicQuery& q);

}  // namespace ecosim
