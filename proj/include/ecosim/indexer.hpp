#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ecosim/ast.hpp"
#include "ecosim/world.hpp"

namespace ecosim {

struct Mention {
  std::string surface;  // pretty-printed noun phrase
  EntityId id = 0;
  int tick = 0;  // entities mentioned by one phrase share a tick
  friend bool operator==(const Mention&, const Mention&) = default;
};

/// Discourse state carried alongside the world: who was mentioned when, and
/// what "it" and "he"/"she" currently denote.
struct DiscourseContext {
  std::vector<Mention> mentions;  // most recent first, one entry per entity
  std::optional<EntityId> it;
  std::optional<EntityId> person;
  int tick = 0;
  friend bool operator==(const DiscourseContext&, const DiscourseContext&) = default;
};

DiscourseContext note_mention(const DiscourseContext& ctx, const Taxonomy& tax,
                              const WorldState& state, const std::string& surface,
                              const std::vector<EntityId>& ids);

/// Entities of the phrase's kind (by subsumption) carrying all its adjectives, id order.
std::vector<EntityId> matching_entities(const Taxonomy& tax, const WorldState& state,
                                        const dsl::NounPhrase& np);

/// Most recent mention tick of `id`, or -1.
int recency(const DiscourseContext& ctx, EntityId id);

EntityId resolve_referent(const Taxonomy& tax, const dsl::NounPhrase& np, const WorldState& state,
                          const DiscourseContext& ctx);

/// Like resolve_referent but also handles "the three watermelons" and "all watermelons".
std::vector<EntityId> resolve_referents(const Taxonomy& tax, const dsl::NounPhrase& np,
                                        const WorldState& state, const DiscourseContext& ctx);

struct Indexed {
  WorldState state;
  DiscourseContext ctx;
  std::vector<EntityId> ids;
};

/// Creates `np.count` fresh entities for an indefinite/counted phrase.
Indexed introduce(const Taxonomy& tax, const dsl::NounPhrase& np, const WorldState& state,
                  const DiscourseContext& ctx);

/// Resolves a specific phrase; "he"/"she" with no binding instantiates a person.
Indexed resolve_or_instantiate(const Taxonomy& tax, const dsl::NounPhrase& np,
                               const WorldState& state, const DiscourseContext& ctx);

std::pair<WorldState, DiscourseContext> index_fact(const Taxonomy& tax, const dsl::Statement& stmt,
                                                   const WorldState& state,
                                                   const DiscourseContext& ctx);

std::pair<WorldState, DiscourseContext> build_initial_state(
    const Taxonomy& tax, const std::vector<dsl::Statement>& stmts);

}  // namespace ecosim
