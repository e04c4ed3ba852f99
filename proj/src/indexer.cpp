#include "ecosim/indexer.hpp"

#include <algorithm>

#include "ecosim/error.hpp"
#include "ecosim/parser.hpp"

namespace ecosim {

using dsl::Determiner;
using dsl::NounPhrase;

namespace {

bool is_person_pronoun(const NounPhrase& np) {
  return np.det == Determiner::Pronoun && (np.noun == "he" || np.noun == "she");
}

void require_kind(const Taxonomy& tax, const std::string& kind) {
  if (!tax.has_kind(kind)) throw Error(ErrorCode::UnknownKind, "unknown kind '" + kind + "'");
}

}  // namespace

DiscourseContext note_mention(const DiscourseContext& ctx, const Taxonomy& tax,
                              const WorldState& state, const std::string& surface,
                              const std::vector<EntityId>& ids) {
  DiscourseContext next = ctx;
  if (ids.empty()) return next;
  next.tick = ctx.tick + 1;
  auto& ms = next.mentions;
  ms.erase(std::remove_if(ms.begin(), ms.end(),
                          [&](const Mention& m) {
                            return std::find(ids.begin(), ids.end(), m.id) != ids.end();
                          }),
           ms.end());
  for (auto it = ids.rbegin(); it != ids.rend(); ++it) {
    ms.insert(ms.begin(), Mention{surface, *it, next.tick});
  }
  for (EntityId id : ids) {
    if (tax.has_kind(kPersonKind) && tax.is_a(entity(state, id).kind, kPersonKind)) {
      next.person = id;
    }
  }
  if (ids.size() == 1 && next.person != ids.front()) next.it = ids.front();
  return next;
}

std::vector<EntityId> matching_entities(const Taxonomy& tax, const WorldState& state,
                                        const NounPhrase& np) {
  require_kind(tax, np.noun);
  std::vector<EntityId> out;
  for (const auto& [id, e] : state.entities) {
    if (!tax.is_a(e.kind, np.noun)) continue;
    bool labelled = std::all_of(np.adjectives.begin(), np.adjectives.end(), [&](const auto& a) {
      return std::find(e.labels.begin(), e.labels.end(), a) != e.labels.end();
    });
    if (labelled) out.push_back(id);
  }
  return out;
}

int recency(const DiscourseContext& ctx, EntityId id) {
  for (const auto& m : ctx.mentions) {
    if (m.id == id) return m.tick;
  }
  return -1;
}

namespace {

EntityId resolve_pronoun(const NounPhrase& np, const WorldState& state,
                         const DiscourseContext& ctx) {
  auto bound = is_person_pronoun(np) ? ctx.person : ctx.it;
  if (!bound || !has_entity(state, *bound)) {
    throw Error(ErrorCode::NoReferent, "nothing for '" + np.noun + "' to refer to");
  }
  return *bound;
}

// Candidates sorted most-recent first, ties by id.
std::vector<EntityId> by_recency(const Taxonomy& tax, const NounPhrase& np,
                                 const WorldState& state, const DiscourseContext& ctx) {
  auto ids = matching_entities(tax, state, np);
  if (ids.empty()) {
    throw Error(ErrorCode::NoReferent, "no referent for '" + dsl::pretty_print(np) + "'");
  }
  std::stable_sort(ids.begin(), ids.end(),
                   [&](EntityId a, EntityId b) { return recency(ctx, a) > recency(ctx, b); });
  return ids;
}

}  // namespace

EntityId resolve_referent(const Taxonomy& tax, const NounPhrase& np, const WorldState& state,
                          const DiscourseContext& ctx) {
  if (np.det == Determiner::Pronoun) return resolve_pronoun(np, state, ctx);
  auto ids = by_recency(tax, np, state, ctx);
  if (ids.size() > 1 && recency(ctx, ids[0]) == recency(ctx, ids[1])) {
    throw Error(ErrorCode::AmbiguousReferent,
                "'" + dsl::pretty_print(np) + "' could mean #" + std::to_string(ids[0]) +
                    " or #" + std::to_string(ids[1]));
  }
  return ids.front();
}

std::vector<EntityId> resolve_referents(const Taxonomy& tax, const NounPhrase& np,
                                        const WorldState& state, const DiscourseContext& ctx) {
  switch (np.det) {
    case Determiner::All: return matching_entities(tax, state, np);
    case Determiner::DefiniteCount: {
      auto ids = by_recency(tax, np, state, ctx);
      std::size_t n = static_cast<std::size_t>(np.count);
      if (ids.size() < n) {
        throw Error(ErrorCode::NoReferent, "fewer than " + std::to_string(n) + " entities for '" +
                                               dsl::pretty_print(np) + "'");
      }
      if (ids.size() > n && n > 0 && recency(ctx, ids[n - 1]) == recency(ctx, ids[n])) {
        throw Error(ErrorCode::AmbiguousReferent,
                    "'" + dsl::pretty_print(np) + "' does not pick out a unique group");
      }
      ids.resize(n);
      std::sort(ids.begin(), ids.end());
      return ids;
    }
    default: return {resolve_referent(tax, np, state, ctx)};
  }
}

Indexed introduce(const Taxonomy& tax, const NounPhrase& np, const WorldState& state,
                  const DiscourseContext& ctx) {
  require_kind(tax, np.noun);
  Indexed out{state, ctx, {}};
  for (int i = 0; i < np.count; ++i) {
    auto [next, id] = add_entity(tax, out.state, np.noun, {}, np.adjectives);
    out.state = std::move(next);
    out.ids.push_back(id);
  }
  out.ctx = note_mention(ctx, tax, out.state, dsl::pretty_print(np), out.ids);
  return out;
}

Indexed resolve_or_instantiate(const Taxonomy& tax, const NounPhrase& np,
                               const WorldState& state, const DiscourseContext& ctx) {
  if (is_person_pronoun(np) && !(ctx.person && has_entity(state, *ctx.person))) {
    NounPhrase person{Determiner::Indefinite, 1, {}, kPersonKind};
    Indexed out = introduce(tax, person, state, ctx);
    return out;
  }
  Indexed out{state, ctx, resolve_referents(tax, np, state, ctx)};
  out.ctx = note_mention(ctx, tax, state, dsl::pretty_print(np), out.ids);
  return out;
}

std::pair<WorldState, DiscourseContext> index_fact(const Taxonomy& tax, const dsl::Statement& stmt,
                                                   const WorldState& state,
                                                   const DiscourseContext& ctx) {
  const auto* fact = std::get_if<dsl::Fact>(&stmt.body);
  if (!fact) throw Error(ErrorCode::NotFactStatement, "statement is not a fact");

  struct Visitor {
    const Taxonomy& tax;
    const WorldState& state;
    const DiscourseContext& ctx;
    using Result = std::pair<WorldState, DiscourseContext>;

    Result operator()(const dsl::ExistsFact& f) const {
      Indexed out = introduce(tax, f.np, state, ctx);
      return {std::move(out.state), std::move(out.ctx)};
    }
    Result assign(const NounPhrase& subject, const std::string& prop, const PropValue& value) const {
      if (subject.is_generic()) {
        require_kind(tax, subject.noun);
        return {set_kind_default(tax, state, subject.noun, prop, value), ctx};
      }
      Indexed target = resolve_or_instantiate(tax, subject, state, ctx);
      WorldState next = target.state;
      for (EntityId id : target.ids) next = set_property(tax, next, id, prop, value);
      return {std::move(next), std::move(target.ctx)};
    }
    Result operator()(const dsl::AssignFact& f) const {
      return assign(f.subject, f.property, f.value);
    }
    Result operator()(const dsl::FlagFact& f) const { return assign(f.subject, f.flag, f.value); }
    Result operator()(const dsl::InsideFact& f) const {
      Indexed inner = resolve_or_instantiate(tax, f.subject, state, ctx);
      Indexed outer = f.container.is_specific()
                          ? resolve_or_instantiate(tax, f.container, inner.state, inner.ctx)
                          : introduce(tax, f.container, inner.state, inner.ctx);
      if (outer.ids.size() != 1) {
        throw Error(ErrorCode::AmbiguousReferent, "a thing can only be in one container");
      }
      WorldState next = outer.state;
      for (EntityId id : inner.ids) next = place_in(next, id, outer.ids.front());
      return {std::move(next), std::move(outer.ctx)};
    }
  };
  return std::visit(Visitor{tax, state, ctx}, fact->content);
}

std::pair<WorldState, DiscourseContext> build_initial_state(
    const Taxonomy& tax, const std::vector<dsl::Statement>& stmts) {
  std::pair<WorldState, DiscourseContext> acc{new_world(), DiscourseContext{}};
  for (std::size_t i = 0; i < stmts.size(); ++i) {
    try {
      acc = index_fact(tax, stmts[i], acc.first, acc.second);
    } catch (const Error& e) {
      throw Error(e.code(), "statement " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return acc;
}

}  // namespace ecosim
