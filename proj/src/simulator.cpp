#include "ecosim/simulator.hpp"

#include <algorithm>
#include <set>

#include "ecosim/error.hpp"
#include "ecosim/parser.hpp"

namespace ecosim {

using dsl::Determiner;
using dsl::NounPhrase;

Session new_session(const Emulator& prelude) { return Session{prelude, new_world(), {}, 0}; }

std::string to_string(const Answer& a) {
  switch (a.kind) {
    case Answer::Kind::Yes: return "yes";
    case Answer::Kind::No: return "no";
    case Answer::Kind::Blocked: return a.blocked;
    case Answer::Kind::Value:
      if (!a.value) return "unknown";
      if (const auto* q = std::get_if<Quantity>(&*a.value)) return format_quantity(*q);
      return std::get<bool>(*a.value) ? "yes" : "no";
  }
  return "?";
}

namespace {

Answer yes_no(bool b) { return Answer{b ? Answer::Kind::Yes : Answer::Kind::No, {}, {}}; }

std::string describe_deny(const Deny& d) {
  std::string out = to_string(d.reason);
  if (!d.detail.empty()) out += ": " + d.detail;
  return out;
}

std::vector<EntityId> persons(const Taxonomy& tax, const WorldState& state) {
  std::vector<EntityId> out;
  if (!tax.has_kind(kPersonKind)) return out;
  for (const auto& [id, e] : state.entities) {
    if (tax.is_a(e.kind, kPersonKind)) out.push_back(id);
  }
  return out;
}

// "blue jeans" names one garment; other bare plurals range over every match.
bool single_bare(const NounPhrase& np) {
  return np.det == Determiner::Bare && dsl::is_plurale_tantum(np.noun);
}

NounPhrase one_of(const NounPhrase& np) {
  return NounPhrase{Determiner::Indefinite, 1, np.adjectives, np.noun};
}

// Resolves a phrase that must denote exactly one entity, creating it when the
// phrase is indefinite and nothing matches.
Indexed single(const Taxonomy& tax, const NounPhrase& np, const WorldState& state,
               const DiscourseContext& ctx, bool introduce_ok) {
  Indexed out{state, ctx, {}};
  if (np.is_specific()) {
    if (!introduce_ok && np.det == Determiner::Pronoun && np.noun != "it" &&
        !(ctx.person && has_entity(state, *ctx.person))) {
      throw Error(ErrorCode::NoReferent, "nothing for '" + np.noun + "' to refer to");
    }
    out = resolve_or_instantiate(tax, np, state, ctx);
  } else {
    auto ids = matching_entities(tax, state, np);
    if (!ids.empty()) {
      out.ids = {ids.front()};
    } else if (introduce_ok) {
      out = introduce(tax, one_of(np), state, ctx);
    } else {
      throw Error(ErrorCode::NoReferent, "no referent for '" + dsl::pretty_print(np) + "'");
    }
  }
  if (out.ids.size() != 1) {
    throw Error(ErrorCode::AmbiguousReferent,
                "'" + dsl::pretty_print(np) + "' must denote a single thing");
  }
  return out;
}

struct Failed {
  std::string message;
  int index;
};

}  // namespace

CommandResult execute_command(const Session& s, const dsl::Command& cmd, bool introduce_ok) {
  const Taxonomy& tax = s.em.taxonomy;
  WorldState state = s.state;
  DiscourseContext ctx = s.ctx;
  std::vector<GroundedAction> done;

  std::optional<EntityId> agent;
  if (cmd.agent) {
    Indexed a = single(tax, *cmd.agent, state, ctx, introduce_ok);
    state = std::move(a.state);
    ctx = std::move(a.ctx);
    agent = a.ids.front();
  } else if (auto ps = persons(tax, state); ps.size() == 1) {
    agent = ps.front();
  }

  std::optional<EntityId> target;
  if (cmd.target) {
    Indexed t = single(tax, *cmd.target, state, ctx, introduce_ok);
    state = std::move(t.state);
    target = t.ids.front();
  }

  auto attempt = [&](EntityId patient) -> std::optional<std::string> {
    GroundedAction act{cmd.verb, agent, patient, target};
    ApplyOutcome out = apply(s.em, state, act);
    done.push_back(act);
    if (const auto* f = std::get_if<ActionFailure>(&out)) {
      return to_string(act) + " denied: " + describe_deny(f->deny);
    }
    state = std::get<WorldState>(std::move(out));
    return std::nullopt;
  };
  auto fail = [&](const std::string& why) {
    return CommandResult{s, done, why, static_cast<int>(done.size()) - 1};
  };

  std::set<EntityId> used;
  for (const auto& np : cmd.patients) {
    std::vector<EntityId> chosen;
    if (np.is_specific() || np.det == Determiner::All ||
        (np.det == Determiner::Bare && !single_bare(np))) {
      std::vector<EntityId> ids = np.is_specific() ? resolve_referents(tax, np, state, ctx)
                                                   : matching_entities(tax, state, np);
      if (ids.empty()) {
        throw Error(ErrorCode::NoReferent, "no referent for '" + dsl::pretty_print(np) + "'");
      }
      for (EntityId id : ids) {
        chosen.push_back(id);
        used.insert(id);
        if (auto why = attempt(id)) return fail(*why);
      }
    } else {
      for (int k = 0; k < np.count; ++k) {
        std::vector<EntityId> cands;
        for (EntityId id : matching_entities(tax, state, np)) {
          if (!used.count(id)) cands.push_back(id);
        }
        std::optional<EntityId> pick;
        for (EntityId id : cands) {
          GroundedAction act{cmd.verb, agent, id, target};
          if (std::holds_alternative<Permit>(check_action(s.em, state, act))) {
            pick = id;
            break;
          }
        }
        if (!pick && !cands.empty()) pick = cands.front();
        if (!pick) {
          if (!introduce_ok) {
            throw Error(ErrorCode::NoReferent,
                        "not enough entities for '" + dsl::pretty_print(np) + "'");
          }
          Indexed fresh = introduce(tax, one_of(np), state, ctx);
          state = std::move(fresh.state);
          pick = fresh.ids.front();
        }
        chosen.push_back(*pick);
        used.insert(*pick);
        if (auto why = attempt(*pick)) return fail(*why);
      }
    }
    ctx = note_mention(ctx, tax, state, dsl::pretty_print(np), chosen);
  }
  if (target) {
    ctx = note_mention(ctx, tax, state, dsl::pretty_print(*cmd.target), {*target});
  }
  Session next = s;
  next.state = std::move(state);
  next.ctx = std::move(ctx);
  return CommandResult{std::move(next), std::move(done), std::nullopt, -1};
}

std::vector<GroundedAction> derive_affordances(const Emulator& em, const WorldState& state) {
  std::vector<std::optional<EntityId>> agents;
  for (EntityId p : persons(em.taxonomy, state)) agents.emplace_back(p);
  if (agents.empty()) agents.emplace_back(std::nullopt);

  std::vector<GroundedAction> out;
  auto consider = [&](GroundedAction act) {
    if (std::holds_alternative<Permit>(check_action(em, state, act))) {
      out.push_back(std::move(act));
    }
  };
  for (const auto& verb : known_verbs(em)) {
    for (const auto& agent : agents) {
      for (const auto& [patient, pe] : state.entities) {
        if (verb == dsl::kVerbPutIn) {
          for (const auto& [target, te] : state.entities) {
            consider(GroundedAction{verb, agent, patient, target});
          }
        } else {
          consider(GroundedAction{verb, agent, patient, std::nullopt});
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// --- conditions ----------------------------------------------------------------

namespace {

using Term = ResolvedCondition::Term;

Term resolve_term(const Session& s, const NounPhrase& np) {
  const Taxonomy& tax = s.em.taxonomy;
  Term t;
  if (np.is_specific() || np.det == Determiner::DefiniteCount) {
    t.ids = resolve_referents(tax, np, s.state, s.ctx);
    t.need = t.ids.size();
  } else if (np.det == Determiner::Indefinite || np.det == Determiner::Count ||
             single_bare(np)) {
    t.ids = matching_entities(tax, s.state, np);
    t.need = static_cast<std::size_t>(np.count);
  } else {
    t.ids = matching_entities(tax, s.state, np);
    t.need = t.ids.size();
  }
  return t;
}

void require_property(const Taxonomy& tax, const std::string& name) {
  if (!tax.property(name)) {
    throw Error(ErrorCode::UnknownProperty, "unknown property '" + name + "'");
  }
}

bool compare_with(dsl::Comparison cmp, const Quantity& a, const Quantity& b) {
  auto c = compare(a, b);
  switch (cmp) {
    case dsl::Comparison::AtLeast: return c >= 0;
    case dsl::Comparison::AtMost: return c <= 0;
    case dsl::Comparison::MoreThan: return c > 0;
    case dsl::Comparison::LessThan: return c < 0;
    case dsl::Comparison::Exactly: return c == 0;
  }
  return false;
}

}  // namespace

ResolvedCondition resolve_condition(const Session& s, const dsl::Condition& cond) {
  ResolvedCondition rc;
  rc.ctx = s.ctx;
  const Taxonomy& tax = s.em.taxonomy;
  for (const auto& atom : cond.conjuncts) {
    ResolvedCondition::Item item{atom, {}, {}};
    std::visit(
        [&](const auto& a) {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, dsl::FlagAtom>) {
            require_property(tax, a.flag);
            item.subject = resolve_term(s, a.subject);
          } else if constexpr (std::is_same_v<T, dsl::EventAtom>) {
            item.subject = resolve_term(s, a.subject);
          } else if constexpr (std::is_same_v<T, dsl::InAtom>) {
            item.subject = resolve_term(s, a.subject);
            item.object = resolve_term(s, a.container);
          } else if constexpr (std::is_same_v<T, dsl::ContainsAtom>) {
            item.subject = resolve_term(s, a.contents);
            item.object = resolve_term(s, a.container);
          } else if constexpr (std::is_same_v<T, dsl::WearsAtom>) {
            item.subject = resolve_term(s, a.garment);
            item.object = resolve_term(s, a.wearer);
          } else if constexpr (std::is_same_v<T, dsl::TotalAtom>) {
            require_property(tax, a.property);
            item.object = resolve_term(s, a.container);
          }
        },
        atom);
    rc.items.push_back(std::move(item));
  }
  return rc;
}

bool holds(const Emulator& em, const WorldState& state, const ResolvedCondition& cond) {
  const Taxonomy& tax = em.taxonomy;
  for (const auto& item : cond.items) {
    auto count_subjects = [&](auto&& pred) {
      std::size_t n = 0;
      for (EntityId id : item.subject.ids) n += pred(id) ? 1 : 0;
      return n >= item.subject.need;
    };
    auto related = [&](EntityId id, auto&& rel) {
      return std::any_of(item.object.ids.begin(), item.object.ids.end(),
                         [&](EntityId o) { return rel(id, o); });
    };
    auto directly_in = [&](EntityId id, EntityId o) { return container_of(state, id) == o; };
    bool ok = std::visit(
        [&](const auto& a) -> bool {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, dsl::FlagAtom>) {
            return count_subjects([&](EntityId id) {
              return effective_flag(tax, state, id, a.flag) != a.negated;
            });
          } else if constexpr (std::is_same_v<T, dsl::EventAtom>) {
            return count_subjects([&](EntityId id) {
              return std::any_of(state.events.begin(), state.events.end(), [&](const auto& ev) {
                return ev.name == a.event && ev.subject == id;
              });
            });
          } else if constexpr (std::is_same_v<T, dsl::InAtom> ||
                               std::is_same_v<T, dsl::ContainsAtom>) {
            return count_subjects([&](EntityId id) { return related(id, directly_in); });
          } else if constexpr (std::is_same_v<T, dsl::WearsAtom>) {
            return count_subjects([&](EntityId id) {
              return related(id, [&](EntityId g, EntityId w) {
                auto r = wearing_of(state, g);
                return r && r->object == w;
              });
            });
          } else if constexpr (std::is_same_v<T, dsl::TotalAtom>) {
            if (item.object.ids.empty()) return false;
            return std::all_of(item.object.ids.begin(), item.object.ids.end(), [&](EntityId o) {
              return compare_with(a.cmp, total_quantity(tax, state, o, a.property), a.value);
            });
          } else {
            Session fork{em, state, cond.ctx, 0};
            try {
              return !execute_command(fork, a.command, false).failure;
            } catch (const Error&) {
              return false;
            }
          }
        },
        item.atom);
    if (!ok) return false;
  }
  return true;
}

bool check_goal(const Session& s, const dsl::GoalSpec& goal) {
  return holds(s.em, s.state, resolve_condition(s, goal.condition));
}

Answer evaluate_basic(const Session& s, const dsl::BasicQuery& q) {
  const Taxonomy& tax = s.em.taxonomy;
  return std::visit(
      [&](const auto& b) -> Answer {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, dsl::PolarQuery>) {
          return yes_no(holds(s.em, s.state, resolve_condition(s, b.condition)));
        } else if constexpr (std::is_same_v<T, dsl::TotalQuery>) {
          require_property(tax, b.property);
          EntityId c = resolve_referent(tax, b.container, s.state, s.ctx);
          return Answer{Answer::Kind::Value, total_quantity(tax, s.state, c, b.property), {}};
        } else if constexpr (std::is_same_v<T, dsl::PropertyQuery>) {
          require_property(tax, b.property);
          EntityId id = resolve_referent(tax, b.subject, s.state, s.ctx);
          if (tax.property(b.property)->type == PropertyType::Flag) {
            return yes_no(effective_flag(tax, s.state, id, b.property));
          }
          return Answer{Answer::Kind::Value, effective_quantity(tax, s.state, id, b.property), {}};
        } else {
          EntityId c = resolve_referent(tax, b.container, s.state, s.ctx);
          std::int64_t n = 0;
          for (EntityId id : matching_entities(tax, s.state, b.contents)) {
            if (container_of(s.state, id) == c) ++n;
          }
          return Answer{Answer::Kind::Value, Quantity::count(n), {}};
        }
      },
      q);
}

Answer what_if(const Session& s, const std::vector<dsl::Command>& hypotheticals,
               const dsl::BasicQuery& q) {
  Session fork = s;
  for (std::size_t k = 0; k < hypotheticals.size(); ++k) {
    std::string why;
    try {
      CommandResult r = execute_command(fork, hypotheticals[k]);
      if (!r.failure) {
        fork = std::move(r.session);
        continue;
      }
      why = *r.failure;
    } catch (const Error& e) {
      why = std::string(to_string(e.code())) + ": " + e.what();
    }
    return Answer{Answer::Kind::Blocked, {}, "blocked at step " + std::to_string(k + 1) + ": " + why};
  }
  return evaluate_basic(fork, q);
}

Answer evaluate_query(const Session& s, const dsl::Query& q) {
  if (q.what_if) return what_if(s, q.hypotheticals, q.body);
  return evaluate_basic(s, q.body);
}

// --- scenarios -------------------------------------------------------------------

namespace {

StepRecord record_for(const Session& before, const Session& after, const dsl::Statement& stmt,
                      int index) {
  StepRecord r;
  r.index = index;
  r.role = dsl::classify(stmt);
  r.text = dsl::pretty_print(stmt);
  r.emulator_version = after.em.version;
  r.state_hash = hash_hex(state_hash(after.state));
  for (std::size_t i = before.state.events.size(); i < after.state.events.size(); ++i) {
    r.events.push_back(after.state.events[i]);
  }
  return r;
}

// Runs one statement; throws engine errors, returns a failure message for denials.
std::optional<std::string> dispatch(Session& cur, const dsl::Statement& stmt,
                                    std::vector<StepRecord>& records) {
  const Session before = cur;
  StepRecord extra;
  switch (dsl::classify(stmt)) {
    case dsl::Role::Eco: {
      std::optional<Binding> binding;
      const auto* decl = std::get_if<dsl::AffordanceDecl>(&stmt.body);
      if (decl && decl->subject.is_specific()) {
        const Taxonomy& tax = cur.em.taxonomy;
        EntityId id = 0;
        try {
          id = resolve_referent(tax, decl->subject, cur.state, cur.ctx);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::NoReferent || decl->subject.det != Determiner::Demonstrative) {
            throw;
          }
          dsl::Statement intro{dsl::Fact{dsl::ExistsFact{one_of(decl->subject)}}, stmt.span};
          if (auto why = dispatch(cur, intro, records)) return why;
          records.back().synthesized = true;
          id = cur.ctx.mentions.front().id;
        }
        binding = Binding{id, entity(cur.state, id).kind};
        cur.ctx = note_mention(cur.ctx, tax, cur.state, dsl::pretty_print(decl->subject), {id});
      }
      std::size_t warned = cur.em.warnings.size();
      Emulator next = eco_apply(cur.em, stmt, binding, Provenance::Situation);
      extra.warnings.assign(next.warnings.begin() + static_cast<long>(warned), next.warnings.end());
      cur.em = std::move(next);
      break;
    }
    case dsl::Role::Fact: {
      auto [state, ctx] = index_fact(cur.em.taxonomy, stmt, cur.state, cur.ctx);
      cur.state = std::move(state);
      cur.ctx = std::move(ctx);
      break;
    }
    case dsl::Role::Do: {
      CommandResult r = execute_command(cur, std::get<dsl::Command>(stmt.body));
      if (r.failure) return *r.failure;
      extra.actions = std::move(r.actions);
      cur = std::move(r.session);
      break;
    }
    case dsl::Role::Query:
      extra.answer = to_string(evaluate_query(cur, std::get<dsl::Query>(stmt.body)));
      break;
    case dsl::Role::Goal:
      extra.answer = check_goal(cur, std::get<dsl::GoalSpec>(stmt.body)) ? "yes" : "no";
      break;
  }
  StepRecord r = record_for(before, cur, stmt, cur.step);
  r.warnings = std::move(extra.warnings);
  r.actions = std::move(extra.actions);
  r.answer = std::move(extra.answer);
  records.push_back(std::move(r));
  ++cur.step;
  return std::nullopt;
}

}  // namespace

StepOutcome run_step(const Session& s, const dsl::Statement& stmt) {
  Session cur = s;
  std::vector<StepRecord> records;
  std::optional<std::string> failure;
  try {
    failure = dispatch(cur, stmt, records);
  } catch (const Error& e) {
    failure = std::string(to_string(e.code())) + ": " + e.what();
  }
  if (!failure) return StepOutcome{std::move(cur), std::move(records), false};
  Session unchanged = s;
  StepRecord r = record_for(s, s, stmt, s.step);
  r.failure = std::move(failure);
  ++unchanged.step;
  return StepOutcome{std::move(unchanged), {std::move(r)}, true};
}

Trace run_scenario(const Session& start, const std::vector<dsl::Statement>& stmts, RunMode mode) {
  Trace trace;
  trace.final = start;
  for (const auto& stmt : stmts) {
    StepOutcome out = run_step(trace.final, stmt);
    trace.final = std::move(out.session);
    for (auto& r : out.records) trace.steps.push_back(std::move(r));
    if (out.failed && mode == RunMode::Halt) {
      trace.halted = true;
      break;
    }
  }
  return trace;
}

Trace run_scenario(const Emulator& prelude, const std::vector<dsl::Statement>& stmts,
                   RunMode mode) {
  return run_scenario(new_session(prelude), stmts, mode);
}

}  // namespace ecosim
