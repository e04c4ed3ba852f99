#include "ecosim/emulator.hpp"

#include <algorithm>
#include <tuple>

#include "ecosim/error.hpp"
#include "ecosim/parser.hpp"

namespace ecosim {

const char* to_string(Provenance p) {
  return p == Provenance::Compiled ? "compiled" : "situation";
}

const char* to_string(Scope s) { return s == Scope::Specific ? "specific" : "generic"; }

const char* to_string(DenyReason r) {
  switch (r) {
    case DenyReason::NoAffordance: return "NoAffordance";
    case DenyReason::Prohibited: return "Prohibited";
    case DenyReason::Inapplicable: return "Inapplicable";
  }
  return "?";
}

std::string to_string(const GroundedAction& act) {
  std::string out = act.verb + "(#" + std::to_string(act.patient);
  if (act.target) out += ", #" + std::to_string(*act.target);
  out += ")";
  if (act.agent) out += " by #" + std::to_string(*act.agent);
  return out;
}

namespace {

auto precedence_key(const AffordanceRule& r) {
  return std::make_tuple(r.scope == Scope::Specific ? 1 : 0, r.depth,
                         r.modality == Modality::Cannot ? 1 : 0, r.installed_at, r.id);
}

const char* role_var(ActionRole r) {
  switch (r) {
    case ActionRole::Agent: return "?agent";
    case ActionRole::Patient: return "?patient";
    case ActionRole::Target: return "?target";
  }
  return "?";
}

constexpr const char* kWeight = "weight";

std::vector<Effect> builtin_effects(const std::string& verb) {
  using K = Effect::Kind;
  if (verb == dsl::kVerbTake) {
    return {Effect{K::Detach, ActionRole::Patient, ActionRole::Target, {}, true, 0},
            Effect{K::SetFlag, ActionRole::Patient, ActionRole::Target, kHeldFlag, true, 0}};
  }
  if (verb == dsl::kVerbPutIn) {
    return {Effect{K::SetFlag, ActionRole::Patient, ActionRole::Target, kHeldFlag, false, 0},
            Effect{K::PlaceIn, ActionRole::Patient, ActionRole::Target, {}, true, 0}};
  }
  if (verb == dsl::kVerbDrop) {
    return {Effect{K::SetFlag, ActionRole::Patient, ActionRole::Target, kHeldFlag, false, 0}};
  }
  return {Effect{K::RecordEvent, ActionRole::Patient, ActionRole::Target, verb, true, 0}};
}

}  // namespace

bool outranks(const AffordanceRule& a, const AffordanceRule& b) {
  return precedence_key(a) > precedence_key(b);
}

bool is_builtin_verb(const std::string& verb) {
  return verb == dsl::kVerbPutIn || verb == dsl::kVerbTake || verb == dsl::kVerbWear ||
         verb == dsl::kVerbDrop;
}

std::vector<std::string> known_verbs(const Emulator& em) {
  std::vector<std::string> verbs = {dsl::kVerbDrop, dsl::kVerbPutIn, dsl::kVerbTake,
                                    dsl::kVerbWear};
  for (const auto& r : em.rules) {
    for (const auto& v : r.pattern.verbs) {
      if (std::find(verbs.begin(), verbs.end(), v) == verbs.end()) verbs.push_back(v);
    }
  }
  std::sort(verbs.begin(), verbs.end());
  return verbs;
}

Emulator base_emulator() { return Emulator{}; }

AffordanceRule compile_rule(const dsl::AffordanceDecl& decl, const Emulator& em,
                            const std::optional<Binding>& binding, Provenance provenance) {
  const Taxonomy& tax = em.taxonomy;
  AffordanceRule rule;
  rule.id = em.rules.empty() ? 1 : em.rules.back().id + 1;
  rule.modality = decl.modality;
  rule.provenance = provenance;
  rule.installed_at = em.version + 1;
  rule.source = decl;

  Selector subject;
  if (decl.subject.is_specific()) {
    if (!binding) {
      throw Error(ErrorCode::UnresolvedReferent,
                  "specific subject '" + dsl::pretty_print(decl.subject) + "' is not bound");
    }
    tax.kind(binding->kind);
    subject.entity = binding->id;
    subject.kind = binding->kind;
    rule.scope = Scope::Specific;
    rule.depth = tax.depth(binding->kind);
  } else {
    tax.kind(decl.subject.noun);
    subject.kind = decl.subject.noun;
    subject.labels = decl.subject.adjectives;
    rule.scope = Scope::Generic;
    rule.depth = tax.depth(decl.subject.noun);
  }
  const bool can = decl.modality == Modality::Can;
  using K = Effect::Kind;

  struct Visitor {
    AffordanceRule& rule;
    const Selector& subject;
    const Taxonomy& tax;
    bool can;

    void operator()(const dsl::PortableFrame&) const {
      rule.pattern.verbs = {dsl::kVerbDrop, dsl::kVerbPutIn, dsl::kVerbTake};
      rule.pattern.patient = subject;
      if (can) {
        for (const auto& v : rule.pattern.verbs) rule.effects[v] = builtin_effects(v);
      }
    }
    void operator()(const dsl::WearFrame& w) const {
      rule.pattern.verbs = {dsl::kVerbWear};
      rule.pattern.patient = subject;
      if (!can) return;
      rule.guards = {Guard{Guard::Kind::NotWorn, ActionRole::Patient, {}, 0},
                     Guard{Guard::Kind::NoWornAtOrAbove, ActionRole::Agent, w.slot, w.layer}};
      rule.effects[dsl::kVerbWear] = {
          Effect{K::Detach, ActionRole::Patient, ActionRole::Target, {}, true, 0},
          Effect{K::SetFlag, ActionRole::Patient, ActionRole::Target, kHeldFlag, false, 0},
          Effect{K::WearOn, ActionRole::Patient, ActionRole::Agent, w.slot, true, w.layer}};
    }
    void operator()(const dsl::HoldFrame& h) const {
      if (h.limit.dimension != Dimension::Mass) {
        throw Error(ErrorCode::DimensionMismatch, "capacity limit must be a mass");
      }
      const PropertySchema* weight = tax.property(kWeight);
      if (!weight) throw Error(ErrorCode::UnknownProperty, "unknown property 'weight'");
      if (weight->type != PropertyType::Mass) {
        throw Error(ErrorCode::DimensionMismatch, "property 'weight' is not a mass");
      }
      rule.licensing = false;
      rule.pattern.verbs = {dsl::kVerbPutIn};
      rule.pattern.target = subject;
      if (!can) return;
      rule.guards = {Guard{Guard::Kind::NotFlag, ActionRole::Target, h.event, 0}};
      rule.effects[dsl::kVerbPutIn] = builtin_effects(dsl::kVerbPutIn);
      rule.events = {EventClause{
          kWeight, h.limit, h.event,
          {Effect{K::SetFlag, ActionRole::Target, ActionRole::Target, h.event, true, 0},
           Effect{K::Spill, ActionRole::Target, ActionRole::Target, {}, true, 0}}}};
    }
    void operator()(const dsl::VerbFrame& v) const {
      tax.kind(v.patient_kind);
      rule.pattern.verbs = {v.verb};
      rule.pattern.agent = subject;
      rule.pattern.patient = Selector{std::nullopt, v.patient_kind, {}};
      if (can) rule.effects[v.verb] = builtin_effects(v.verb);
    }
  };
  std::visit(Visitor{rule, subject, tax, can}, decl.frame);
  return rule;
}

Emulator eco_apply(const Emulator& em, const dsl::Statement& stmt,
                   const std::optional<Binding>& binding, Provenance provenance) {
  Emulator next = em;
  struct Visitor {
    Emulator& next;
    const std::optional<Binding>& binding;
    Provenance provenance;

    void operator()(const dsl::KindDecl& k) const { next.taxonomy.add_kind(k.kind, k.parent); }
    void operator()(const dsl::PropertyDecl& p) const {
      next.taxonomy.declare_property(p.property, p.type, p.kind);
    }
    void operator()(const dsl::DefaultDecl& d) const {
      next.taxonomy.set_default(d.subject.noun, d.property, d.value);
    }
    void operator()(const dsl::AffordanceDecl& d) const {
      AffordanceRule rule = compile_rule(d, next, binding, provenance);
      if (const auto* hold = std::get_if<dsl::HoldFrame>(&d.frame)) {
        next.taxonomy.declare_property(hold->event, PropertyType::Flag, kRootKind);
        next.event_flags[hold->event] = hold->event;
      }
      for (const auto& existing : next.rules) {
        if (existing.source == rule.source && existing.pattern == rule.pattern) {
          next.warnings.push_back("DuplicateRule: '" + dsl::pretty_print(dsl::Statement{d, {}}) +
                                  "' repeats rule " + std::to_string(existing.id));
          break;
        }
      }
      next.rules.push_back(std::move(rule));
    }
    [[noreturn]] void reject() const {
      throw Error(ErrorCode::NotEcoStatement, "statement does not modify the emulator");
    }
    void operator()(const dsl::Fact&) const { reject(); }
    void operator()(const dsl::Command&) const { reject(); }
    void operator()(const dsl::Query&) const { reject(); }
    void operator()(const dsl::GoalSpec&) const { reject(); }
  };
  std::visit(Visitor{next, binding, provenance}, stmt.body);
  next.version = em.version + 1;
  return next;
}

namespace {

std::optional<EntityId> role_id(const GroundedAction& act, ActionRole role) {
  switch (role) {
    case ActionRole::Agent: return act.agent;
    case ActionRole::Patient: return act.patient;
    case ActionRole::Target: return act.target;
  }
  return std::nullopt;
}

bool selector_matches(const Taxonomy& tax, const WorldState& state, const Selector& sel,
                      std::optional<EntityId> id) {
  if (!id) return false;
  if (sel.entity) return *sel.entity == *id;
  const Entity& e = entity(state, *id);
  if (!tax.is_a(e.kind, sel.kind)) return false;
  return std::all_of(sel.labels.begin(), sel.labels.end(), [&](const std::string& l) {
    return std::find(e.labels.begin(), e.labels.end(), l) != e.labels.end();
  });
}

bool pattern_matches(const Taxonomy& tax, const WorldState& state, const ActionPattern& p,
                     const GroundedAction& act) {
  if (std::find(p.verbs.begin(), p.verbs.end(), act.verb) == p.verbs.end()) return false;
  if (p.agent && !selector_matches(tax, state, *p.agent, act.agent)) return false;
  if (p.patient && !selector_matches(tax, state, *p.patient, act.patient)) return false;
  if (p.target && !selector_matches(tax, state, *p.target, act.target)) return false;
  return true;
}

bool guard_holds(const Taxonomy& tax, const WorldState& state, const Guard& g,
                 const GroundedAction& act) {
  auto id = role_id(act, g.role);
  if (!id) return true;
  switch (g.kind) {
    case Guard::Kind::NotFlag: return !effective_flag(tax, state, *id, g.name);
    case Guard::Kind::NotWorn: return !wearing_of(state, *id).has_value();
    case Guard::Kind::NoWornAtOrAbove:
      for (const auto& r : worn_by(state, *id)) {
        if (r.slot == g.name && r.layer >= g.layer) return false;
      }
      return true;
  }
  return true;
}

const Guard* failing_guard(const Taxonomy& tax, const WorldState& state,
                           const AffordanceRule& rule, const GroundedAction& act) {
  for (const auto& g : rule.guards) {
    if (!guard_holds(tax, state, g, act)) return &g;
  }
  return nullptr;
}

std::optional<std::string> structural_problem(const Emulator& em, const WorldState& state,
                                              const GroundedAction& act) {
  const Taxonomy& tax = em.taxonomy;
  const std::string& v = act.verb;
  const bool persons = tax.has_kind(kPersonKind);
  if (act.agent && !(persons && tax.is_a(entity(state, *act.agent).kind, kPersonKind))) {
    return "agent is not a person";
  }
  if (!act.agent && persons) {
    for (const auto& [id, e] : state.entities) {
      if (tax.is_a(e.kind, kPersonKind)) return "someone must do it";
    }
  }
  if (act.agent && *act.agent == act.patient) return "agent and patient coincide";
  if (act.target && *act.target == act.patient) return "patient and target coincide";
  if ((v == dsl::kVerbPutIn) != act.target.has_value()) {
    return v == dsl::kVerbPutIn ? "put-in needs a target" : v + " takes no target";
  }
  bool worn = wearing_of(state, act.patient).has_value();
  if (v == dsl::kVerbPutIn) {
    const Entity& target = entity(state, *act.target);
    if (!tax.is_a(target.kind, kContainerKind)) return "target is not a container";
    if (container_of(state, act.patient) == act.target) return "already inside the target";
    if (inside_transitively(state, *act.target, act.patient)) return "target is inside the patient";
    if (worn) return "patient is being worn";
    if (act.agent && inside_transitively(state, *act.agent, act.patient)) {
      return "agent is inside the patient";
    }
    return std::nullopt;
  }
  if (v == dsl::kVerbTake) {
    if (effective_flag(tax, state, act.patient, kHeldFlag)) return "already held";
    if (worn) return "patient is being worn";
    if (act.agent && inside_transitively(state, *act.agent, act.patient)) {
      return "agent is inside the patient";
    }
    return std::nullopt;
  }
  if (v == dsl::kVerbDrop) {
    if (!effective_flag(tax, state, act.patient, kHeldFlag)) return "not held";
    return std::nullopt;
  }
  if (v == dsl::kVerbWear) {
    if (!act.agent) return "wearing needs an agent";
    if (worn) return "already worn";
    return std::nullopt;
  }
  for (const auto& ev : state.events) {
    if (ev.name == v && ev.subject == act.patient) return "already done";
  }
  return std::nullopt;
}

bool threshold_exceeded(const Taxonomy& tax, const WorldState& state, const EventClause& clause,
                        const GroundedAction& act) {
  if (!act.target) return false;
  Quantity total = total_quantity(tax, state, *act.target, clause.property) +
                   aggregate_quantity(tax, state, act.patient, clause.property);
  return compare(total, clause.limit) > 0;
}

struct Assessment {
  Verdict verdict;
  const AffordanceRule* governing = nullptr;  // licensing rule whose effects run
};

Assessment assess(const Emulator& em, const WorldState& state, const GroundedAction& act) {
  const Taxonomy& tax = em.taxonomy;
  for (auto role : {ActionRole::Agent, ActionRole::Patient, ActionRole::Target}) {
    if (auto id = role_id(act, role); id && !has_entity(state, *id)) {
      return {Deny{DenyReason::Inapplicable, std::nullopt,
                   "unknown entity #" + std::to_string(*id)},
              nullptr};
    }
  }
  std::vector<const AffordanceRule*> matching;
  for (const auto& r : em.rules) {
    if (pattern_matches(tax, state, r.pattern, act)) matching.push_back(&r);
  }
  auto better = [](const AffordanceRule* a, const AffordanceRule* b) { return outranks(*a, *b); };
  std::sort(matching.begin(), matching.end(), better);

  const AffordanceRule* top = nullptr;
  bool licensed = false;
  for (const AffordanceRule* r : matching) {
    bool candidate = false;
    if (r->modality == Modality::Can && r->licensing) {
      licensed = true;
      candidate = true;
    } else if (r->modality == Modality::Cannot) {
      candidate = failing_guard(tax, state, *r, act) == nullptr;
    }
    if (candidate && !top) top = r;
  }
  if (!licensed) {
    return {Deny{DenyReason::NoAffordance, std::nullopt, "no rule affords " + act.verb}, nullptr};
  }
  if (top->modality == Modality::Cannot) {
    return {Deny{DenyReason::Prohibited, top->id,
                 "prohibited by rule " + std::to_string(top->id)},
            nullptr};
  }
  if (const Guard* g = failing_guard(tax, state, *top, act)) {
    return {Deny{DenyReason::Prohibited, top->id,
                 "rule " + std::to_string(top->id) + " guard fails: " + guard_sexpr(*g)},
            nullptr};
  }
  for (const AffordanceRule* r : matching) {
    if (r->modality != Modality::Can || r->licensing) continue;
    if (const Guard* g = failing_guard(tax, state, *r, act)) {
      return {Deny{DenyReason::Prohibited, r->id,
                   "rule " + std::to_string(r->id) + " guard fails: " + guard_sexpr(*g)},
              nullptr};
    }
  }
  if (auto problem = structural_problem(em, state, act)) {
    return {Deny{DenyReason::Inapplicable, std::nullopt, *problem}, nullptr};
  }
  Permit permit;
  const AffordanceRule* cited = nullptr;
  for (const AffordanceRule* r : matching) {
    if (r->modality != Modality::Can) continue;
    if (r != top && r->licensing) continue;  // outranked alternatives do not contribute
    if (!cited) cited = r;
    if (permit.event) continue;
    for (const auto& clause : r->events) {
      if (threshold_exceeded(tax, state, clause, act)) {
        permit.event = clause;
        break;
      }
    }
  }
  permit.rule = cited->id;
  return {permit, top};
}

WorldState set_flag(const Taxonomy& tax, const WorldState& state, EntityId id,
                    const std::string& flag, bool value) {
  WorldState next = state;
  next.entities.at(id).props.erase(flag);
  if (effective_flag(tax, next, id, flag) != value) {
    next = set_property(tax, next, id, flag, value);
  }
  return next;
}

WorldState run_effect(const Taxonomy& tax, const WorldState& state, const Effect& e,
                      const GroundedAction& act) {
  auto subject = role_id(act, e.subject);
  auto object = role_id(act, e.object);
  switch (e.kind) {
    case Effect::Kind::Detach: return remove_from_container(state, *subject);
    case Effect::Kind::PlaceIn: return place_in(state, *subject, *object);
    case Effect::Kind::SetFlag: return set_flag(tax, state, *subject, e.name, e.value);
    case Effect::Kind::WearOn:
      return add_relation(state,
                          Relation{RelationKind::WornBy, *subject, *object, e.name, e.layer});
    case Effect::Kind::RecordEvent:
      return append_event(state, EventRecord{e.name, *subject});
    case Effect::Kind::Spill: {
      auto outer = container_of(state, *subject);
      WorldState next = state;
      for (EntityId child : contents_of(state, *subject)) {
        next = outer ? place_in(next, child, *outer) : remove_from_container(next, child);
      }
      return next;
    }
  }
  return state;
}

}  // namespace

Verdict check_action(const Emulator& em, const WorldState& state, const GroundedAction& act) {
  return assess(em, state, act).verdict;
}

ApplyOutcome apply(const Emulator& em, const WorldState& state, const GroundedAction& act) {
  Assessment a = assess(em, state, act);
  if (const Deny* d = std::get_if<Deny>(&a.verdict)) return ActionFailure{*d};
  const Permit& permit = std::get<Permit>(a.verdict);
  const Taxonomy& tax = em.taxonomy;
  WorldState next = state;
  auto it = a.governing->effects.find(act.verb);
  const std::vector<Effect> effects =
      it != a.governing->effects.end() ? it->second : builtin_effects(act.verb);
  for (const auto& e : effects) next = run_effect(tax, next, e, act);
  if (permit.event) {
    for (const auto& e : permit.event->effects) next = run_effect(tax, next, e, act);
    next = append_event(next, EventRecord{permit.event->event, *act.target});
  }
  return next;
}

std::string guard_sexpr(const Guard& g) {
  switch (g.kind) {
    case Guard::Kind::NotFlag:
      return std::string("(not (flag ") + role_var(g.role) + " " + g.name + "))";
    case Guard::Kind::NotWorn: return std::string("(not (worn ") + role_var(g.role) + "))";
    case Guard::Kind::NoWornAtOrAbove:
      return std::string("(not (wears-at-or-above ") + role_var(g.role) + " " + g.name + " " +
             std::to_string(g.layer) + "))";
  }
  return "?";
}

std::string effect_sexpr(const Effect& e) {
  switch (e.kind) {
    case Effect::Kind::Detach: return std::string("(detach ") + role_var(e.subject) + ")";
    case Effect::Kind::PlaceIn:
      return std::string("(in ") + role_var(e.subject) + " " + role_var(e.object) + ")";
    case Effect::Kind::SetFlag:
      return std::string("(set-flag ") + role_var(e.subject) + " " + e.name + " " +
             (e.value ? "true" : "false") + ")";
    case Effect::Kind::WearOn:
      return std::string("(worn-by ") + role_var(e.subject) + " " + role_var(e.object) + " " +
             e.name + " " + std::to_string(e.layer) + ")";
    case Effect::Kind::RecordEvent:
      return "(event " + e.name + " " + role_var(e.subject) + ")";
    case Effect::Kind::Spill: return std::string("(spill ") + role_var(e.subject) + ")";
  }
  return "?";
}

std::string event_sexpr(const EventClause& e) {
  std::string out = "(when (> (+ (total ?target " + e.property + ") (" + e.property +
                    " ?patient)) " + std::to_string(e.limit.magnitude) + ") (event " + e.event +
                    " ?target)";
  for (const auto& eff : e.effects) out += " " + effect_sexpr(eff);
  return out + ")";
}

}  // namespace ecosim
