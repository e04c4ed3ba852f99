#include "ecosim/report.hpp"

#include "ecosim/parser.hpp"

namespace ecosim {

namespace {

dsl::NounPhrase definite(const WorldState& state, EntityId id) {
  const Entity& e = entity(state, id);
  return dsl::NounPhrase{dsl::Determiner::Definite, 1, e.labels, e.kind};
}

Json optional_id(const std::optional<EntityId>& id) { return id ? Json(*id) : Json(nullptr); }

}  // namespace

std::string action_label(const WorldState& state, const GroundedAction& act) {
  dsl::Command cmd;
  cmd.verb = act.verb;
  cmd.patients.push_back(definite(state, act.patient));
  if (act.target) cmd.target = definite(state, *act.target);
  return dsl::pretty_print(cmd);
}

Json to_json(const GroundedAction& act) {
  return Json{{"verb", act.verb},
              {"agent", optional_id(act.agent)},
              {"patient", act.patient},
              {"target", optional_id(act.target)}};
}

Json to_json(const WorldState& state, const GroundedAction& act) {
  Json j = to_json(act);
  j["label"] = action_label(state, act);
  return j;
}

Json to_json(const StepRecord& r) {
  Json j;
  j["index"] = r.index;
  j["role"] = dsl::to_string(r.role);
  j["text"] = r.text;
  j["emulator_version"] = r.emulator_version;
  j["state_hash"] = r.state_hash;
  Json events = Json::array();
  for (const auto& e : r.events) events.push_back(ecosim::to_json(e));
  j["events"] = events;
  Json actions = Json::array();
  for (const auto& a : r.actions) actions.push_back(to_json(a));
  j["actions"] = actions;
  j["answer"] = r.answer ? Json(*r.answer) : Json(nullptr);
  j["failure"] = r.failure ? Json(*r.failure) : Json(nullptr);
  j["warnings"] = r.warnings;
  j["synthesized"] = r.synthesized;
  return j;
}

Json to_json(const Trace& t) {
  Json steps = Json::array();
  for (const auto& r : t.steps) steps.push_back(to_json(r));
  return Json{{"steps", steps},
              {"halted", t.halted},
              {"emulator_version", t.final.em.version},
              {"step", t.final.step},
              {"state_hash", hash_hex(state_hash(t.final.state))},
              {"final_state", ecosim::to_json(t.final.state)}};
}

Json to_json(const Answer& a) {
  const char* kind = "no";
  switch (a.kind) {
    case Answer::Kind::Yes: kind = "yes"; break;
    case Answer::Kind::No: kind = "no"; break;
    case Answer::Kind::Value: kind = "value"; break;
    case Answer::Kind::Blocked: kind = "blocked"; break;
  }
  Json j{{"kind", kind}, {"text", to_string(a)}};
  j["value"] = a.value ? ecosim::to_json(*a.value) : Json(nullptr);
  return j;
}

Json to_json(const WorldState& s0, const PlanResult& p) {
  if (const auto* np = std::get_if<NoPlan>(&p)) {
    return Json{{"plan", nullptr},
                {"reason", to_string(np->reason)},
                {"detail", np->detail},
                {"expanded", np->expanded}};
  }
  const Plan& plan = std::get<Plan>(p);
  Json steps = Json::array();
  // Labels use the initial state's entity descriptions; kinds and labels never change.
  for (const auto& a : plan.actions) steps.push_back(to_json(s0, a));
  return Json{{"plan", steps}, {"length", plan.length}, {"expanded", plan.expanded}};
}

}  // namespace ecosim
