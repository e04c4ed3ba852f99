#include <random>
#include <regex>

#include "httplib.h"

#include "ecosim/cli.hpp"
#include "ecosim/error.hpp"
#include "ecosim/knowledge.hpp"
#include "ecosim/lexer.hpp"
#include "ecosim/parser.hpp"
#include "ecosim/report.hpp"

namespace ecosim {

namespace {

HttpReply error_reply(int status, const std::string& code, const std::string& message) {
  return HttpReply{status, Json{{"error", code}, {"message", message}}};
}

HttpReply parse_error_reply(const dsl::ParseError& e) {
  HttpReply r = error_reply(422, "ParseError", e.what());
  r.body["failure"] = dsl::to_string(e.failure());
  r.body["span"] = {{"begin", e.span().begin}, {"end", e.span().end}};
  r.body["expected"] = e.expected();
  return r;
}

void stamp(Json& body, const Session& s) {
  body["emulator_version"] = s.em.version;
  body["step"] = s.step;
}

std::optional<Json> parse_body(const std::string& body) {
  if (body.empty()) return Json::object();
  Json j = Json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  return j;
}

std::string text_field(const Json& j, const char* key) {
  if (!j.contains(key)) return {};
  const Json& v = j.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string out;
    for (const auto& item : v) {
      if (item.is_string()) out += item.get<std::string>() + " ";
    }
    return out;
  }
  return {};
}

}  // namespace

Service::Service(CliOptions opts, std::chrono::seconds ttl) : opts_(std::move(opts)), ttl_(ttl) {}

std::size_t Service::session_count() {
  std::lock_guard lock(mu_);
  return sessions_.size();
}

void Service::sweep() {
  auto now = std::chrono::steady_clock::now();
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    std::unique_lock busy(it->second->busy, std::try_to_lock);
    if (busy.owns_lock() && now - it->second->last_used > ttl_) {
      busy.unlock();
      it = sessions_.erase(it);
    } else {
      ++it;
    }
  }
}

HttpReply Service::create(const std::string& body) {
  auto req = parse_body(body);
  if (!req) return error_reply(400, "BadRequest", "body must be a JSON object");
  std::vector<std::string> prelude = opts_.prelude;
  if (req->contains("prelude")) {
    prelude.clear();
    for (const auto& n : req->at("prelude")) {
      if (n.is_string()) prelude.push_back(n.get<std::string>());
    }
  }
  auto slot = std::make_shared<Slot>();
  try {
    slot->session = new_session(load_prelude(prelude, library_search_path(opts_.lib_path)));
  } catch (const Error& e) {
    return error_reply(422, to_string(e.code()), e.what());
  }
  slot->last_used = std::chrono::steady_clock::now();
  std::string id;
  {
    std::lock_guard lock(mu_);
    static thread_local std::mt19937_64 rng{std::random_device{}()};
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(rng() ^ (++counter_ * 0x9e3779b97f4a7c15ULL)));
    id = buf;
    sessions_[id] = slot;
  }
  HttpReply r{200, Json{{"session_id", id}, {"prelude", prelude}}};
  stamp(r.body, slot->session);
  return r;
}

HttpReply Service::handle(const std::string& method, const std::string& path,
                          const std::string& body) {
  if (path == "/session" && method == "POST") {
    {
      std::lock_guard lock(mu_);
      sweep();
    }
    return create(body);
  }
  static const std::regex route(R"(^/session/([0-9a-f]+)(/(utterance|state|affordances|whatif|rules|act))?$)");
  std::smatch m;
  if (!std::regex_match(path, m, route)) return error_reply(404, "NotFound", "no such endpoint");
  const std::string id = m[1];
  const std::string what = m[3];

  std::shared_ptr<Slot> slot;
  {
    std::lock_guard lock(mu_);
    sweep();
    auto it = sessions_.find(id);
    if (it == sessions_.end()) return error_reply(404, "UnknownSession", "no session " + id);
    slot = it->second;
  }
  std::unique_lock busy(slot->busy, std::try_to_lock);
  if (!busy.owns_lock()) {
    return error_reply(409, "SessionBusy", "another request on this session is in progress");
  }
  slot->last_used = std::chrono::steady_clock::now();
  if (busy_hook_) busy_hook_();
  Session& s = slot->session;

  auto reply = [&](Json body) {
    stamp(body, s);
    return HttpReply{200, std::move(body)};
  };
  auto req = parse_body(body);
  if (!req) return error_reply(400, "BadRequest", "body must be a JSON object");

  try {
    if (what.empty() && method == "DELETE") {
      Json out{{"deleted", id}};
      stamp(out, s);
      busy.unlock();
      std::lock_guard lock(mu_);
      sessions_.erase(id);
      return HttpReply{200, out};
    }
    if (what == "utterance" && method == "POST") {
      std::vector<dsl::Statement> stmts = dsl::parse_text(text_field(*req, "text"));
      Json records = Json::array();
      for (const auto& stmt : stmts) {
        StepOutcome step = run_step(s, stmt);
        s = std::move(step.session);
        for (const auto& r : step.records) records.push_back(to_json(r));
      }
      Json out{{"records", records}, {"state_hash", hash_hex(state_hash(s.state))}};
      out["record"] = records.empty() ? Json(nullptr) : records.back();
      return reply(std::move(out));
    }
    if (what == "state" && method == "GET") {
      return reply(Json{{"state", to_json(s.state)}, {"state_hash", hash_hex(state_hash(s.state))}});
    }
    if (what == "affordances" && method == "GET") {
      Json list = Json::array();
      for (const auto& a : derive_affordances(s.em, s.state)) list.push_back(to_json(s.state, a));
      return reply(Json{{"affordances", list}, {"state_hash", hash_hex(state_hash(s.state))}});
    }
    if (what == "rules" && method == "GET") {
      return reply(Json{{"rules", list_rules(s.em)}});
    }
    if (what == "whatif" && method == "POST") {
      std::vector<dsl::Command> cmds;
      for (const auto& stmt : dsl::parse_text(text_field(*req, "commands"))) {
        const auto* c = std::get_if<dsl::Command>(&stmt.body);
        if (!c) return error_reply(422, "NotACommand", "what-if steps must be commands");
        cmds.push_back(*c);
      }
      dsl::Statement q = dsl::parse_utterance(text_field(*req, "query"));
      const auto* query = std::get_if<dsl::Query>(&q.body);
      if (!query) return error_reply(422, "NotAQuery", "query must be a question");
      Answer a = query->what_if ? evaluate_query(s, *query) : what_if(s, cmds, query->body);
      return reply(Json{{"answer", to_json(a)}, {"state_hash", hash_hex(state_hash(s.state))}});
    }
    if (what == "act" && method == "POST") {
      GroundedAction act;
      act.verb = req->value("verb", std::string());
      act.patient = req->value("patient", EntityId{0});
      if (req->contains("agent") && !(*req)["agent"].is_null()) act.agent = (*req)["agent"].get<EntityId>();
      if (req->contains("target") && !(*req)["target"].is_null()) act.target = (*req)["target"].get<EntityId>();
      for (auto id : {std::optional<EntityId>(act.patient), act.agent, act.target}) {
        if (id && !has_entity(s.state, *id)) {
          return error_reply(422, "UnknownEntity", "no entity #" + std::to_string(*id));
        }
      }
      StepRecord r;
      r.index = s.step;
      r.role = dsl::Role::Do;
      r.text = action_label(s.state, act);
      r.actions = {act};
      ApplyOutcome outcome = apply(s.em, s.state, act);
      if (auto* next = std::get_if<WorldState>(&outcome)) {
        for (std::size_t i = s.state.events.size(); i < next->events.size(); ++i) {
          r.events.push_back(next->events[i]);
        }
        s.state = std::move(*next);
      } else {
        const Deny& d = std::get<ActionFailure>(outcome).deny;
        r.failure = to_string(act) + " denied: " + to_string(d.reason) + ": " + d.detail;
      }
      ++s.step;
      r.emulator_version = s.em.version;
      r.state_hash = hash_hex(state_hash(s.state));
      return reply(Json{{"records", Json::array({to_json(r)})}, {"record", to_json(r)},
                        {"state_hash", r.state_hash}});
    }
  } catch (const dsl::ParseError& e) {
    HttpReply r = parse_error_reply(e);
    stamp(r.body, s);
    return r;
  } catch (const Error& e) {
    HttpReply r = error_reply(422, to_string(e.code()), e.what());
    stamp(r.body, s);
    return r;
  }
  HttpReply r = error_reply(405, "MethodNotAllowed", method + " " + path);
  stamp(r.body, s);
  return r;
}

int serve(const std::string& host, int port, const CliOptions& opts) {
  Service service(opts);
  httplib::Server server;
  auto bridge = [&service](const httplib::Request& req, httplib::Response& res) {
    HttpReply r = service.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server.Post("/session", bridge);
  server.Post(R"(/session/.*)", bridge);
  server.Get(R"(/session/.*)", bridge);
  server.Delete(R"(/session/.*)", bridge);
  std::fprintf(stderr, "ecosim serving on http://%s:%d\n", host.c_str(), port);
  return server.listen(host, port) ? 0 : 1;
}

}  // namespace ecosim
