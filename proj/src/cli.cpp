#include "ecosim/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "ecosim/error.hpp"
#include "ecosim/knowledge.hpp"
#include "ecosim/lexer.hpp"
#include "ecosim/parser.hpp"
#include "ecosim/report.hpp"
#include "ecosim/scenario.hpp"

namespace ecosim {

namespace {

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Loaded {
  ScenarioFile file;
  Emulator prelude;
};

// Reads, parses and loads the prelude; on failure prints and returns nullopt.
std::optional<Loaded> load_scenario(const std::string& path, const CliOptions& opts,
                                    std::ostream& err) {
  auto content = read_file(path);
  if (!content) {
    err << path << ": cannot read file\n";
    return std::nullopt;
  }
  try {
    Loaded l;
    l.file = parse_scenario(*content, path);
    l.prelude = load_prelude(l.file.prelude, library_search_path(opts.lib_path));
    return l;
  } catch (const Error& e) {
    err << (e.code() == ErrorCode::ParseError ? "" : path + ": ") << e.what() << "\n";
    return std::nullopt;
  }
}

void print_record(std::ostream& out, const StepRecord& r) {
  out << "  [" << r.index << "] " << dsl::to_string(r.role) << ": " << r.text;
  if (r.synthesized) out << " (introduced)";
  out << "\n";
  for (const auto& a : r.actions) out << "      did " << to_string(a) << "\n";
  for (const auto& e : r.events) out << "      event " << e.name << " #" << e.subject << "\n";
  for (const auto& w : r.warnings) out << "      warning " << w << "\n";
  if (r.answer) out << "      => " << *r.answer << "\n";
  if (r.failure) out << "      !! " << *r.failure << "\n";
}

std::string evaluate_assert(const Session& s, const dsl::Statement& stmt) {
  try {
    if (const auto* q = std::get_if<dsl::Query>(&stmt.body)) return to_string(evaluate_query(s, *q));
    return check_goal(s, std::get<dsl::GoalSpec>(stmt.body)) ? "yes" : "no";
  } catch (const Error& e) {
    return std::string("error: ") + to_string(e.code()) + ": " + e.what();
  }
}

}  // namespace

int cmd_run(const std::string& path, const CliOptions& opts, std::ostream& out, std::ostream& err) {
  auto loaded = load_scenario(path, opts, err);
  if (!loaded) return 2;
  const ScenarioFile& file = loaded->file;
  Trace trace = run_scenario(loaded->prelude, file.text,
                             opts.continue_on_error ? RunMode::Continue : RunMode::Halt);

  Json asserts = Json::array();
  int passed = 0;
  for (const auto& a : file.asserts) {
    std::string actual = evaluate_assert(trace.final, a.query);
    bool ok = answer_matches(a.expected, actual);
    passed += ok ? 1 : 0;
    asserts.push_back(Json{{"line", a.line},
                           {"query", a.query_text},
                           {"expected", a.expected},
                           {"actual", actual},
                           {"pass", ok}});
  }
  int code = (trace.halted || passed != static_cast<int>(file.asserts.size())) ? 1 : 0;

  if (opts.json) {
    out << Json{{"file", path},
                {"prelude", file.prelude},
                {"trace", to_json(trace)},
                {"assertions", asserts},
                {"exit", code}}
               .dump(2)
        << "\n";
    return code;
  }
  out << path << ": prelude [";
  for (std::size_t i = 0; i < file.prelude.size(); ++i) out << (i ? ", " : "") << file.prelude[i];
  out << "] emulator v" << loaded->prelude.version << "\n";
  for (const auto& r : trace.steps) print_record(out, r);
  if (trace.halted) out << "halted at step " << trace.steps.back().index << "\n";
  for (const auto& a : asserts) {
    out << "ASSERT line " << a["line"].get<int>() << ": " << a["query"].get<std::string>()
        << " expected " << a["expected"].get<std::string>() << ", got "
        << a["actual"].get<std::string>() << ": " << (a["pass"].get<bool>() ? "PASS" : "FAIL")
        << "\n";
  }
  out << passed << "/" << file.asserts.size() << " assertions passed; final state "
      << hash_hex(state_hash(trace.final.state)) << "\n";
  return code;
}

int cmd_plan(const std::string& path, const std::optional<std::string>& goal_text,
             const CliOptions& opts, std::ostream& out, std::ostream& err) {
  auto loaded = load_scenario(path, opts, err);
  if (!loaded) return 2;
  std::optional<dsl::GoalSpec> goal;
  if (goal_text) {
    try {
      dsl::Statement g = dsl::parse_utterance(*goal_text);
      if (const auto* spec = std::get_if<dsl::GoalSpec>(&g.body)) goal = *spec;
    } catch (const dsl::ParseError& e) {
      err << "goal:1:" << e.span().begin + 1 << ": " << e.what() << "\n";
      return 2;
    }
    if (!goal) {
      err << "goal: expected 'Goal: ...'\n";
      return 2;
    }
  }
  std::vector<dsl::Statement> text;
  for (const auto& s : loaded->file.text) {
    if (const auto* spec = std::get_if<dsl::GoalSpec>(&s.body)) {
      if (!goal_text) goal = *spec;
    } else {
      text.push_back(s);
    }
  }
  if (!goal) {
    err << path << ": no goal given\n";
    return 2;
  }
  Trace trace = run_scenario(loaded->prelude, text, RunMode::Halt);
  if (trace.halted) {
    err << path << ": scenario halted: " << trace.steps.back().failure.value_or("?") << "\n";
    return 1;
  }
  PlanResult result;
  try {
    result = plan(trace.final, *goal, opts.depth_limit);
  } catch (const Error& e) {
    err << path << ": " << to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  }
  const WorldState& s0 = trace.final.state;
  if (opts.json) {
    Json j = to_json(s0, result);
    j["goal"] = dsl::pretty_print(dsl::Statement{*goal, {}});
    j["depth_limit"] = opts.depth_limit;
    out << j.dump(2) << "\n";
  } else if (const auto* p = std::get_if<Plan>(&result)) {
    out << "plan: " << p->length << " step" << (p->length == 1 ? "" : "s") << ", " << p->expanded
        << " nodes expanded\n";
    for (std::size_t i = 0; i < p->actions.size(); ++i) {
      out << "  " << i + 1 << ". " << action_label(s0, p->actions[i]) << "   "
          << to_string(p->actions[i]) << "\n";
    }
  } else {
    const auto& np = std::get<NoPlan>(result);
    out << "no plan: " << to_string(np.reason) << " (" << np.detail << "), " << np.expanded
        << " nodes expanded\n";
  }
  return std::holds_alternative<Plan>(result) ? 0 : 1;
}

// --- repl ------------------------------------------------------------------------

namespace {

// Splits `"a b" "c"` into quoted arguments.
std::vector<std::string> quoted_args(const std::string& s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (true) {
    i = s.find('"', i);
    if (i == std::string::npos) break;
    std::size_t j = s.find('"', i + 1);
    if (j == std::string::npos) break;
    out.push_back(s.substr(i + 1, j - i - 1));
    i = j + 1;
  }
  return out;
}

void print_error(std::ostream& out, const Error& e, const std::string& line) {
  if (const auto* pe = dynamic_cast<const dsl::ParseError*>(&e)) {
    out << "parse error at column " << pe->span().begin + 1 << ": " << pe->what() << "\n";
    out << "  " << line << "\n  " << std::string(pe->span().begin, ' ') << "^\n";
    return;
  }
  out << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
}

}  // namespace

int cmd_repl(std::istream& in, std::ostream& out, const CliOptions& opts) {
  Session session;
  try {
    session = new_session(load_prelude(opts.prelude, library_search_path(opts.lib_path)));
  } catch (const Error& e) {
    out << "error: " << e.what() << "\n";
    return 2;
  }
  std::vector<Session> history;
  out << "ecosim: prelude loaded, emulator v" << session.em.version << ". :quit to leave.\n";
  std::string line;
  while (out << "> " << std::flush, std::getline(in, line)) {
    std::string t = line;
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
    std::size_t lead = t.find_first_not_of(" \t");
    if (lead == std::string::npos) continue;
    t = t.substr(lead);
    try {
      if (t == ":quit" || t == ":q") break;
      if (t == ":state") {
        out << to_json(session.state).dump(2) << "\n";
        out << "hash " << hash_hex(state_hash(session.state)) << ", emulator v" << session.em.version
            << ", step " << session.step << "\n";
      } else if (t == ":affordances") {
        auto acts = derive_affordances(session.em, session.state);
        for (const auto& a : acts) out << "  " << action_label(session.state, a) << "   " << to_string(a) << "\n";
        if (acts.empty()) out << "  (none)\n";
      } else if (t == ":rules") {
        for (const auto& r : session.em.rules) {
          out << "  " << r.id << " [" << to_string(r.provenance) << ", " << to_string(r.scope)
              << ", v" << r.installed_at << "] "
              << dsl::pretty_print(dsl::Statement{r.source, {}}) << "\n";
        }
      } else if (t == ":undo") {
        if (history.empty()) {
          out << "nothing to undo\n";
        } else {
          session = history.back();
          history.pop_back();
          out << "restored step " << session.step << ", hash "
              << hash_hex(state_hash(session.state)) << "\n";
        }
      } else if (t.rfind(":whatif", 0) == 0) {
        auto args = quoted_args(t);
        if (args.size() != 2) {
          out << "usage: :whatif \"COMMANDS\" \"QUERY\"\n";
          continue;
        }
        std::vector<dsl::Command> cmds;
        for (const auto& s : dsl::parse_text(args[0])) {
          const auto* c = std::get_if<dsl::Command>(&s.body);
          if (!c) throw Error(ErrorCode::ParseError, "what-if steps must be commands");
          cmds.push_back(*c);
        }
        dsl::Statement q = dsl::parse_utterance(args[1]);
        const auto* query = std::get_if<dsl::Query>(&q.body);
        if (!query) throw Error(ErrorCode::ParseError, "the second argument must be a question");
        Answer a = query->what_if ? evaluate_query(session, *query)
                                  : what_if(session, cmds, query->body);
        out << to_string(a) << "\n";
      } else if (t[0] == ':') {
        out << "unknown command " << t << "\n";
      } else {
        for (const auto& stmt : dsl::parse_text(t)) {
          StepOutcome step = run_step(session, stmt);
          history.push_back(session);
          session = std::move(step.session);
          for (const auto& r : step.records) print_record(out, r);
        }
      }
    } catch (const Error& e) {
      print_error(out, e, t);
    }
  }
  return 0;
}

}  // namespace ecosim
