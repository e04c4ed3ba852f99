// Acceptance suite: one PASS/FAIL line per primary criterion.
#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "support.hpp"

#include "ecosim/error.hpp"
#include "ecosim/planner.hpp"
#include "ecosim/report.hpp"

using namespace ecosim;
using testing::ask;
using testing::brute_affordances;
using testing::fixture_w;
using testing::prelude;
using testing::stmt;

namespace fs = std::filesystem;

extern char** environ;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double s) {
  std::ostringstream o;
  o.precision(3);
  o << std::fixed << s << " s";
  return o.str();
}

// --- 1. watermelon what-if ----------------------------------------------------

Outcome watermelon_what_if() {
  auto t0 = Clock::now();
  Trace setup = testing::run({"core", "market"}, fixture_w(3, 0));
  if (setup.halted) return {false, "fixture set-up halted"};
  const Session& s = setup.final;
  std::string before = hash_hex(state_hash(s.state));
  std::vector<std::string> got, expect, replayed;
  for (int x = 0; x <= 3; ++x) {
    expect.push_back(9000 * x > 20000 ? "yes" : "no");  // arithmetic oracle
    std::string q = "Does the bag burst?";
    if (x > 0) {
      std::string cmds;
      for (int i = 0; i < x; ++i) cmds += std::string(i ? "; " : "") + "put a watermelon in the bag";
      q = "What if " + cmds + "? " + q;
    }
    got.push_back(ask(s, q));
    Trace real = testing::run({"core", "market"}, fixture_w(3, x));
    replayed.push_back(real.halted ? "halted" : ask(real.final, "Does the bag burst?"));
  }
  double dt = seconds_since(t0);
  auto join = [](const std::vector<std::string>& v) {
    std::string o;
    for (const auto& a : v) o += (o.empty() ? "" : ",") + a;
    return o;
  };
  bool ok = got == expect && replayed == expect && hash_hex(state_hash(s.state)) == before && dt < 1.0;
  return {ok, "answers {" + join(got) + "}, replay {" + join(replayed) + "}, expected {" +
                  join(expect) + "}, " + fmt(dt)};
}

// --- 2. clothing fixture through the binary -----------------------------------

Outcome clothing_fixture() {
  auto t0 = Clock::now();
  std::string cli = ECOSIM_TEST_CLI;
  std::string file = std::string(ECOSIM_TEST_FIXTURES) + "/clothing.eco";
  std::string lib = ECOSIM_TEST_LIB_DIR;
  std::vector<std::string> args{cli, "--lib-path", lib, "run", file};
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, 1, "/dev/null", O_WRONLY, 0);
  pid_t pid;
  int rc = posix_spawn(&pid, cli.c_str(), &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) return {false, "cannot start " + cli};
  int status = 0;
  waitpid(pid, &status, 0);
  double dt = seconds_since(t0);
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;

  // The affordance claims, checked in-process as well.
  Trace t = testing::run({"core", "clothing"},
                         "There is a red t-shirt. There is a leather jacket. "
                         "He put on a white t-shirt and blue jeans.");
  bool second_shirt = false, jacket = false;
  if (!t.halted) {
    for (const auto& a : derive_affordances(t.final.em, t.final.state)) {
      if (a.verb != dsl::kVerbWear) continue;
      const auto& kind = entity(t.final.state, a.patient).kind;
      second_shirt |= kind == "t-shirt";
      jacket |= kind == "jacket";
    }
  }
  bool ok = code == 0 && dt < 1.0 && !t.halted && !second_shirt && jacket;
  return {ok, "exit " + std::to_string(code) + ", second torso layer-1 offered: " +
                  (second_shirt ? "yes" : "no") + ", jacket offered: " + (jacket ? "yes" : "no") +
                  ", " + fmt(dt)};
}

// --- 3. eco/state separation ----------------------------------------------------

std::string random_scenario(std::mt19937_64& rng) {
  auto n = [&](int lo, int hi) { return std::to_string(lo + static_cast<int>(rng() % (hi - lo + 1))); };
  std::vector<std::function<std::string()>> eco{
      [] { return "All watermelons are portable."; },
      [] { return "All apples are portable."; },
      [] { return "All bags are portable."; },
      [&] { return "Bags can hold up to " + n(5, 30) + " kg before bursting."; },
      [&] { return "This bag can hold up to " + n(5, 30) + " kg before tearing."; },
      [] { return "A crate is a kind of container."; },
      [&] { return "The weight of an apple is usually " + n(100, 900) + " g."; },
      [] { return "Boxes cannot be carried."; },
      [] { return "A bag can be open."; },
      [] { return "Watermelons cannot be carried."; },
  };
  std::vector<std::function<std::string()>> facts{
      [] { return "There is a bag."; },
      [&] { return "There are " + n(2, 4) + " watermelons."; },
      [] { return "There is a box."; },
      [] { return "There is an apple."; },
      [&] { return "The weight of a watermelon is " + n(1, 12) + " kg."; },
      [&] { return "The weight of the bag is " + n(50, 500) + " g."; },
      [] { return "The bag is open."; },
  };
  std::vector<std::function<std::string()>> dos{
      [] { return "Put a watermelon in the bag."; },
      [] { return "Put the apple in the box."; },
      [] { return "Put the apple in the bag."; },
      [] { return "Put the bag in the box."; },
      [] { return "Take the apple."; },
      [] { return "Take a watermelon."; },
      [] { return "Drop the apple."; },
  };
  std::vector<std::function<std::string()>> queries{
      [] { return "Does the bag burst?"; },
      [] { return "What is the total weight in the bag?"; },
      [] { return "What if put a watermelon in the bag? Does the bag burst?"; },
      [] { return "How many watermelons are in the box?"; },
  };
  std::string text;
  int len = 4 + static_cast<int>(rng() % 14);
  for (int i = 0; i < len; ++i) {
    auto r = rng() % 10;
    auto& pool = r < 3 ? eco : r < 6 ? facts : r < 9 ? dos : queries;
    text += pool[rng() % pool.size()]() + " ";
  }
  return text;
}

Outcome eco_state_separation() {
  auto t0 = Clock::now();
  Emulator pre = prelude({"core", "market"});
  std::mt19937_64 rng(1000);
  int eco_steps = 0, do_steps = 0, violations = 0, replay_mismatch = 0;
  std::string first_violation;
  for (int i = 0; i < 1000; ++i) {
    std::string text = random_scenario(rng);
    auto stmts = dsl::parse_text(text);
    Trace a = run_scenario(pre, stmts, RunMode::Continue);
    Trace b = run_scenario(pre, stmts, RunMode::Continue);
    if (to_json(a).dump() != to_json(b).dump()) ++replay_mismatch;
    std::string hash = hash_hex(state_hash(new_world()));
    int version = pre.version;
    for (const auto& r : a.steps) {
      bool bad = false;
      if (r.role == dsl::Role::Eco) {
        ++eco_steps;
        bad = r.state_hash != hash;
      } else if (r.role == dsl::Role::Do) {
        ++do_steps;
        bad = r.emulator_version != version;
      } else if (r.role == dsl::Role::Query) {
        bad = r.state_hash != hash || r.emulator_version != version;
      }
      if (bad && violations++ == 0) first_violation = "scenario " + std::to_string(i) + " step " + std::to_string(r.index);
      hash = r.state_hash;
      version = r.emulator_version;
    }
  }
  double dt = seconds_since(t0);
  bool ok = violations == 0 && replay_mismatch == 0;
  std::string detail = "1000 scenarios, " + std::to_string(eco_steps) + " eco steps, " +
                       std::to_string(do_steps) + " do steps, " + std::to_string(violations) +
                       " violations, " + std::to_string(replay_mismatch) + " replay mismatches, " + fmt(dt);
  if (!first_violation.empty()) detail += "; first at " + first_violation;
  return {ok, detail};
}

// --- 4. affordance soundness and completeness ---------------------------------

Emulator affordance_emulator() {
  Emulator em = prelude({"core", "market", "clothing"});
  for (const char* s : {"All watermelons are portable.", "All bags are portable.",
                        "Bags can hold up to 20 kg before bursting.", "A person can eat watermelons."}) {
    em = eco_apply(em, stmt(s));
  }
  return em;
}

Outcome affordance_exhaustive() {
  auto t0 = Clock::now();
  Emulator em = affordance_emulator();
  const std::vector<std::string> pool{"bag", "watermelon", "person", "t-shirt", "jacket"};
  std::vector<std::vector<std::string>> worlds;
  std::vector<std::string> cur;
  std::function<void(std::size_t)> gen = [&](std::size_t from) {
    if (!cur.empty()) worlds.push_back(cur);
    if (cur.size() == 6) return;
    for (std::size_t k = from; k < pool.size(); ++k) {
      cur.push_back(pool[k]);
      gen(k);
      cur.pop_back();
    }
  };
  gen(0);

  std::mt19937_64 rng(4);
  std::size_t states = 0, checked = 0, unsound = 0, incomplete = 0;
  std::string first;
  for (const auto& kinds : worlds) {
    WorldState base = new_world();
    for (const auto& k : kinds) base = add_entity(em.taxonomy, base, k).first;
    base = set_kind_default(em.taxonomy, base, "watermelon", "weight", Quantity::kilograms(9));
    // The initial world plus two random walks of up to six permitted actions.
    std::vector<WorldState> sample{base};
    for (int walk = 0; walk < 2; ++walk) {
      WorldState s = base;
      for (int step = 0; step < 6; ++step) {
        auto acts = derive_affordances(em, s);
        if (acts.empty()) break;
        s = std::get<WorldState>(apply(em, s, acts[rng() % acts.size()]));
        sample.push_back(s);
      }
    }
    for (const auto& s : sample) {
      ++states;
      auto derived = derive_affordances(em, s);
      std::set<GroundedAction> permitted(derived.begin(), derived.end());
      std::vector<std::optional<EntityId>> opt{std::nullopt};
      for (const auto& [id, e] : s.entities) opt.push_back(id);
      for (const auto& verb : known_verbs(em))
        for (const auto& agent : opt)
          for (const auto& [patient, e] : s.entities)
            for (const auto& target : opt) {
              GroundedAction a{verb, agent, patient, target};
              ++checked;
              bool applied = std::holds_alternative<WorldState>(apply(em, s, a));
              bool listed = permitted.count(a) != 0;
              if (listed && !applied) ++unsound;
              if (!listed && applied) ++incomplete;
              if (listed != applied && first.empty()) first = to_string(a);
            }
    }
  }
  double dt = seconds_since(t0);
  std::string detail = std::to_string(worlds.size()) + " worlds, " + std::to_string(states) +
                       " states, " + std::to_string(checked) + " grounded actions, " +
                       std::to_string(unsound) + " unsound, " + std::to_string(incomplete) +
                       " incomplete, " + fmt(dt);
  if (!first.empty()) detail += "; first mismatch " + first;
  return {unsound == 0 && incomplete == 0, detail};
}

// --- 5. planner optimality ------------------------------------------------------

// Distinct states reachable from `s`, capped. Only a size guard; the oracle below stays brute force.
std::size_t reachable(const Session& s, std::size_t cap) {
  std::set<std::string> seen{canonical_json(s.state)};
  std::vector<WorldState> frontier{s.state};
  while (!frontier.empty() && seen.size() <= cap) {
    std::vector<WorldState> next;
    for (const auto& st : frontier) {
      for (const auto& a : derive_affordances(s.em, st)) {
        auto out = apply(s.em, st, a);
        if (auto* ns = std::get_if<WorldState>(&out)) {
          if (seen.insert(canonical_json(*ns)).second) next.push_back(*ns);
        }
      }
    }
    frontier = std::move(next);
  }
  return seen.size();
}

struct Instance {
  std::string text;
  std::string goal;
};

Instance random_instance(std::mt19937_64& rng) {
  auto n = [&](int lo, int hi) { return lo + static_cast<int>(rng() % (hi - lo + 1)); };
  Instance in;
  in.text = "All watermelons are portable. All apples are portable. There is a bag. ";
  int melons = n(1, 3), apples = n(0, 2);
  bool box = rng() % 2, person = rng() % 3 == 0, cap = rng() % 2;
  if (cap) in.text += "This bag can hold up to " + std::to_string(n(10, 25)) + " kg before bursting. ";
  in.text += melons == 1 ? std::string("There is a watermelon. ")
                         : "There are " + dsl::spell_number(melons) + " watermelons. ";
  in.text += "The weight of a watermelon is " + std::to_string(n(4, 11)) + " kg. ";
  if (apples) in.text += apples == 1 ? "There is an apple. " : "There are two apples. ";
  if (box) in.text += "There is a box. ";
  if (rng() % 2) in.text += "All bags are portable. ";
  if (person) in.text += "There is a person. A person can eat apples. ";
  for (int i = n(0, 1); i > 0; --i) in.text += "Put a watermelon in the bag. ";

  std::vector<std::string> goals{"Goal: the bag contains " + dsl::spell_number(n(1, melons)) + " watermelons."};
  if (cap) goals.push_back("Goal: the bag is burst.");
  goals.push_back("Goal: the total weight in the bag is at least " + std::to_string(n(5, 25)) + " kg.");
  if (box) {
    goals.push_back("Goal: the box contains " + dsl::spell_number(n(1, melons)) + " watermelons.");
    goals.push_back("Goal: the bag is in the box.");
    goals.push_back("Goal: the box contains a watermelon and the bag contains a watermelon.");
  }
  if (apples) goals.push_back("Goal: the apple is in the bag.");
  if (apples && box && cap) goals.push_back("Goal: the apple is in the box and the bag is not burst.");
  if (apples && box) goals.push_back("Goal: the apple is in the box.");
  in.goal = goals[rng() % goals.size()];
  if (in.goal.find(" one watermelons") != std::string::npos) in.goal.replace(in.goal.find(" one watermelons"), 16, " a watermelon");
  if (apples == 2 && in.goal.find("the apple") != std::string::npos) in.goal = goals[0];
  if (in.goal.find(" one watermelons") != std::string::npos) in.goal.replace(in.goal.find(" one watermelons"), 16, " a watermelon");
  return in;
}

Outcome planner_optimality() {
  auto t0 = Clock::now();
  Emulator pre = prelude({"core", "market"});
  std::mt19937_64 rng(50);
  int instances = 0, plans = 0, noplans = 0, mismatches = 0, invalid = 0, skipped = 0;
  double planning = 0;
  std::string first;
  while (instances < 80) {
    Instance in = random_instance(rng);
    Trace t = run_scenario(pre, dsl::parse_text(in.text));
    if (t.halted) {
      ++skipped;
      continue;
    }
    const Session& s = t.final;
    auto goal = std::get<dsl::GoalSpec>(stmt(in.goal).body);
    if (reachable(s, 10000) > 10000) {
      ++skipped;
      continue;
    }
    ++instances;
    auto oracle = testing::bfs_oracle(s, goal, kDefaultDepthLimit);
    auto p0 = Clock::now();
    PlanResult r = plan(s, goal);
    planning += seconds_since(p0);
    const Plan* p = std::get_if<Plan>(&r);
    bool agree = p ? (oracle.length && *oracle.length == p->length) : !oracle.length;
    if (p) {
      ++plans;
      if (!validate_plan(s, *p, goal)) ++invalid;
    } else {
      ++noplans;
    }
    if (!agree && mismatches++ == 0) first = in.text + "| " + in.goal;
  }
  double dt = seconds_since(t0);
  std::string detail = std::to_string(instances) + " instances (" + std::to_string(plans) + " plans, " +
                       std::to_string(noplans) + " no-plan), " + std::to_string(mismatches) +
                       " length mismatches, " + std::to_string(invalid) + " invalid plans, planner " + fmt(planning) + ", with oracle " + fmt(dt);
  if (!first.empty()) detail += "; first mismatch: " + first;
  return {mismatches == 0 && invalid == 0 && plans >= 50 && planning < 30.0, detail};
}

// --- 6. parser corpus and fuzz -----------------------------------------------------

Outcome parser_corpus() {
  auto t0 = Clock::now();
  std::ifstream in(std::string(ECOSIM_TEST_CORPUS) + "/statements.tsv");
  if (!in) return {false, "corpus missing"};
  int total = 0, failures = 0;
  std::string first, line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    std::string role = line.substr(0, tab), text = line.substr(tab + 1);
    ++total;
    std::string why;
    try {
      dsl::Statement s = dsl::parse_utterance(text);
      dsl::Statement back = dsl::parse_utterance(dsl::pretty_print(s));
      if (!(back == s)) why = "round-trip";
      else if (dsl::to_string(dsl::classify(s)) != role) why = "role " + std::string(dsl::to_string(dsl::classify(s)));
    } catch (const Error& e) {
      why = e.what();
    }
    if (!why.empty() && failures++ == 0) first = text + " (" + why + ")";
  }

  std::mt19937_64 rng(100000);
  int crashes = 0, errors = 0;
  for (int i = 0; i < 100000; ++i) {
    std::string s(rng() % 64, '\0');
    for (auto& c : s) c = static_cast<char>(rng() % 256);
    try {
      dsl::parse_text(s);
    } catch (const dsl::ParseError& e) {
      ++errors;
      if (e.span().end > s.size() || e.span().begin > e.span().end) ++crashes;
    } catch (...) {
      ++crashes;
    }
  }
  double dt = seconds_since(t0);
  std::string detail = std::to_string(total) + " corpus statements, " + std::to_string(failures) +
                       " failures; 100000 fuzz inputs, " + std::to_string(errors) +
                       " parse errors, " + std::to_string(crashes) + " crashes, " + fmt(dt);
  if (!first.empty()) detail += "; first failure: " + first;
  return {total >= 40 && failures == 0 && crashes == 0, detail};
}

// --- 7. promotion invariance ----------------------------------------------------------

Outcome promotion_invariance() {
  fs::path dir = fs::temp_directory_path() / ("ecosim-accept-" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  fs::copy(ECOSIM_TEST_LIB_DIR, dir, fs::copy_options::recursive);
  Outcome out;
  try {
    std::vector<std::string> path{dir.string()};
    Trace before = run_scenario(load_prelude({"core", "market"}, path), dsl::parse_text(fixture_w(3, 3)));
    auto lines = promote(before.final.em, promotable_rules(before.final.em), (dir / "market.eco").string());
    std::string without = fixture_w(3, 3);
    without.erase(without.find("All watermelons are portable. "), 30);
    Trace after = run_scenario(load_prelude({"core", "market"}, path), dsl::parse_text(without));
    bool same = canonical_json(before.final.state) == canonical_json(after.final.state);
    out = {same && !before.halted && !after.halted && lines.size() == 1,
           "promoted " + std::to_string(lines.size()) + " rule(s): " + (lines.empty() ? "" : lines[0]) +
               "; final hash " + hash_hex(state_hash(before.final.state)) + " vs " +
               hash_hex(state_hash(after.final.state))};
  } catch (const Error& e) {
    out = {false, e.what()};
  }
  fs::remove_all(dir);
  return out;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"watermelon-what-if", watermelon_what_if},
      {"clothing-fixture", clothing_fixture},
      {"eco-state-separation", eco_state_separation},
      {"affordance-soundness-completeness", affordance_exhaustive},
      {"planner-optimality", planner_optimality},
      {"parser-corpus", parser_corpus},
      {"promotion-invariance", promotion_invariance},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
