#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ecosim/emulator.hpp"
#include "ecosim/knowledge.hpp"
#include "ecosim/parser.hpp"
#include "ecosim/simulator.hpp"

namespace testing {

inline std::vector<std::string> lib_path() { return {ECOSIM_TEST_LIB_DIR}; }

inline ecosim::Emulator prelude(const std::vector<std::string>& names) {
  return ecosim::load_prelude(names, lib_path());
}

inline ecosim::Trace run(const std::vector<std::string>& libs, const std::string& text,
                         ecosim::RunMode mode = ecosim::RunMode::Halt) {
  return ecosim::run_scenario(prelude(libs), ecosim::dsl::parse_text(text), mode);
}

inline ecosim::dsl::Statement stmt(const std::string& text) {
  return ecosim::dsl::parse_utterance(text);
}

// Fixture W set-up text; the bag is #1 and melons #2.. #(n+1).
inline std::string fixture_w(int melons, int puts) {
  std::string t =
      "All watermelons are portable. There is a bag. "
      "This bag can hold up to 20 kg before bursting. ";
  t += melons == 1 ? std::string("There is a watermelon. ")
                   : "There are " + ecosim::dsl::spell_number(melons) + " watermelons. ";
  t += "The weight of a watermelon is 9 kg. ";
  for (int i = 0; i < puts; ++i) t += "Put a watermelon in the bag. ";
  return t;
}

inline std::string ask(const ecosim::Session& s, const std::string& query) {
  return ecosim::to_string(
      ecosim::evaluate_query(s, std::get<ecosim::dsl::Query>(stmt(query).body)));
}

// Oracle: every verb x agent (none or any entity) x patient x target (none or
// any entity) tuple that check_action permits, sorted canonically.
inline std::vector<ecosim::GroundedAction> brute_affordances(const ecosim::Emulator& em,
                                                             const ecosim::WorldState& state) {
  using namespace ecosim;
  std::vector<std::optional<EntityId>> opt{std::nullopt};
  for (const auto& [id, e] : state.entities) opt.push_back(id);
  std::vector<GroundedAction> out;
  for (const auto& verb : known_verbs(em))
    for (const auto& agent : opt)
      for (const auto& [patient, e] : state.entities)
        for (const auto& target : opt) {
          GroundedAction a{verb, agent, patient, target};
          if (std::holds_alternative<Permit>(check_action(em, state, a))) out.push_back(a);
        }
  std::sort(out.begin(), out.end());
  return out;
}

struct OracleResult {
  std::optional<int> length;  // shortest goal distance within the bound
  std::size_t states = 0;      // distinct canonical states seen
};

// Oracle: breadth-first search keyed by canonical JSON text, successors from
// brute_affordances. With `dedupe` false it is a plain tree search.
inline OracleResult bfs_oracle(const ecosim::Session& s, const ecosim::dsl::GoalSpec& goal,
                               int depth_limit, bool dedupe = true) {
  using namespace ecosim;
  ResolvedCondition cond = resolve_condition(s, goal.condition);
  OracleResult out;
  std::set<std::string> seen{canonical_json(s.state)};
  std::deque<std::pair<WorldState, int>> queue{{s.state, 0}};
  while (!queue.empty()) {
    auto [state, depth] = queue.front();
    queue.pop_front();
    if (holds(s.em, state, cond)) {
      out.length = depth;
      break;
    }
    if (depth == depth_limit) continue;
    for (const auto& a : brute_affordances(s.em, state)) {
      auto next = apply(s.em, state, a);
      const auto* ns = std::get_if<WorldState>(&next);
      if (!ns) continue;
      if (dedupe && !seen.insert(canonical_json(*ns)).second) continue;
      queue.emplace_back(*ns, depth + 1);
    }
  }
  out.states = seen.size();
  return out;
}

}  // namespace testing
