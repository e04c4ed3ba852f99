#pragma once

#include <string>
#include <vector>

#include "ecosim/ast.hpp"

namespace ecosim {

// Scenario files:
//
//   PRELUDE: core, market
//   TEXT:
//   There is a bag.
//   ...
//   ASSERT:
//   Does the bag burst? => yes
//
// '#' starts a comment. Section headers are case-sensitive and start a line.

struct ScenarioAssert {
  dsl::Statement query;  // a Query or Goal statement
  std::string query_text;
  std::string expected;
  int line = 0;
};

struct ScenarioFile {
  std::vector<std::string> prelude;
  std::vector<dsl::Statement> text;
  std::vector<ScenarioAssert> asserts;
};

/// Throws dsl::ParseError whose message starts with "origin:line:col:".
ScenarioFile parse_scenario(const std::string& content, const std::string& origin);

/// Compares an answer with an expected string: case- and space-insensitive,
/// quantities compared by value ("18kg" matches "18000 g").
bool answer_matches(const std::string& expected, const std::string& actual);

}  // namespace ecosim
