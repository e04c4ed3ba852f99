#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ecosim/ast.hpp"
#include "ecosim/lexer.hpp"

namespace ecosim::dsl {

/// Parses exactly one statement. Throws ParseError; never anything else.
Statement parse_utterance(std::string_view text);

/// Parses a sequence of statements (e.g. a paragraph or a whole .eco line).
std::vector<Statement> parse_text(std::string_view text);

/// Renders a statement in canonical form; parse_utterance(pretty_print(s)) == s.
std::string pretty_print(const Statement& stmt);
std::string pretty_print(const NounPhrase& np);
std::string pretty_print(const Command& cmd, bool sentence = true);
std::string pretty_print(const Condition& cond);

// Morphology shared by parser and printer.
bool is_reserved(std::string_view word);
bool is_plurale_tantum(std::string_view word);
std::string singularize(std::string_view word);
std::string pluralize(std::string_view word);
std::string indefinite_article(std::string_view word);
std::optional<std::int64_t> number_word(std::string_view word);
std::string spell_number(std::int64_t n);

}  // namespace ecosim::dsl
