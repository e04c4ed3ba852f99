#include "ecosim/lexer.hpp"

#include <cctype>

namespace ecosim::dsl {

const char* to_string(ParseFailure f) {
  switch (f) {
    case ParseFailure::IllegalCharacter: return "IllegalCharacter";
    case ParseFailure::MalformedNumber: return "MalformedNumber";
    case ParseFailure::UnexpectedToken: return "UnexpectedToken";
    case ParseFailure::UnexpectedEnd: return "UnexpectedEnd";
    case ParseFailure::InvalidValue: return "InvalidValue";
  }
  return "?";
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case TokenKind::Word: return "'" + t.text + "'";
    case TokenKind::Number: return "number " + t.text;
    case TokenKind::Unit: return "unit " + t.text;
    case TokenKind::Punct: return "'" + t.text + "'";
  }
  return t.text;
}

namespace {

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return is_alpha(c) || is_digit(c); }

[[noreturn]] void illegal(std::string_view text, std::size_t at) {
  unsigned char c = static_cast<unsigned char>(text[at]);
  std::string shown = (c >= 0x20 && c < 0x7f) ? std::string(1, static_cast<char>(c))
                                               : "byte " + std::to_string(c);
  throw ParseError(ParseFailure::IllegalCharacter, Span{at, at + 1}, {},
                   "illegal character " + shown);
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++i;
    } else if (c == '#') {
      while (i < n && text[i] != '\n') ++i;
    } else if (is_alpha(c)) {
      std::size_t start = i;
      std::string word;
      while (i < n) {
        if (is_alnum(text[i])) {
          word.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[i]))));
          ++i;
        } else if (text[i] == '-' && i + 1 < n && is_alpha(text[i + 1])) {
          word.push_back('-');
          ++i;
        } else {
          break;
        }
      }
      out.push_back({TokenKind::Word, std::move(word), {start, i}});
    } else if (is_digit(c)) {
      std::size_t start = i;
      while (i < n && is_digit(text[i])) ++i;
      if (i - start > 12) {
        throw ParseError(ParseFailure::MalformedNumber, Span{start, i}, {},
                         "number too large");
      }
      out.push_back({TokenKind::Number, std::string(text.substr(start, i - start)), {start, i}});
      if (i < n && is_alpha(text[i])) {
        std::size_t ustart = i;
        std::string unit;
        while (i < n && is_alpha(text[i])) {
          unit.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[i]))));
          ++i;
        }
        if (!unit_factor(unit)) {
          throw ParseError(ParseFailure::MalformedNumber, Span{start, i}, {"g", "kg"},
                           "unknown unit '" + unit + "'");
        }
        out.push_back({TokenKind::Unit, std::move(unit), {ustart, i}});
      } else {
        // "9 kg": a detached unit word directly after a number is still a unit.
        std::size_t j = i;
        while (j < n && (text[j] == ' ' || text[j] == '\t')) ++j;
        std::size_t ustart = j;
        std::string unit;
        while (j < n && is_alpha(text[j])) {
          unit.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[j]))));
          ++j;
        }
        if (j > ustart && unit_factor(unit) && (j == n || !(is_alnum(text[j]) || text[j] == '-'))) {
          out.push_back({TokenKind::Unit, std::move(unit), {ustart, j}});
          i = j;
        }
      }
    } else if (c == '.' || c == '?' || c == '!' || c == ',' || c == ';' || c == ':') {
      out.push_back({TokenKind::Punct, std::string(1, c), {i, i + 1}});
      ++i;
    } else {
      illegal(text, i);
    }
  }
  return out;
}

}  // namespace ecosim::dsl
