#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ecosim/ast.hpp"
#include "ecosim/error.hpp"

namespace ecosim::dsl {

enum class TokenKind { Word, Number, Unit, Punct };

struct Token {
  TokenKind kind = TokenKind::Word;
  std::string text;  // lowercased for words
  Span span;
  friend bool operator==(const Token&, const Token&) = default;
};

enum class ParseFailure { IllegalCharacter, MalformedNumber, UnexpectedToken, UnexpectedEnd, InvalidValue };

const char* to_string(ParseFailure f);

class ParseError : public Error {
 public:
  ParseError(ParseFailure failure, Span span, std::vector<std::string> expected,
             const std::string& message)
      : Error(ErrorCode::ParseError, message),
        failure_(failure),
        span_(span),
        expected_(std::move(expected)) {}

  ParseFailure failure() const noexcept { return failure_; }
  Span span() const noexcept { return span_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  ParseFailure failure_;
  Span span_;
  std::vector<std::string> expected_;
};

/// Splits text into lowercased words, numbers (with a following unit split
/// off as its own token), and punctuation. '#' comments run to end of line.
std::vector<Token> tokenize(std::string_view text);

std::string describe(const Token& t);

}  // namespace ecosim::dsl
