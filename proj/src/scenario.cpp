#include "ecosim/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "ecosim/lexer.hpp"
#include "ecosim/parser.hpp"

namespace ecosim {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string strip_comment(std::string_view line) {
  auto hash = line.find('#');
  return std::string(hash == std::string_view::npos ? line : line.substr(0, hash));
}

[[noreturn]] void fail_at(const std::string& origin, int line, int col, std::size_t offset,
                          const std::string& msg,
                          dsl::ParseFailure f = dsl::ParseFailure::UnexpectedToken,
                          std::vector<std::string> expected = {}) {
  throw dsl::ParseError(f, dsl::Span{offset, offset}, std::move(expected),
                        origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                            msg);
}

std::pair<int, int> line_col(const std::string& text, std::size_t offset) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::string normalize(std::string s) {
  std::string out;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  while (!out.empty() && (out.back() == '.' || out.back() == '!')) out.pop_back();
  return out;
}

}  // namespace

bool answer_matches(const std::string& expected, const std::string& actual) {
  std::string e = normalize(expected), a = normalize(actual);
  if (e == a) return true;
  auto qe = parse_quantity(e), qa = parse_quantity(a);
  return qe && qa && *qe == *qa;
}

ScenarioFile parse_scenario(const std::string& content, const std::string& origin) {
  enum class Section { None, Prelude, Text, Assert };
  ScenarioFile out;
  Section section = Section::None;
  std::size_t text_begin = std::string::npos, text_end = std::string::npos;

  std::size_t offset = 0;
  int line_no = 0;
  while (offset <= content.size()) {
    std::size_t nl = content.find('\n', offset);
    std::size_t end = nl == std::string::npos ? content.size() : nl;
    std::string_view raw(content.data() + offset, end - offset);
    ++line_no;
    std::string line = strip_comment(raw);

    auto header = [&](std::string_view name) {
      return line.rfind(name, 0) == 0;
    };
    std::string rest;
    bool is_header = false;
    Section next = section;
    if (header("PRELUDE:")) {
      next = Section::Prelude;
      rest = line.substr(8);
      is_header = true;
    } else if (header("TEXT:")) {
      next = Section::Text;
      rest = line.substr(5);
      is_header = true;
    } else if (header("ASSERT:")) {
      next = Section::Assert;
      rest = line.substr(7);
      is_header = true;
    }
    if (is_header) {
      if (section == Section::Text) text_end = offset;
      section = next;
      if (section == Section::Text) {
        if (text_begin != std::string::npos) {
          fail_at(origin, line_no, 1, offset, "duplicate TEXT section");
        }
        text_begin = offset + (line.size() - rest.size());
      }
    } else {
      rest = line;
    }

    if (section == Section::Prelude) {
      std::stringstream ss(rest);
      std::string name;
      while (std::getline(ss, name, ',')) {
        name = trim(name);
        if (name.empty()) continue;
        bool ok = std::all_of(name.begin(), name.end(), [](char c) {
          return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
        });
        if (!ok) fail_at(origin, line_no, 1, offset, "bad library name '" + name + "'");
        out.prelude.push_back(name);
      }
    } else if (section == Section::Assert) {
      std::string t = trim(rest);
      if (!t.empty()) {
        auto arrow = t.find("=>");
        if (arrow == std::string::npos) {
          fail_at(origin, line_no, 1, offset, "assertion needs 'QUERY => ANSWER'",
                  dsl::ParseFailure::UnexpectedEnd, {"'=>'"});
        }
        std::string q = trim(t.substr(0, arrow));
        std::string expected = trim(t.substr(arrow + 2));
        std::size_t q_at = offset + raw.find(q.empty() ? std::string_view("=>") : std::string_view(q));
        dsl::Statement stmt;
        try {
          stmt = dsl::parse_utterance(q);
        } catch (const dsl::ParseError& e) {
          auto [l, c] = line_col(content, q_at + e.span().begin);
          fail_at(origin, l, c, q_at + e.span().begin, e.what(), e.failure(), e.expected());
        }
        auto role = dsl::classify(stmt);
        if (role != dsl::Role::Query && role != dsl::Role::Goal) {
          auto [l, c] = line_col(content, q_at);
          fail_at(origin, l, c, q_at, "an assertion must be a question or a goal");
        }
        if (expected.empty()) {
          fail_at(origin, line_no, static_cast<int>(raw.size()) + 1, end, "missing expected answer",
                  dsl::ParseFailure::UnexpectedEnd, {"answer"});
        }
        out.asserts.push_back(ScenarioAssert{stmt, q, expected, line_no});
      }
    } else if (section == Section::None && !trim(rest).empty()) {
      fail_at(origin, line_no, 1, offset, "text before the first section header",
              dsl::ParseFailure::UnexpectedToken, {"'PRELUDE:'", "'TEXT:'", "'ASSERT:'"});
    }
    if (nl == std::string::npos) break;
    offset = nl + 1;
  }
  if (section == Section::Text) text_end = content.size();

  if (text_begin != std::string::npos) {
    // '#' comments are skipped by the lexer.
    std::string text = content.substr(text_begin, text_end - text_begin);
    try {
      out.text = dsl::parse_text(text);
    } catch (const dsl::ParseError& e) {
      auto [l, c] = line_col(content, text_begin + e.span().begin);
      fail_at(origin, l, c, text_begin + e.span().begin, e.what(), e.failure(), e.expected());
    }
  }
  return out;
}

}  // namespace ecosim
