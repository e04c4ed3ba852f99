#include "ecosim/knowledge.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ecosim/error.hpp"
#include "ecosim/lexer.hpp"
#include "ecosim/parser.hpp"

#ifndef ECOSIM_LIB_DIR
#define ECOSIM_LIB_DIR "lib"
#endif

namespace ecosim {

namespace fs = std::filesystem;

namespace {

void split_into(const std::string& dirs, std::vector<std::string>& out) {
  std::stringstream ss(dirs);
  std::string item;
  while (std::getline(ss, item, ':')) {
    if (!item.empty()) out.push_back(item);
  }
}

// 1-based line and column of a byte offset.
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

}  // namespace

std::vector<std::string> library_search_path(const std::optional<std::string>& explicit_dirs) {
  std::vector<std::string> out;
  if (explicit_dirs) split_into(*explicit_dirs, out);
  if (const char* env = std::getenv("ECOSIM_LIB_PATH")) split_into(env, out);
  out.emplace_back(ECOSIM_LIB_DIR);
  return out;
}

std::string find_library(const std::string& name, const std::vector<std::string>& search_path) {
  for (const auto& dir : search_path) {
    fs::path p = fs::path(dir) / (name + ".eco");
    std::error_code ec;
    if (fs::is_regular_file(p, ec)) return p.string();
  }
  throw Error(ErrorCode::LibraryNotFound, "library '" + name + "' not found on search path");
}

Emulator load_library_text(const Emulator& base, const std::string& name, const std::string& text,
                           const std::string& origin) {
  if (std::find(base.libraries.begin(), base.libraries.end(), name) != base.libraries.end()) {
    throw Error(ErrorCode::DuplicateLibrary, "library '" + name + "' is already loaded");
  }
  std::vector<dsl::Statement> stmts;
  try {
    stmts = dsl::parse_text(text);
  } catch (const dsl::ParseError& e) {
    auto [line, col] = line_col(text, e.span().begin);
    throw dsl::ParseError(e.failure(), e.span(), e.expected(),
                          origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                              e.what());
  }
  Emulator em = base;
  for (const auto& stmt : stmts) {
    try {
      em = eco_apply(em, stmt, std::nullopt, Provenance::Compiled);
    } catch (const Error& e) {
      auto [line, col] = line_col(text, stmt.span.begin);
      throw Error(e.code(), origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                                ": " + e.what());
    }
  }
  em.libraries.push_back(name);
  return em;
}

Emulator load_prelude(const std::vector<std::string>& names,
                      const std::vector<std::string>& search_path, const Emulator& base) {
  Emulator em = base;
  for (const auto& name : names) {
    if (std::find(em.libraries.begin(), em.libraries.end(), name) != em.libraries.end()) {
      throw Error(ErrorCode::DuplicateLibrary, "library '" + name + "' is already loaded");
    }
    std::string path = find_library(name, search_path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    em = load_library_text(em, name, buf.str(), path);
  }
  return em;
}

std::vector<int> promotable_rules(const Emulator& em) {
  std::vector<int> out;
  for (const auto& r : em.rules) {
    if (r.provenance == Provenance::Situation && r.scope == Scope::Generic) out.push_back(r.id);
  }
  return out;
}

std::vector<std::string> promote(const Emulator& em, const std::vector<int>& rule_ids,
                                 const std::string& library_file) {
  std::vector<std::string> lines;
  for (int id : rule_ids) {
    auto it = std::find_if(em.rules.begin(), em.rules.end(),
                           [&](const AffordanceRule& r) { return r.id == id; });
    if (it == em.rules.end()) {
      throw Error(ErrorCode::UnknownRule, "no rule " + std::to_string(id));
    }
    if (it->provenance != Provenance::Situation) {
      throw Error(ErrorCode::NotSituationRule,
                  "rule " + std::to_string(id) + " is already compiled knowledge");
    }
    if (it->scope == Scope::Specific) {
      throw Error(ErrorCode::SpecificRuleNotPromotable,
                  "rule " + std::to_string(id) + " is about one entity; generalize it by hand");
    }
    lines.push_back(dsl::pretty_print(dsl::Statement{it->source, {}}));
  }

  int fd = ::open(library_file.c_str(), O_RDWR | O_CREAT | O_APPEND, 0644);
  if (fd < 0) throw Error(ErrorCode::IoError, "cannot open " + library_file);
  if (::flock(fd, LOCK_EX) != 0) {
    ::close(fd);
    throw Error(ErrorCode::IoError, "cannot lock " + library_file);
  }
  std::string out;
  off_t size = ::lseek(fd, 0, SEEK_END);
  if (size > 0) {
    char last = '\n';
    if (::pread(fd, &last, 1, size - 1) == 1 && last != '\n') out += '\n';
  }
  for (const auto& l : lines) out += l + "\n";
  ssize_t written = ::write(fd, out.data(), out.size());
  ::flock(fd, LOCK_UN);
  ::close(fd);
  if (written != static_cast<ssize_t>(out.size())) {
    throw Error(ErrorCode::IoError, "short write to " + library_file);
  }
  return lines;
}

namespace {

Json selector_json(const std::optional<Selector>& sel) {
  if (!sel) return nullptr;
  Json j;
  j["kind"] = sel->kind;
  j["labels"] = sel->labels;
  j["entity"] = sel->entity ? Json(*sel->entity) : Json(nullptr);
  return j;
}

}  // namespace

Json rule_to_json(const AffordanceRule& rule) {
  Json j;
  j["id"] = rule.id;
  j["modality"] = rule.modality == Modality::Can ? "can" : "cannot";
  j["pattern"] = {{"verbs", rule.pattern.verbs},
                  {"agent", selector_json(rule.pattern.agent)},
                  {"patient", selector_json(rule.pattern.patient)},
                  {"target", selector_json(rule.pattern.target)}};
  Json guards = Json::array();
  for (const auto& g : rule.guards) guards.push_back(guard_sexpr(g));
  j["guards"] = guards;
  Json effects = Json::object();
  for (const auto& [verb, list] : rule.effects) {
    Json arr = Json::array();
    for (const auto& e : list) arr.push_back(effect_sexpr(e));
    effects[verb] = arr;
  }
  j["effects"] = effects;
  Json events = Json::array();
  for (const auto& e : rule.events) events.push_back(event_sexpr(e));
  j["events"] = events;
  j["provenance"] = to_string(rule.provenance);
  j["installed_at"] = rule.installed_at;
  j["scope"] = to_string(rule.scope);
  j["depth"] = rule.depth;
  j["licensing"] = rule.licensing;
  j["source"] = dsl::pretty_print(dsl::Statement{rule.source, {}});
  return j;
}

Json list_rules(const Emulator& em, std::optional<Provenance> filter) {
  Json out = Json::array();
  for (const auto& r : em.rules) {
    if (!filter || r.provenance == *filter) out.push_back(rule_to_json(r));
  }
  return out;
}

}  // namespace ecosim
