#include <cstdlib>
#include <functional>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "doctest.h"

#include "support.hpp"

#include "ecosim/error.hpp"

using namespace ecosim;
using testing::fixture_w;
using testing::lib_path;
using testing::prelude;
using testing::run;

namespace fs = std::filesystem;

namespace {

// Oracle: shipped libraries hold one statement per non-blank, non-comment line.
int statement_lines(const std::string& name) {
  std::ifstream in(std::string(ECOSIM_TEST_LIB_DIR) + "/" + name + ".eco");
  int n = 0;
  std::string line;
  while (std::getline(in, line)) {
    auto at = line.find_first_not_of(" \t");
    if (at != std::string::npos && line[at] != '#') ++n;
  }
  return n;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("ecosim-test-" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

ErrorCode error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("load_prelude: version equals statement count") {
  for (const auto& libs : std::vector<std::vector<std::string>>{
           {"core"}, {"core", "market"}, {"core", "clothing"}, {"core", "market", "clothing"}}) {
    int expect = 0;
    for (const auto& l : libs) expect += statement_lines(l);
    Emulator em = prelude(libs);
    CHECK(em.version == expect);
    CHECK(em.libraries == libs);
    for (const auto& r : em.rules) CHECK(r.provenance == Provenance::Compiled);
  }
  Emulator market = prelude({"core", "market"});
  CHECK(market.taxonomy.is_a("watermelon", "fruit"));
  CHECK(market.taxonomy.is_a("bag", "container"));
  CHECK(market.taxonomy.has_kind("person"));
}

TEST_CASE("load_prelude: errors") {
  CHECK(error_of([] { prelude({"missing"}); }) == ErrorCode::LibraryNotFound);
  CHECK(error_of([] { prelude({"core", "core"}); }) == ErrorCode::DuplicateLibrary);
  CHECK(error_of([] { prelude({"market"}); }) == ErrorCode::UnknownKind);

  TempDir dir;
  {
    std::ofstream(dir.path / "broken.eco") << "A bag is a kind of container.\nA bag is a kind of.\n";
  }
  try {
    load_prelude({"core", "broken"}, {dir.path.string(), ECOSIM_TEST_LIB_DIR});
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    std::string msg = e.what();
    CHECK(msg.find("broken.eco:2:19: ") != std::string::npos);
  }
}

TEST_CASE("search path: explicit, environment, shipped") {
  TempDir a, b;
  std::ofstream(a.path / "extra.eco") << "A crate is a kind of container.\n";
  std::ofstream(b.path / "extra.eco") << "A crate is a kind of thing.\n";
  std::string joined = a.path.string() + ":" + b.path.string();
  auto path = library_search_path(joined);
  REQUIRE(path.size() >= 3);
  CHECK(path[0] == a.path.string());
  CHECK(path[1] == b.path.string());
  CHECK(find_library("extra", path) == (a.path / "extra.eco").string());

  setenv("ECOSIM_LIB_PATH", b.path.string().c_str(), 1);
  auto env = library_search_path(std::nullopt);
  unsetenv("ECOSIM_LIB_PATH");
  CHECK(env.front() == b.path.string());
  CHECK(find_library("extra", env) == (b.path / "extra.eco").string());
  CHECK(find_library("core", env).ends_with("core.eco"));
  CHECK(error_of([&] { find_library("nothing-here", env); }) == ErrorCode::LibraryNotFound);
}

TEST_CASE("list_rules: provenance partition") {
  Emulator em = prelude({"core", "market", "clothing"});
  CHECK(list_rules(em, Provenance::Situation).empty());
  Trace t = run({"core", "market"},
                "There is a bag. This bag can hold up to 20 kg before bursting. There are two watermelons.");
  REQUIRE(!t.halted);
  Json situ = list_rules(t.final.em, Provenance::Situation);
  REQUIRE(situ.size() == 1);
  CHECK(situ[0]["scope"] == "specific");
  CHECK(situ[0]["source"] == "This bag can hold up to 20 kg before bursting.");
  Json comp = list_rules(t.final.em, Provenance::Compiled);
  CHECK(list_rules(t.final.em).size() == situ.size() + comp.size());
  Json all = list_rules(t.final.em);
  for (std::size_t i = 1; i < all.size(); ++i) CHECK(all[i - 1]["id"] < all[i]["id"]);
  for (const char* key : {"id", "modality", "pattern", "guards", "effects", "events", "provenance",
                          "installed_at", "scope"}) {
    CHECK(all[0].contains(key));
  }
}

TEST_CASE("promote: errors") {
  Trace t = run({"core", "market"}, fixture_w(3, 0));
  REQUIRE(!t.halted);
  const Emulator& em = t.final.em;
  TempDir dir;
  auto file = (dir.path / "market.eco").string();
  int compiled = -1, specific = -1;
  for (const auto& r : em.rules) {
    if (r.provenance == Provenance::Compiled && compiled < 0) compiled = r.id;
    if (r.scope == Scope::Specific) specific = r.id;
  }
  CHECK(error_of([&] { promote(em, {9999}, file); }) == ErrorCode::UnknownRule);
  if (compiled >= 0) CHECK(error_of([&] { promote(em, {compiled}, file); }) == ErrorCode::NotSituationRule);
  CHECK(error_of([&] { promote(em, {specific}, file); }) == ErrorCode::SpecificRuleNotPromotable);
  CHECK(!fs::exists(file));
  CHECK(promotable_rules(em).size() == 1);
}

TEST_CASE("promote: append and rerun equivalence") {
  TempDir dir;
  fs::copy(ECOSIM_TEST_LIB_DIR, dir.path, fs::copy_options::recursive);
  // No trailing newline: promote must add one before appending.
  {
    std::string text = slurp(dir.path / "market.eco");
    while (!text.empty() && text.back() == '\n') text.pop_back();
    std::ofstream(dir.path / "market.eco", std::ios::trunc) << text;
  }
  std::vector<std::string> path{dir.path.string()};
  Emulator base = load_prelude({"core", "market"}, path);
  Trace before = run_scenario(base, dsl::parse_text(fixture_w(3, 3)));
  REQUIRE(!before.halted);
  auto lines = promote(before.final.em, promotable_rules(before.final.em), (dir.path / "market.eco").string());
  CHECK(lines == std::vector<std::string>{"All watermelons are portable."});
  std::string text = slurp(dir.path / "market.eco");
  CHECK(text.ends_with("\nAll watermelons are portable.\n"));

  std::string without = fixture_w(3, 3);
  without.erase(without.find("All watermelons are portable. "), 30);
  Emulator reloaded = load_prelude({"core", "market"}, path);
  CHECK(reloaded.version == base.version + 1);
  Trace after = run_scenario(reloaded, dsl::parse_text(without));
  REQUIRE(!after.halted);
  CHECK(canonical_json(after.final.state) == canonical_json(before.final.state));
}

TEST_CASE("promote: concurrent appends stay whole lines") {
  TempDir dir;
  auto file = (dir.path / "shared.eco").string();
  Trace t = run({"core", "market"}, "All watermelons are portable. Apples cannot be carried.");
  REQUIRE(!t.halted);
  auto ids = promotable_rules(t.final.em);
  REQUIRE(ids.size() == 2);
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&] {
      for (int k = 0; k < 25; ++k) promote(t.final.em, ids, file);
    });
  }
  for (auto& th : threads) th.join();
  std::ifstream in(file);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    CHECK((line == "All watermelons are portable." || line == "Apples cannot be carried."));
    ++n;
  }
  CHECK(n == 8 * 25 * 2);
}
