#include <random>
#include <set>

#include "doctest.h"

#include "ecosim/error.hpp"
#include "ecosim/serialize.hpp"
#include "ecosim/world.hpp"

using namespace ecosim;

namespace {

Taxonomy market_taxonomy() {
  Taxonomy t;
  t.add_kind("container", "thing");
  t.add_kind("bag", "container");
  t.add_kind("box", "container");
  t.add_kind("fruit", "thing");
  t.add_kind("watermelon", "fruit");
  t.declare_property("weight", PropertyType::Mass, "thing");
  t.declare_property("open", PropertyType::Flag, "container");
  return t;
}

// Oracle: grams from a "<n> kg" / "<n> g" string by hand.
std::int64_t grams_oracle(const std::string& text) {
  std::int64_t n = 0;
  std::size_t i = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    n = n * 10 + (text[i++] - '0');
  }
  while (i < text.size() && text[i] == ' ') ++i;
  return text.substr(i) == "kg" ? n * 1000 : n;
}

// Oracle: plain FNV-1a 64.
std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Oracle: effective property by direct recursion over the kind chain.
std::optional<PropValue> effective_oracle(const Taxonomy& tax, const WorldState& s,
                                          const std::string& kind, const std::string& prop) {
  auto sd = s.kind_defaults.find(kind);
  if (sd != s.kind_defaults.end() && sd->second.count(prop)) return sd->second.at(prop);
  const KindInfo& k = tax.kind(kind);
  if (k.defaults.count(prop)) return k.defaults.at(prop);
  if (!k.parent) return std::nullopt;
  return effective_oracle(tax, s, *k.parent, prop);
}

}  // namespace

TEST_CASE("quantities parse in both unit spellings") {
  for (std::string text : {"20kg", "20 kg", "9 kg", "500 g", "500g", "0 kg"}) {
    auto q = parse_quantity(text);
    REQUIRE(q);
    CHECK(q->dimension == Dimension::Mass);
    CHECK(q->magnitude == grams_oracle(text));
  }
  CHECK(parse_quantity("3") == Quantity::count(3));
  CHECK_FALSE(parse_quantity("3 lb"));
  CHECK(format_quantity(Quantity::grams(18000)) == "18 kg");
  CHECK(format_quantity(Quantity::grams(1500)) == "1500 g");
  CHECK(format_quantity(Quantity::grams(0)) == "0 g");
}

TEST_CASE("quantity arithmetic refuses mixed dimensions") {
  CHECK((Quantity::grams(1) + Quantity::kilograms(2)).magnitude == 2001);
  CHECK_THROWS_AS(Quantity::grams(1) + Quantity::count(1), Error);
  try {
    (void)compare(Quantity::grams(1), Quantity::count(1));
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("taxonomy") {
  Taxonomy t = market_taxonomy();
  CHECK(t.depth("thing") == 0);
  CHECK(t.depth("bag") == 2);
  CHECK(t.is_a("bag", "container"));
  CHECK(t.is_a("bag", "thing"));
  CHECK_FALSE(t.is_a("container", "bag"));
  CHECK(t.ancestry("watermelon") == std::vector<std::string>{"watermelon", "fruit", "thing"});
  CHECK_THROWS_AS(t.add_kind("bag", "thing"), Error);
  CHECK_THROWS_AS(t.add_kind("unicorn", "horse"), Error);
  CHECK_THROWS_AS(t.declare_property("weight", PropertyType::Flag, "thing"), Error);
}

TEST_CASE("new_world and add_entity") {
  Taxonomy t = market_taxonomy();
  WorldState w = new_world();
  CHECK(w.entities.empty());
  CHECK(state_hash(new_world()) == state_hash(new_world()));

  auto [w1, id] = add_entity(t, w, "watermelon");
  CHECK(id == 1);
  CHECK(w.entities.empty());  // input untouched

  auto [w2, id2] = add_entity(t, w1, "watermelon", {{"weight", *parse_quantity("9 kg")}});
  CHECK(id2 == 2);
  CHECK(effective_quantity(t, w2, id2, "weight").magnitude == grams_oracle("9 kg"));

  try {
    add_entity(t, w, "unicorn");
    FAIL("expected UnknownKind");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownKind);
  }
}

TEST_CASE("effective property resolution order") {
  Taxonomy t = market_taxonomy();
  t.set_default("fruit", "weight", Quantity::grams(100));
  auto [w, m] = add_entity(t, new_world(), "watermelon");
  CHECK(effective_quantity(t, w, m, "weight").magnitude == 100);  // ancestor taxonomy default

  t.set_default("watermelon", "weight", Quantity::grams(200));
  CHECK(effective_quantity(t, w, m, "weight").magnitude == 200);

  w = set_kind_default(t, w, "fruit", "weight", Quantity::grams(300));
  // Nearest kind wins: watermelon's compiled default beats fruit's fact default.
  CHECK(effective_quantity(t, w, m, "weight").magnitude == 200);

  w = set_kind_default(t, w, "watermelon", "weight", Quantity::grams(400));
  CHECK(effective_quantity(t, w, m, "weight").magnitude == 400);

  w = set_property(t, w, m, "weight", Quantity::grams(500));
  CHECK(effective_quantity(t, w, m, "weight").magnitude == 500);

  auto [w2, apple] = add_entity(t, w, "fruit");
  CHECK(effective_property(t, w2, apple, "weight") == effective_oracle(t, w2, "fruit", "weight"));
  CHECK(effective_quantity(t, w2, apple, "weight").magnitude == 300);
}

TEST_CASE("effective property agrees with a recursive oracle on random set-ups") {
  std::mt19937 rng(7);
  const std::vector<std::string> kinds = {"thing", "container", "bag", "box", "fruit", "watermelon"};
  for (int trial = 0; trial < 300; ++trial) {
    Taxonomy t = market_taxonomy();
    WorldState w = new_world();
    for (const auto& k : kinds) {
      if (rng() % 3 == 0) t.set_default(k, "weight", Quantity::grams(rng() % 5000));
      if (rng() % 3 == 0) w = set_kind_default(t, w, k, "weight", Quantity::grams(rng() % 5000));
    }
    const std::string& kind = kinds[rng() % kinds.size()];
    auto [w2, id] = add_entity(t, w, kind);
    CHECK(effective_property(t, w2, id, "weight") == effective_oracle(t, w2, kind, "weight"));
  }
}

TEST_CASE("total_quantity sums direct children with their contents") {
  Taxonomy t = market_taxonomy();
  t.set_default("box", "weight", Quantity::kilograms(1));
  WorldState w = new_world();
  EntityId bag, box, m1, m2;
  std::tie(w, bag) = add_entity(t, w, "bag");
  CHECK(total_quantity(t, w, bag, "weight") == Quantity::grams(0));

  w = set_kind_default(t, w, "watermelon", "weight", Quantity::kilograms(9));
  std::tie(w, m1) = add_entity(t, w, "watermelon");
  std::tie(w, m2) = add_entity(t, w, "watermelon");
  WorldState two = place_in(place_in(w, m1, bag), m2, bag);
  CHECK(total_quantity(t, two, bag, "weight").magnitude == 2 * 9000);

  std::tie(w, box) = add_entity(t, w, "box");
  WorldState nested = place_in(place_in(w, m1, box), box, bag);
  CHECK(total_quantity(t, nested, bag, "weight").magnitude == 1000 + 9000);
  CHECK_THROWS_AS(total_quantity(t, nested, bag, "volume"), Error);
}

TEST_CASE("containment stays acyclic under random operations") {
  Taxonomy t = market_taxonomy();
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    WorldState w = new_world();
    for (int i = 0; i < 5; ++i) w = add_entity(t, w, "box").first;
    for (int op = 0; op < 20; ++op) {
      EntityId a = 1 + rng() % 5, b = 1 + rng() % 5;
      try {
        w = place_in(w, a, b);
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CycleRejected);
      }
      for (EntityId x = 1; x <= 5; ++x) {
        CHECK_FALSE(inside_transitively(w, x, x));
        int parents = 0;
        for (const auto& r : w.relations) parents += (r.kind == RelationKind::In && r.subject == x);
        CHECK(parents <= 1);
      }
    }
  }
}

TEST_CASE("persistence: operations leave their input alone") {
  Taxonomy t = market_taxonomy();
  auto [w, bag] = add_entity(t, new_world(), "bag");
  auto [w2, m] = add_entity(t, w, "watermelon");
  WorldState snapshot = w2;
  (void)place_in(w2, m, bag);
  (void)set_property(t, w2, bag, "open", true);
  (void)append_event(w2, EventRecord{"burst", bag});
  CHECK(w2 == snapshot);
}

TEST_CASE("canonical serialization and hashing") {
  Taxonomy t = market_taxonomy();
  auto build = [&](bool reversed) {
    WorldState w = new_world();
    for (int i = 0; i < 3; ++i) w = add_entity(t, w, "box").first;
    std::vector<Relation> rels = {Relation{RelationKind::In, 2, 1, "", 0},
                                  Relation{RelationKind::At, 3, 1, "", 0}};
    if (reversed) std::reverse(rels.begin(), rels.end());
    for (const auto& r : rels) w = add_relation(w, r);
    return w;
  };
  CHECK(canonical_json(build(false)) == canonical_json(build(true)));
  CHECK(state_hash(build(false)) == state_hash(build(true)));
  WorldState w = build(false);
  CHECK(state_hash(w) == fnv1a(canonical_json(w)));
  CHECK(hash_hex(0x1234) == "0000000000001234");

  Json j = to_json(set_property(t, w, 1, "weight", Quantity::grams(20000)));
  CHECK(j["entities"][0]["props"]["weight"] == Json{{"g", 20000}});
  CHECK(j["entities"][0]["id"] == 1);

  WorldState flagged = set_property(t, w, 2, "open", true);
  CHECK(state_hash(flagged) != state_hash(w));
}

TEST_CASE("hash collision spot-check over 10^4 random small states") {
  Taxonomy t = market_taxonomy();
  std::mt19937 rng(2024);
  std::set<std::string> canon;
  std::set<std::uint64_t> hashes;
  for (int i = 0; i < 10000; ++i) {
    WorldState w = new_world();
    int n = 1 + static_cast<int>(rng() % 4);
    for (int k = 0; k < n; ++k) {
      w = add_entity(t, w, rng() % 2 ? "bag" : "watermelon").first;
      if (rng() % 2) w = set_property(t, w, k + 1, "weight", Quantity::grams(rng() % 30000));
      if (rng() % 3 == 0) w = set_property(t, w, k + 1, "open", rng() % 2 == 0);
    }
    if (n > 1 && rng() % 2) w = place_in(w, 2, 1);
    bool fresh_canon = canon.insert(canonical_json(w)).second;
    bool fresh_hash = hashes.insert(state_hash(w)).second;
    // Equal states must hash equal; distinct states must not collide.
    CHECK(fresh_canon == fresh_hash);
  }
  CHECK(canon.size() == hashes.size());
  CHECK(canon.size() > 5000);
}
