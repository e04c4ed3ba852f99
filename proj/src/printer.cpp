#include <cctype>

#include "ecosim/parser.hpp"

namespace ecosim::dsl {

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

bool plural_subject(const NounPhrase& np) {
  return np.det == Determiner::All || np.det == Determiner::Bare ||
         ((np.det == Determiner::Count || np.det == Determiner::DefiniteCount) && np.count != 1);
}

std::string copula(const NounPhrase& np) { return plural_subject(np) ? "are" : "is"; }

std::string words(const NounPhrase& np, const std::string& noun) {
  std::vector<std::string> parts = np.adjectives;
  parts.push_back(noun);
  return join(parts, " ");
}

std::string nps(const std::vector<NounPhrase>& list) {
  std::vector<std::string> parts;
  for (const auto& np : list) parts.push_back(pretty_print(np));
  return join(parts, " and ");
}

std::string kind_with_article(const std::string& kind) {
  return indefinite_article(kind) + " " + kind;
}

std::string comparison(Comparison c) {
  switch (c) {
    case Comparison::AtLeast: return "at least";
    case Comparison::AtMost: return "at most";
    case Comparison::MoreThan: return "more than";
    case Comparison::LessThan: return "less than";
    case Comparison::Exactly: return "exactly";
  }
  return "";
}

std::string value(const PropValue& v) {
  if (const auto* q = std::get_if<Quantity>(&v)) return format_quantity(*q);
  return std::get<bool>(v) ? "true" : "false";
}

enum class Tense { Imperative, Past, Present, Base };

std::string command_text(const Command& c, Tense tense) {
  std::string verb;
  const std::string& v = c.verb;
  switch (tense) {
    case Tense::Imperative:
    case Tense::Base:
      if (v == kVerbPutIn) verb = "put";
      else if (v == kVerbWear) verb = tense == Tense::Imperative ? "put on" : "wear";
      else verb = v;
      break;
    case Tense::Past:
      if (v == kVerbPutIn) verb = "put";
      else if (v == kVerbWear) verb = "put on";
      else if (v == kVerbTake) verb = "took";
      else if (v == kVerbDrop) verb = "dropped";
      else verb = v + "s";
      break;
    case Tense::Present:
      if (v == kVerbPutIn) verb = "puts";
      else if (v == kVerbWear) verb = "puts on";
      else verb = v + "s";
      break;
  }
  std::string out;
  if (c.agent && tense != Tense::Imperative) out = pretty_print(*c.agent) + " ";
  out += verb + " " + nps(c.patients);
  if (c.target) out += " in " + pretty_print(*c.target);
  return out;
}

std::string atom_query(const Atom& atom) {
  struct Visitor {
    std::string operator()(const FlagAtom& a) const {
      return "is " + pretty_print(a.subject) + (a.negated ? " not " : " ") + a.flag;
    }
    std::string operator()(const InAtom& a) const {
      return "is " + pretty_print(a.subject) + " in " + pretty_print(a.container);
    }
    std::string operator()(const ContainsAtom& a) const {
      return "does " + pretty_print(a.container) + " contain " + pretty_print(a.contents);
    }
    std::string operator()(const WearsAtom& a) const {
      return "does " + pretty_print(a.wearer) + " wear " + pretty_print(a.garment);
    }
    std::string operator()(const TotalAtom& a) const {
      return "is the total " + a.property + " in " + pretty_print(a.container) + " " +
             comparison(a.cmp) + " " + format_quantity(a.value);
    }
    std::string operator()(const EventAtom& a) const {
      return "does " + pretty_print(a.subject) + " " + a.event;
    }
    std::string operator()(const CanAtom& a) const {
      return "can " + command_text(a.command, Tense::Base);
    }
  };
  return std::visit(Visitor{}, atom);
}

std::string atom_goal(const Atom& atom) {
  struct Visitor {
    std::string operator()(const FlagAtom& a) const {
      return pretty_print(a.subject) + " is " + (a.negated ? "not " : "") + a.flag;
    }
    std::string operator()(const InAtom& a) const {
      return pretty_print(a.subject) + " is in " + pretty_print(a.container);
    }
    std::string operator()(const ContainsAtom& a) const {
      return pretty_print(a.container) + " contains " + pretty_print(a.contents);
    }
    std::string operator()(const WearsAtom& a) const {
      return pretty_print(a.wearer) + " wears " + pretty_print(a.garment);
    }
    std::string operator()(const TotalAtom& a) const {
      return "the total " + a.property + " in " + pretty_print(a.container) + " is " +
             comparison(a.cmp) + " " + format_quantity(a.value);
    }
    std::string operator()(const EventAtom& a) const {
      return pretty_print(a.subject) + " " + a.event + "s";
    }
    std::string operator()(const CanAtom& a) const {
      return "can " + command_text(a.command, Tense::Base);
    }
  };
  return std::visit(Visitor{}, atom);
}

std::string basic_query(const BasicQuery& q) {
  struct Visitor {
    std::string operator()(const PolarQuery& p) const {
      std::vector<std::string> parts;
      for (const auto& a : p.condition.conjuncts) parts.push_back(atom_query(a));
      return join(parts, " and ") + "?";
    }
    std::string operator()(const TotalQuery& t) const {
      return "what is the total " + t.property + " in " + pretty_print(t.container) + "?";
    }
    std::string operator()(const PropertyQuery& p) const {
      return "what is the " + p.property + " of " + pretty_print(p.subject) + "?";
    }
    std::string operator()(const CountQuery& c) const {
      return "how many " + pretty_print(c.contents) + " are in " + pretty_print(c.container) + "?";
    }
  };
  return capitalize(std::visit(Visitor{}, q));
}

std::string affordance(const AffordanceDecl& d) {
  std::string subject = pretty_print(d.subject);
  bool can = d.modality == Modality::Can;
  struct Visitor {
    const std::string& subject;
    const AffordanceDecl& d;
    bool can;
    std::string operator()(const PortableFrame&) const {
      return can ? subject + " " + copula(d.subject) + " portable."
                 : subject + " cannot be carried.";
    }
    std::string operator()(const WearFrame& w) const {
      if (!can) return subject + " cannot be worn.";
      return subject + " can be worn on the " + w.slot + " at layer " + std::to_string(w.layer) +
             ".";
    }
    std::string operator()(const HoldFrame& h) const {
      return subject + " can hold up to " + format_quantity(h.limit) + " before " + h.event +
             "ing.";
    }
    std::string operator()(const VerbFrame& v) const {
      return subject + (can ? " can " : " cannot ") + v.verb + " " + pluralize(v.patient_kind) +
             ".";
    }
  };
  return std::visit(Visitor{subject, d, can}, d.frame);
}

std::string fact(const Fact& f) {
  struct Visitor {
    std::string operator()(const ExistsFact& e) const {
      bool singular = e.np.det == Determiner::Indefinite || e.np.count == 1;
      return (singular ? "there is " : "there are ") + pretty_print(e.np) + ".";
    }
    std::string operator()(const AssignFact& a) const {
      return "the " + a.property + " of " + pretty_print(a.subject) + " is " +
             format_quantity(a.value) + ".";
    }
    std::string operator()(const FlagFact& a) const {
      return pretty_print(a.subject) + " " + copula(a.subject) + (a.value ? " " : " not ") +
             a.flag + ".";
    }
    std::string operator()(const InsideFact& a) const {
      return pretty_print(a.subject) + " is in " + pretty_print(a.container) + ".";
    }
  };
  return std::visit(Visitor{}, f.content);
}

}  // namespace

std::string pretty_print(const NounPhrase& np) {
  switch (np.det) {
    case Determiner::Indefinite: {
      std::string w = words(np, np.noun);
      return indefinite_article(w) + " " + w;
    }
    case Determiner::Definite: return "the " + words(np, np.noun);
    case Determiner::Demonstrative: return "this " + words(np, np.noun);
    case Determiner::Count:
      return spell_number(np.count) + " " +
             words(np, np.count == 1 ? np.noun : pluralize(np.noun));
    case Determiner::DefiniteCount:
      return "the " + spell_number(np.count) + " " +
             words(np, np.count == 1 ? np.noun : pluralize(np.noun));
    case Determiner::Bare: return words(np, pluralize(np.noun));
    case Determiner::All: return "all " + words(np, pluralize(np.noun));
    case Determiner::Pronoun: return np.noun;
  }
  return np.noun;
}

std::string pretty_print(const Command& cmd, bool sentence) {
  if (!sentence) return command_text(cmd, cmd.agent ? Tense::Present : Tense::Imperative);
  return capitalize(command_text(cmd, cmd.agent ? Tense::Past : Tense::Imperative)) + ".";
}

std::string pretty_print(const Condition& cond) {
  std::vector<std::string> parts;
  for (const auto& a : cond.conjuncts) parts.push_back(atom_goal(a));
  return join(parts, " and ");
}

std::string pretty_print(const Statement& stmt) {
  struct Visitor {
    std::string operator()(const KindDecl& k) const {
      if (is_plurale_tantum(k.kind)) return capitalize(k.kind) + " are a kind of " + k.parent + ".";
      return capitalize(kind_with_article(k.kind)) + " is a kind of " + k.parent + ".";
    }
    std::string operator()(const PropertyDecl& p) const {
      if (p.type == PropertyType::Flag) {
        return capitalize(kind_with_article(p.kind)) + " can be " + p.property + ".";
      }
      return capitalize(kind_with_article(p.kind)) + " has a " +
             (p.type == PropertyType::Mass ? "mass" : "count") + " called " + p.property + ".";
    }
    std::string operator()(const AffordanceDecl& d) const { return capitalize(affordance(d)); }
    std::string operator()(const DefaultDecl& d) const {
      if (const bool* b = std::get_if<bool>(&d.value)) {
        return capitalize(pretty_print(d.subject)) + " " + copula(d.subject) + " usually " +
               (*b ? "" : "not ") + d.property + ".";
      }
      return "The " + d.property + " of " + pretty_print(d.subject) + " is usually " +
             value(d.value) + ".";
    }
    std::string operator()(const Fact& f) const { return capitalize(fact(f)); }
    std::string operator()(const Command& c) const { return pretty_print(c, true); }
    std::string operator()(const Query& q) const {
      if (!q.what_if) return basic_query(q.body);
      std::vector<std::string> cmds;
      for (const auto& c : q.hypotheticals) cmds.push_back(pretty_print(c, false));
      return "What if " + join(cmds, "; ") + "? " + basic_query(q.body);
    }
    std::string operator()(const GoalSpec& g) const {
      return "Goal: " + pretty_print(g.condition) + ".";
    }
  };
  return std::visit(Visitor{}, stmt.body);
}

}  // namespace ecosim::dsl
