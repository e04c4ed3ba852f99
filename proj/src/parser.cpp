#include "ecosim/parser.hpp"

#include <algorithm>
#include <array>
#include <initializer_list>

namespace ecosim::dsl {

namespace {

constexpr std::array<std::string_view, 20> kNumberWords = {
    "one",     "two",     "three",     "four",     "five",    "six",     "seven",
    "eight",   "nine",    "ten",       "eleven",   "twelve",  "thirteen", "fourteen",
    "fifteen", "sixteen", "seventeen", "eighteen", "nineteen", "twenty"};

constexpr std::array<std::string_view, 7> kPluraliaTantum = {
    "jeans", "pants", "trousers", "shorts", "clothes", "glasses", "scissors"};

constexpr std::array<std::string_view, 66> kReserved = {
    "a",       "an",     "the",     "this",   "all",      "there",   "is",       "are",
    "be",      "can",    "cannot",  "not",    "usually",  "of",      "in",       "on",
    "at",      "and",    "up",      "to",     "before",   "if",      "what",     "how",
    "many",    "does",   "goal",    "has",    "called",   "kind",    "total",    "layer",
    "portable", "carried", "worn",  "no",     "he",       "she",     "it",       "put",
    "puts",    "take",   "takes",   "took",   "wear",     "wears",   "wore",     "drop",
    "drops",   "dropped", "contain", "contains", "hold",  "more",    "less",     "than",
    "least",   "most",   "exactly", "mass",   "count",    "g",       "kg",       "do",
    "by",      "or"};

}  // namespace

bool is_reserved(std::string_view word) {
  if (std::find(kReserved.begin(), kReserved.end(), word) != kReserved.end()) return true;
  return number_word(word).has_value();
}

bool is_plurale_tantum(std::string_view word) {
  return std::find(kPluraliaTantum.begin(), kPluraliaTantum.end(), word) != kPluraliaTantum.end();
}

namespace {

bool vowel(char c) { return std::string_view("aeiou").find(c) != std::string_view::npos; }

}  // namespace

// Regular English plurals only: boxes, dresses, berries, bags.
std::string singularize(std::string_view word) {
  if (is_plurale_tantum(word)) return std::string(word);
  auto strip = [&](std::size_t n) { return std::string(word.substr(0, word.size() - n)); };
  if (word.size() > 4 && word.ends_with("ies") && !vowel(word[word.size() - 4])) {
    return strip(3) + "y";
  }
  for (std::string_view suffix : {"sses", "ches", "shes", "xes", "zes"}) {
    if (word.size() > suffix.size() && word.ends_with(suffix)) return strip(2);
  }
  if (word.size() > 1 && word.back() == 's') return strip(1);
  return std::string(word);
}

std::string pluralize(std::string_view word) {
  if (is_plurale_tantum(word)) return std::string(word);
  std::string w(word);
  if (w.size() > 1 && w.back() == 'y' && !vowel(w[w.size() - 2])) return w.substr(0, w.size() - 1) + "ies";
  if (w.ends_with("ss") || w.ends_with("ch") || w.ends_with("sh") || w.ends_with("x") ||
      w.ends_with("z")) {
    return w + "es";
  }
  return w + "s";
}

std::string indefinite_article(std::string_view word) {
  if (!word.empty() && std::string_view("aeiou").find(word.front()) != std::string_view::npos) {
    return "an";
  }
  return "a";
}

std::optional<std::int64_t> number_word(std::string_view word) {
  if (word == "no") return 0;
  for (std::size_t i = 0; i < kNumberWords.size(); ++i) {
    if (kNumberWords[i] == word) return static_cast<std::int64_t>(i + 1);
  }
  return std::nullopt;
}

std::string spell_number(std::int64_t n) {
  if (n == 0) return "no";
  if (n >= 1 && n <= 20) return std::string(kNumberWords[static_cast<std::size_t>(n - 1)]);
  return std::to_string(n);
}

namespace {

bool is_builtin_verb_word(std::string_view w) {
  return w == "put" || w == "take" || w == "wear" || w == "drop";
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text), toks_(tokenize(text)) {}

  bool at_end() const { return pos_ >= toks_.size(); }

  Statement statement() {
    std::size_t first = pos_;
    Body body = statement_body();
    return Statement{std::move(body), Span{toks_[first].span.begin, toks_[pos_ - 1].span.end}};
  }

 private:
  std::string_view text_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  // --- token helpers --------------------------------------------------------

  const Token* peek(std::size_t k = 0) const {
    return pos_ + k < toks_.size() ? &toks_[pos_ + k] : nullptr;
  }

  bool is_word(std::size_t k, std::string_view w) const {
    const Token* t = peek(k);
    return t && t->kind == TokenKind::Word && t->text == w;
  }

  bool is_punct(std::size_t k, std::string_view p) const {
    const Token* t = peek(k);
    return t && t->kind == TokenKind::Punct && t->text == p;
  }

  bool is_content(std::size_t k) const {
    const Token* t = peek(k);
    return t && t->kind == TokenKind::Word && !is_reserved(t->text);
  }

  bool is_number(std::size_t k) const {
    const Token* t = peek(k);
    return t && (t->kind == TokenKind::Number ||
                 (t->kind == TokenKind::Word && number_word(t->text)));
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    std::string list;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) list += ", ";
      list += expected[i];
    }
    if (at_end()) {
      throw ParseError(ParseFailure::UnexpectedEnd, Span{text_.size(), text_.size()},
                       std::move(expected), "unexpected end of input; expected " + list);
    }
    const Token& t = toks_[pos_];
    throw ParseError(ParseFailure::UnexpectedToken, t.span, std::move(expected),
                     "unexpected " + describe(t) + "; expected " + list);
  }

  [[noreturn]] void invalid(const std::string& message) const {
    Span s = at_end() ? Span{text_.size(), text_.size()} : toks_[pos_].span;
    throw ParseError(ParseFailure::InvalidValue, s, {}, message);
  }

  bool accept(std::string_view w) {
    if (is_word(0, w) || is_punct(0, w)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(std::string_view w) {
    if (!accept(w)) fail({std::string(w)});
  }

  std::string content_word(const char* what) {
    if (!is_content(0)) fail({what});
    return toks_[pos_++].text;
  }

  std::int64_t number() {
    const Token* t = peek();
    if (!t || !is_number(0)) fail({"number"});
    ++pos_;
    if (t->kind == TokenKind::Number) return std::stoll(t->text);
    return *number_word(t->text);
  }

  Quantity quantity() {
    std::int64_t n = number();
    const Token* t = peek();
    if (t && (t->kind == TokenKind::Unit ||
              (t->kind == TokenKind::Word && (t->text == "g" || t->text == "kg")))) {
      ++pos_;
      return Quantity::grams(n * *unit_factor(t->text));
    }
    return Quantity::count(n);
  }

  void end_declarative() { expect("."); }

  void end_command() {
    if (!accept(".") && !accept("!")) fail({"'.'"});
  }

  // --- noun phrases ---------------------------------------------------------

  /// Determiner length (in tokens) of the noun phrase starting at pos_, and
  /// the length of the content-word run that follows it. Pronouns: {1, 0}.
  std::pair<std::size_t, std::size_t> np_extent() const {
    std::size_t det = 0;
    if (is_word(0, "it") || is_word(0, "he") || is_word(0, "she")) return {1, 0};
    if (is_word(0, "the") && is_number(1)) {
      det = 2;
    } else if (is_word(0, "a") || is_word(0, "an") || is_word(0, "the") || is_word(0, "this") ||
               is_word(0, "all") || is_number(0)) {
      det = 1;
    }
    std::size_t run = 0;
    while (is_content(det + run)) ++run;
    return {det, run};
  }

  bool starts_np(std::size_t k) const {
    static constexpr std::array<std::string_view, 8> dets = {"a",  "an", "the", "this",
                                                             "all", "he", "she", "it"};
    const Token* t = peek(k);
    if (!t) return false;
    if (is_number(k)) return true;
    return t->kind == TokenKind::Word &&
           std::find(dets.begin(), dets.end(), t->text) != dets.end();
  }

  /// How many trailing run words belong to a following verb: one when the
  /// noun phrase is followed by a token in `followers` and its run has a word
  /// to spare.
  std::size_t verb_tail(bool (Parser::*follows)(std::size_t) const) const {
    auto [det, run] = np_extent();
    if (run >= 2 && (this->*follows)(det + run)) return 1;
    return 0;
  }

  bool ends_query(std::size_t k) const { return is_punct(k, "?"); }
  bool ends_goal_atom(std::size_t k) const {
    return is_punct(k, ".") || is_word(k, "and") || !peek(k);
  }

  NounPhrase noun_phrase(std::size_t leave = 0) {
    NounPhrase np;
    std::size_t start = pos_;
    bool plural = false;
    if (accept("a") || accept("an")) {
      np.det = Determiner::Indefinite;
    } else if (is_word(0, "the") && is_number(1)) {
      ++pos_;
      np.det = Determiner::DefiniteCount;
      np.count = number();
      plural = np.count != 1;
    } else if (accept("the")) {
      np.det = Determiner::Definite;
    } else if (accept("this")) {
      np.det = Determiner::Demonstrative;
    } else if (accept("all")) {
      np.det = Determiner::All;
      plural = true;
    } else if (is_word(0, "it") || is_word(0, "he") || is_word(0, "she")) {
      np.det = Determiner::Pronoun;
      np.noun = toks_[pos_++].text;
      return np;
    } else if (is_number(0)) {
      np.det = Determiner::Count;
      np.count = number();
      plural = np.count != 1;
    } else if (is_content(0)) {
      np.det = Determiner::Bare;
      plural = true;
    } else {
      fail({"noun phrase"});
    }
    std::size_t run = 0;
    while (is_content(run)) ++run;
    run = run > leave ? run - leave : 0;
    std::vector<std::string> words;
    for (std::size_t i = 0; i < run; ++i) words.push_back(toks_[pos_++].text);
    if (words.empty()) fail({"noun"});
    np.noun = words.back();
    words.pop_back();
    np.adjectives = std::move(words);
    if (np.det == Determiner::Bare && !is_plurale_tantum(np.noun) && np.noun.back() != 's') {
      pos_ = start;
      fail({"determiner"});
    }
    if (plural) np.noun = singularize(np.noun);
    return np;
  }

  NounPhrase specific_np(std::size_t leave = 0) {
    std::size_t start = pos_;
    NounPhrase np = noun_phrase(leave);
    if (!np.is_specific()) {
      pos_ = start;
      fail({"'the'", "'this'", "pronoun"});
    }
    return np;
  }

  std::vector<NounPhrase> np_list() {
    std::vector<NounPhrase> out;
    out.push_back(noun_phrase());
    while (accept("and") || accept(",")) {
      accept("and");
      out.push_back(noun_phrase());
    }
    return out;
  }

  /// Kind name from a generic subject without adjectives.
  std::string bare_kind(const NounPhrase& np, std::size_t at) {
    if (!np.adjectives.empty() || !(np.det == Determiner::Indefinite || np.det == Determiner::Bare)) {
      pos_ = at;
      fail({"'a'", "'an'", "plural noun"});
    }
    return np.noun;
  }

  // --- statements -----------------------------------------------------------

  Body statement_body() {
    const Token* t = peek();
    if (!t) fail({"statement"});
    if (t->kind != TokenKind::Word && t->kind != TokenKind::Number) fail({"statement"});
    const std::string& w = t->text;
    if (w == "there") return Fact{existence()};
    if (w == "goal") return goal();
    if (w == "what") return what_query();
    if (w == "how") {
      Query q;
      q.body = how_query();
      return q;
    }
    if (w == "does" || w == "is" || w == "can") {
      Query q;
      q.body = polar_query();
      return q;
    }
    if (is_builtin_verb_word(w)) {
      Command c = imperative();
      end_command();
      return c;
    }
    if (w == "the" && is_content(1) && is_word(2, "of")) return property_of();
    if (is_content(0)) {
      std::size_t j = 0;
      while (is_content(j)) ++j;
      if (!(is_word(j, "are") || is_word(j, "can") || is_word(j, "cannot"))) {
        Command c = imperative();
        end_command();
        return c;
      }
    }
    return subject_statement();
  }

  ExistsFact existence() {
    expect("there");
    std::size_t at = pos_;
    bool singular = accept("is");
    if (!singular) expect("are");
    std::size_t np_at = pos_;
    NounPhrase np = noun_phrase();
    bool ok = singular ? (np.det == Determiner::Indefinite ||
                          (np.det == Determiner::Count && np.count == 1))
                       : (np.det == Determiner::Count && np.count != 1);
    if (!ok) {
      pos_ = np_at;
      fail(singular ? std::vector<std::string>{"'a'", "'an'", "'one'"}
                    : std::vector<std::string>{"number"});
    }
    (void)at;
    end_declarative();
    return ExistsFact{np};
  }

  Body property_of() {
    expect("the");
    std::string property = content_word("property name");
    expect("of");
    std::size_t np_at = pos_;
    NounPhrase subject = noun_phrase();
    expect("is");
    bool usually = accept("usually");
    Quantity q = quantity();
    end_declarative();
    if (usually) {
      if (!(subject.det == Determiner::Indefinite || subject.det == Determiner::Bare) ||
          !subject.adjectives.empty()) {
        pos_ = np_at;
        fail({"'a'", "'an'"});
      }
      return DefaultDecl{subject, property, q};
    }
    if (subject.det == Determiner::All || subject.det == Determiner::Count ||
        subject.det == Determiner::DefiniteCount) {
      pos_ = np_at;
      fail({"'a'", "'the'", "'this'"});
    }
    return Fact{AssignFact{subject, property, q}};
  }

  Body subject_statement() {
    std::size_t subj_at = pos_;
    std::size_t leave = 0;
    if (is_word(0, "the") || is_word(0, "this")) leave = verb_tail(&Parser::starts_np);
    NounPhrase subj = noun_phrase(leave);
    if (subj.det == Determiner::Count || subj.det == Determiner::DefiniteCount) {
      pos_ = subj_at;
      fail({"'a'", "'the'", "'this'", "'all'"});
    }
    if (accept("is") || accept("are")) return after_copula(subj, subj_at);
    if (accept("has")) {
      std::string kind = bare_kind(subj, subj_at);
      expect("a");
      PropertyType type;
      if (accept("mass")) {
        type = PropertyType::Mass;
      } else if (accept("count")) {
        type = PropertyType::Count;
      } else {
        fail({"'mass'", "'count'"});
      }
      expect("called");
      std::string name = content_word("property name");
      end_declarative();
      return PropertyDecl{kind, name, type};
    }
    if (accept("can")) return modal(subj, subj_at, Modality::Can);
    if (accept("cannot")) return modal(subj, subj_at, Modality::Cannot);
    if (subj.is_specific()) {
      if (auto verb = narrative_verb()) {
        Command c = command_body(subj, *verb);
        end_command();
        return c;
      }
    }
    fail({"'is'", "'are'", "'can'", "'cannot'", "'has'", "verb"});
  }

  Body after_copula(const NounPhrase& subj, std::size_t subj_at) {
    if (is_word(0, "a") && is_word(1, "kind")) {
      std::string kind = bare_kind(subj, subj_at);
      expect("a");
      expect("kind");
      expect("of");
      std::string parent = content_word("kind name");
      end_declarative();
      return KindDecl{kind, parent};
    }
    if (accept("usually")) {
      if (!(subj.det == Determiner::Indefinite || subj.det == Determiner::Bare) ||
          !subj.adjectives.empty()) {
        pos_ = subj_at;
        fail({"'a'", "'an'"});
      }
      bool value = !accept("not");
      std::string flag = content_word("adjective");
      end_declarative();
      return DefaultDecl{subj, flag, value};
    }
    bool negated = accept("not");
    if (accept("portable")) {
      end_declarative();
      return AffordanceDecl{negated ? Modality::Cannot : Modality::Can, subj, PortableFrame{}};
    }
    if (subj.det == Determiner::All) {
      fail({"'portable'"});
    }
    if (!negated && accept("in")) {
      if (!subj.is_specific()) {
        pos_ = subj_at;
        fail({"'the'", "'this'", "pronoun"});
      }
      NounPhrase container = specific_np();
      end_declarative();
      return Fact{InsideFact{subj, container}};
    }
    std::string flag = content_word("adjective");
    end_declarative();
    return Fact{FlagFact{subj, flag, !negated}};
  }

  Body modal(const NounPhrase& subj, std::size_t subj_at, Modality modality) {
    if (subj.det == Determiner::Pronoun && subj.noun == "it") {
      // "it" is fine as a specific subject; nothing to check.
    }
    if (accept("be")) {
      if (accept("carried")) {
        end_declarative();
        return AffordanceDecl{modality, subj, PortableFrame{}};
      }
      if (accept("worn")) {
        WearFrame frame;
        if (modality == Modality::Can) {
          expect("on");
          expect("the");
          frame.slot = content_word("body slot");
          expect("at");
          expect("layer");
          std::size_t layer_at = pos_;
          std::int64_t layer = number();
          if (layer < 1 || layer > 100) {
            pos_ = layer_at;
            invalid("layer must be between 1 and 100");
          }
          frame.layer = static_cast<int>(layer);
        }
        end_declarative();
        return AffordanceDecl{modality, subj, frame};
      }
      if (modality == Modality::Can && is_content(0)) {
        if (!subj.is_generic() || subj.det == Determiner::All || !subj.adjectives.empty()) {
          pos_ = subj_at;
          fail({"'a'", "'an'", "plural noun"});
        }
        std::string flag = content_word("adjective");
        end_declarative();
        return PropertyDecl{subj.noun, flag, PropertyType::Flag};
      }
      fail(modality == Modality::Can
               ? std::vector<std::string>{"'carried'", "'worn'", "adjective"}
               : std::vector<std::string>{"'carried'", "'worn'"});
    }
    if (modality == Modality::Can && accept("hold")) {
      expect("up");
      expect("to");
      std::size_t q_at = pos_;
      Quantity limit = quantity();
      if (limit.dimension != Dimension::Mass) {
        pos_ = q_at;
        invalid("capacity limit needs a mass unit (g or kg)");
      }
      expect("before");
      const Token* t = peek();
      if (!is_content(0) || t->text.size() <= 4 || !t->text.ends_with("ing")) {
        fail({"-ing verb"});
      }
      std::string event = t->text.substr(0, t->text.size() - 3);
      ++pos_;
      end_declarative();
      return AffordanceDecl{modality, subj, HoldFrame{limit, event}};
    }
    if (is_content(0)) {
      std::string verb = toks_[pos_++].text;
      std::size_t np_at = pos_;
      NounPhrase patient = noun_phrase();
      if (patient.det != Determiner::Bare || !patient.adjectives.empty()) {
        pos_ = np_at;
        fail({"plural noun"});
      }
      end_declarative();
      return AffordanceDecl{modality, subj, VerbFrame{verb, patient.noun}};
    }
    fail({"'be'", "'hold'", "verb"});
  }

  /// Consumes a narrative verb form ("put", "puts", "took", ...) and returns
  /// the normalized verb (wear for "put on").
  std::optional<std::string> narrative_verb() {
    const Token* t = peek();
    if (!t || t->kind != TokenKind::Word) return std::nullopt;
    const std::string& w = t->text;
    std::string verb;
    if (w == "put" || w == "puts") {
      ++pos_;
      return accept("on") ? kVerbWear : kVerbPutIn;
    }
    if (w == "take" || w == "takes" || w == "took") verb = kVerbTake;
    else if (w == "wear" || w == "wears" || w == "wore") verb = kVerbWear;
    else if (w == "drop" || w == "drops" || w == "dropped") verb = kVerbDrop;
    else if (!is_reserved(w)) verb = (w.size() > 1 && w.back() == 's') ? w.substr(0, w.size() - 1) : w;
    else return std::nullopt;
    ++pos_;
    return verb;
  }

  Command command_body(std::optional<NounPhrase> agent, const std::string& verb) {
    Command c;
    c.agent = std::move(agent);
    c.verb = verb;
    c.patients = np_list();
    if (verb == kVerbPutIn) {
      expect("in");
      c.target = noun_phrase();
    }
    return c;
  }

  Command imperative() {
    const Token* t = peek();
    if (!t || t->kind != TokenKind::Word) fail({"verb"});
    std::string verb;
    if (t->text == "put") {
      ++pos_;
      verb = accept("on") ? kVerbWear : kVerbPutIn;
    } else if (t->text == "take") {
      ++pos_;
      verb = kVerbTake;
    } else if (t->text == "wear") {
      ++pos_;
      verb = kVerbWear;
    } else if (t->text == "drop") {
      ++pos_;
      verb = kVerbDrop;
    } else if (is_content(0)) {
      verb = toks_[pos_++].text;
    } else {
      fail({"verb"});
    }
    return command_body(std::nullopt, verb);
  }

  /// Command inside "What if ...": imperative or agent + narrative verb.
  Command hypothetical() {
    if (is_builtin_verb_word(peek() ? peek()->text : "") || is_content(0)) return imperative();
    NounPhrase agent = specific_np(verb_tail(&Parser::starts_np));
    auto verb = narrative_verb();
    if (!verb) fail({"verb"});
    return command_body(agent, *verb);
  }

  // --- queries and goals ----------------------------------------------------

  Comparison comparison() {
    if (accept("at")) {
      if (accept("least")) return Comparison::AtLeast;
      if (accept("most")) return Comparison::AtMost;
      fail({"'least'", "'most'"});
    }
    if (accept("more")) {
      expect("than");
      return Comparison::MoreThan;
    }
    if (accept("less")) {
      expect("than");
      return Comparison::LessThan;
    }
    if (accept("exactly")) return Comparison::Exactly;
    fail({"'at least'", "'at most'", "'more than'", "'less than'", "'exactly'"});
  }

  /// After "the total": "P in NP".
  std::pair<std::string, NounPhrase> total_of() {
    std::string property = content_word("property name");
    expect("in");
    NounPhrase container = noun_phrase();
    return {property, container};
  }

  Query what_query() {
    expect("what");
    Query q;
    if (accept("if")) {
      q.what_if = true;
      q.hypotheticals.push_back(hypothetical());
      while (accept(";")) q.hypotheticals.push_back(hypothetical());
      expect("?");
      q.body = basic_query();
      return q;
    }
    q.body = value_query_after_what();
    return q;
  }

  BasicQuery value_query_after_what() {
    expect("is");
    expect("the");
    if (accept("total")) {
      auto [property, container] = total_of();
      expect("?");
      return TotalQuery{property, container};
    }
    std::string property = content_word("property name");
    expect("of");
    NounPhrase subject = noun_phrase();
    expect("?");
    return PropertyQuery{property, subject};
  }

  BasicQuery basic_query() {
    if (is_word(0, "what")) {
      ++pos_;
      return value_query_after_what();
    }
    if (is_word(0, "how")) return how_query();
    if (is_word(0, "does") || is_word(0, "is") || is_word(0, "can")) return polar_query();
    fail({"'does'", "'is'", "'can'", "'what'", "'how'"});
  }

  BasicQuery how_query() {
    expect("how");
    expect("many");
    std::size_t np_at = pos_;
    NounPhrase contents = noun_phrase();
    if (contents.det != Determiner::Bare) {
      pos_ = np_at;
      fail({"plural noun"});
    }
    expect("are");
    expect("in");
    NounPhrase container = noun_phrase();
    expect("?");
    return CountQuery{contents, container};
  }

  NounPhrase counted_np() {
    std::size_t at = pos_;
    NounPhrase np = noun_phrase();
    if (np.det != Determiner::Indefinite && np.det != Determiner::Count) {
      pos_ = at;
      fail({"'a'", "number"});
    }
    return np;
  }

  BasicQuery polar_query() {
    Condition cond;
    if (accept("does")) {
      NounPhrase subj = noun_phrase(verb_tail(&Parser::ends_query));
      if (accept("contain")) {
        cond.conjuncts.push_back(ContainsAtom{subj, counted_np()});
      } else if (accept("wear")) {
        cond.conjuncts.push_back(WearsAtom{subj, noun_phrase()});
      } else {
        cond.conjuncts.push_back(EventAtom{subj, content_word("verb")});
      }
    } else if (accept("is")) {
      if (is_word(0, "the") && is_word(1, "total")) {
        pos_ += 2;
        auto [property, container] = total_of();
        Comparison cmp = comparison();
        Quantity value = quantity();
        cond.conjuncts.push_back(TotalAtom{property, container, cmp, value});
      } else {
        NounPhrase subj = noun_phrase(verb_tail(&Parser::ends_query));
        if (accept("in")) {
          cond.conjuncts.push_back(InAtom{subj, noun_phrase()});
        } else {
          bool negated = accept("not");
          cond.conjuncts.push_back(FlagAtom{subj, content_word("adjective"), negated});
        }
      }
    } else {
      expect("can");
      NounPhrase agent = specific_np(verb_tail(&Parser::starts_np));
      const Token* t = peek();
      std::string verb;
      if (is_word(0, "put")) {
        ++pos_;
        verb = accept("on") ? kVerbWear : kVerbPutIn;
      } else if (t && t->kind == TokenKind::Word &&
                 (t->text == "take" || t->text == "wear" || t->text == "drop")) {
        verb = t->text;
        ++pos_;
      } else if (is_content(0)) {
        verb = toks_[pos_++].text;
      } else {
        fail({"verb"});
      }
      cond.conjuncts.push_back(CanAtom{command_body(agent, verb)});
    }
    expect("?");
    return PolarQuery{cond};
  }

  Atom goal_atom() {
    if (is_word(0, "the") && is_word(1, "total")) {
      pos_ += 2;
      auto [property, container] = total_of();
      expect("is");
      Comparison cmp = comparison();
      Quantity value = quantity();
      return TotalAtom{property, container, cmp, value};
    }
    NounPhrase subj = noun_phrase(verb_tail(&Parser::ends_goal_atom));
    if (accept("is")) {
      if (accept("in")) return InAtom{subj, noun_phrase()};
      bool negated = accept("not");
      return FlagAtom{subj, content_word("adjective"), negated};
    }
    if (accept("contains")) return ContainsAtom{subj, counted_np()};
    if (accept("wears")) return WearsAtom{subj, noun_phrase()};
    const Token* t = peek();
    if (is_content(0) && t->text.size() > 1 && t->text.back() == 's') {
      ++pos_;
      return EventAtom{subj, t->text.substr(0, t->text.size() - 1)};
    }
    fail({"'is'", "'contains'", "'wears'", "verb"});
  }

  GoalSpec goal() {
    expect("goal");
    expect(":");
    GoalSpec g;
    g.condition.conjuncts.push_back(goal_atom());
    while (accept("and")) g.condition.conjuncts.push_back(goal_atom());
    end_declarative();
    return g;
  }

 public:
  void require_end() {
    if (!at_end()) fail({"end of input"});
  }
};

}  // namespace

Statement parse_utterance(std::string_view text) {
  Parser p(text);
  Statement s = p.statement();
  p.require_end();
  return s;
}

std::vector<Statement> parse_text(std::string_view text) {
  Parser p(text);
  std::vector<Statement> out;
  while (!p.at_end()) out.push_back(p.statement());
  return out;
}

const char* to_string(Role r) {
  switch (r) {
    case Role::Eco: return "eco";
    case Role::Fact: return "fact";
    case Role::Do: return "do";
    case Role::Query: return "query";
    case Role::Goal: return "goal";
  }
  return "?";
}

Role classify(const Statement& stmt) {
  struct Visitor {
    Role operator()(const KindDecl&) const { return Role::Eco; }
    Role operator()(const PropertyDecl&) const { return Role::Eco; }
    Role operator()(const AffordanceDecl&) const { return Role::Eco; }
    Role operator()(const DefaultDecl&) const { return Role::Eco; }
    Role operator()(const Fact&) const { return Role::Fact; }
    Role operator()(const Command&) const { return Role::Do; }
    Role operator()(const Query&) const { return Role::Query; }
    Role operator()(const GoalSpec&) const { return Role::Goal; }
  };
  return std::visit(Visitor{}, stmt.body);
}

}  // namespace ecosim::dsl
