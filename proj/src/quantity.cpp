#include "ecosim/quantity.hpp"

#include <cctype>

#include "ecosim/error.hpp"

namespace ecosim {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownKind: return "UnknownKind";
    case ErrorCode::UnknownEntity: return "UnknownEntity";
    case ErrorCode::UnknownProperty: return "UnknownProperty";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DuplicateKind: return "DuplicateKind";
    case ErrorCode::CycleRejected: return "CycleRejected";
    case ErrorCode::NoReferent: return "NoReferent";
    case ErrorCode::AmbiguousReferent: return "AmbiguousReferent";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NotEcoStatement: return "NotEcoStatement";
    case ErrorCode::NotFactStatement: return "NotFactStatement";
    case ErrorCode::UnresolvedReferent: return "UnresolvedReferent";
    case ErrorCode::LibraryNotFound: return "LibraryNotFound";
    case ErrorCode::DuplicateLibrary: return "DuplicateLibrary";
    case ErrorCode::NotSituationRule: return "NotSituationRule";
    case ErrorCode::SpecificRuleNotPromotable: return "SpecificRuleNotPromotable";
    case ErrorCode::UnknownRule: return "UnknownRule";
    case ErrorCode::IoError: return "IoError";
  }
  return "?";
}

const char* to_string(Dimension d) {
  switch (d) {
    case Dimension::Mass: return "mass";
    case Dimension::Count: return "count";
    case Dimension::Dimensionless: return "dimensionless";
  }
  return "?";
}

namespace {

void require_same(const Quantity& a, const Quantity& b) {
  if (a.dimension != b.dimension) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string("cannot combine ") + to_string(a.dimension) + " with " +
                    to_string(b.dimension));
  }
}

}  // namespace

Quantity operator+(const Quantity& a, const Quantity& b) {
  require_same(a, b);
  return {a.magnitude + b.magnitude, a.dimension};
}

std::strong_ordering compare(const Quantity& a, const Quantity& b) {
  require_same(a, b);
  return a.magnitude <=> b.magnitude;
}

std::optional<std::int64_t> unit_factor(std::string_view unit) {
  if (unit == "g") return 1;
  if (unit == "kg") return 1000;
  return std::nullopt;
}

std::optional<Quantity> parse_quantity(std::string_view text) {
  std::size_t i = 0;
  std::int64_t value = 0;
  std::size_t digits = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    if (value > (INT64_MAX - 9) / 10) return std::nullopt;
    value = value * 10 + (text[i] - '0');
    ++i;
    ++digits;
  }
  if (digits == 0) return std::nullopt;
  while (i < text.size() && text[i] == ' ') ++i;
  std::string_view unit = text.substr(i);
  if (unit.empty()) return Quantity::count(value);
  auto factor = unit_factor(unit);
  if (!factor) return std::nullopt;
  if (value > INT64_MAX / *factor) return std::nullopt;
  return Quantity::grams(value * *factor);
}

std::string format_quantity(const Quantity& q) {
  switch (q.dimension) {
    case Dimension::Mass:
      if (q.magnitude % 1000 == 0 && q.magnitude != 0) {
        return std::to_string(q.magnitude / 1000) + " kg";
      }
      return std::to_string(q.magnitude) + " g";
    case Dimension::Count:
    case Dimension::Dimensionless:
      return std::to_string(q.magnitude);
  }
  return {};
}

}  // namespace ecosim
