#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ecosim {

enum class Dimension { Mass, Count, Dimensionless };

const char* to_string(Dimension d);

/// Non-negative integer amount in base units (grams for mass).
struct Quantity {
  std::int64_t magnitude = 0;
  Dimension dimension = Dimension::Dimensionless;

  static Quantity grams(std::int64_t g) { return {g, Dimension::Mass}; }
  static Quantity kilograms(std::int64_t kg) { return {kg * 1000, Dimension::Mass}; }
  static Quantity count(std::int64_t n) { return {n, Dimension::Count}; }

  friend bool operator==(const Quantity&, const Quantity&) = default;
};

// Arithmetic and comparison throw DimensionMismatch across dimensions.
Quantity operator+(const Quantity& a, const Quantity& b);
std::strong_ordering compare(const Quantity& a, const Quantity& b);

/// Multiplier to base units for a unit word ("g", "kg"); nullopt if unknown.
std::optional<std::int64_t> unit_factor(std::string_view unit);

/// Parses "20kg", "20 kg", "500 g" or a bare count "3".
std::optional<Quantity> parse_quantity(std::string_view text);

/// "20 kg" when the gram amount is a whole number of kilograms, else "500 g".
std::string format_quantity(const Quantity& q);

}  // namespace ecosim
