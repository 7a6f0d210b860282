#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace nidsfs {

/// Binary class of a record: normal traffic or attack.
enum class Label : std::uint8_t { Normal = 0, Attack = 1 };

constexpr int to_int(Label l) noexcept { return static_cast<int>(l); }
constexpr Label label_from_int(int v) noexcept { return v == 0 ? Label::Normal : Label::Attack; }

enum class AttributeKind { Numeric, Categorical };

std::string_view to_string(AttributeKind kind) noexcept;

struct AttributeSchema {
  std::string name;
  std::size_t index = 0;
  AttributeKind kind = AttributeKind::Numeric;

  bool operator==(const AttributeSchema&) const = default;
};

/// A single attribute cell: a finite real number, a categorical token, or
/// missing. Numeric equality is exact bit equality of the stored double.
class Value {
 public:
  Value() = default;

  static Value missing() { return Value(); }
  /// Throws std::invalid_argument for NaN or infinite input.
  static Value numeric(double v);
  static Value categorical(std::string token);

  bool is_missing() const noexcept { return std::holds_alternative<std::monostate>(data_); }
  bool is_numeric() const noexcept { return std::holds_alternative<double>(data_); }
  bool is_categorical() const noexcept { return std::holds_alternative<std::string>(data_); }

  double as_number() const { return std::get<double>(data_); }
  const std::string& as_token() const { return std::get<std::string>(data_); }

  /// Text form used by CSV output and dumps. Numbers use the shortest
  /// representation that parses back to the same double; Missing is "".
  std::string to_text() const;

  bool operator==(const Value& other) const noexcept;

  /// Total order: Missing < Numeric < Categorical; numbers by value (bit
  /// pattern breaks ties between -0 and +0); tokens lexicographically.
  std::strong_ordering operator<=>(const Value& other) const noexcept;

  std::size_t hash() const noexcept;

 private:
  std::variant<std::monostate, double, std::string> data_;
};

struct ValueHash {
  std::size_t operator()(const Value& v) const noexcept { return v.hash(); }
};

/// Locale-independent real-number parse. Accepts an optional sign, period
/// decimal separator and exponent; the whole cell must be consumed and the
/// result must be finite.
std::optional<double> parse_number(std::string_view text) noexcept;

/// Shortest round-trip decimal text for a finite double.
std::string format_number(double v);

}  // namespace nidsfs
