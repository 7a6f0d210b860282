#include "nidsfs/value.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace nidsfs {

std::string_view to_string(AttributeKind kind) noexcept {
  return kind == AttributeKind::Numeric ? "numeric" : "categorical";
}

Value Value::numeric(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("numeric value must be finite");
  Value out;
  out.data_ = v;
  return out;
}

Value Value::categorical(std::string token) {
  Value out;
  out.data_ = std::move(token);
  return out;
}

std::string Value::to_text() const {
  if (is_numeric()) return format_number(as_number());
  if (is_categorical()) return as_token();
  return {};
}

bool Value::operator==(const Value& other) const noexcept {
  if (data_.index() != other.data_.index()) return false;
  if (is_numeric()) {
    return std::bit_cast<std::uint64_t>(as_number()) ==
           std::bit_cast<std::uint64_t>(other.as_number());
  }
  if (is_categorical()) return as_token() == other.as_token();
  return true;
}

std::strong_ordering Value::operator<=>(const Value& other) const noexcept {
  if (data_.index() != other.data_.index()) return data_.index() <=> other.data_.index();
  if (is_numeric()) {
    const double a = as_number();
    const double b = other.as_number();
    if (a < b) return std::strong_ordering::less;
    if (b < a) return std::strong_ordering::greater;
    return std::bit_cast<std::int64_t>(a) <=> std::bit_cast<std::int64_t>(b);
  }
  if (is_categorical()) {
    const int c = as_token().compare(other.as_token());
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  return std::strong_ordering::equal;
}

std::size_t Value::hash() const noexcept {
  if (is_numeric()) {
    return std::hash<std::uint64_t>{}(std::bit_cast<std::uint64_t>(as_number())) ^ 0x9e3779b97f4a7c15ULL;
  }
  if (is_categorical()) return std::hash<std::string>{}(as_token());
  return 0;
}

std::optional<double> parse_number(std::string_view text) noexcept {
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') {
    text.remove_prefix(1);
    if (text.empty() || text.front() == '-' || text.front() == '+') return std::nullopt;
  }
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v, std::chars_format::general);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

}  // namespace nidsfs
