#include "nidsfs/csv.hpp"

#include <stdexcept>

namespace nidsfs::csv {

std::vector<Record> parse(std::string_view text) {
  std::vector<Record> out;
  Record current;
  std::string field;
  bool in_quotes = false;
  bool after_quote = false;  // closing quote seen; only a delimiter may follow
  bool row_has_content = false;
  std::size_t line = 1;
  current.line = 1;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    after_quote = false;
  };
  auto end_row = [&] {
    if (row_has_content) {
      end_field();
      out.push_back(std::move(current));
    }
    current = Record{};
    field.clear();
    after_quote = false;
    row_has_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
          after_quote = true;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == ',') {
      row_has_content = true;
      end_field();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_row();
      ++line;
      current.line = line;
    } else if (c == '"') {
      if (!field.empty() || after_quote) {
        throw std::runtime_error("unexpected quote on line " + std::to_string(line));
      }
      if (!row_has_content) current.line = line;
      row_has_content = true;
      in_quotes = true;
    } else {
      if (after_quote) {
        throw std::runtime_error("text after closing quote on line " + std::to_string(line));
      }
      row_has_content = true;
      field.push_back(c);
    }
  }
  if (in_quotes) throw std::runtime_error("unterminated quoted field");
  end_row();
  return out;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += escape(fields[i]);
  }
  return out;
}

}  // namespace nidsfs::csv
