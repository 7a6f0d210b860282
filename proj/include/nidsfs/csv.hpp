#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace nidsfs::csv {

/// One parsed record plus the 1-based physical line it started on.
struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

/// Splits comma-delimited text into records. Accepts `\n` and `\r\n`
/// endings; quoted fields may contain commas, newlines and doubled quotes.
/// Blank lines are skipped. Throws std::runtime_error on an unterminated
/// quote or on text after a closing quote.
std::vector<Record> parse(std::string_view text);

/// Quotes a field only when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

std::string join(const std::vector<std::string>& fields);

}  // namespace nidsfs::csv
