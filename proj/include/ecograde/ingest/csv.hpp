#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace ecograde {

/// RFC 4180 reader: comma-delimited, double-quoted fields, "" escapes,
/// quoted fields may span lines, CRLF or LF line endings.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    /// Reads the next record into `fields`. Returns false at end of input.
    bool next(std::vector<std::string>& fields);

    /// Physical line on which the last returned record started (1-based).
    std::size_t line() const noexcept { return record_line_; }

private:
    std::istream& in_;
    std::size_t line_ = 1;
    std::size_t record_line_ = 0;
};

/// Quotes a field when it contains a delimiter, quote, or line break.
std::string csv_escape(std::string_view field);

std::string csv_row(const std::vector<std::string>& fields);

}  // namespace ecograde
