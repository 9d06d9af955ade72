#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmn/types.hpp"

namespace dmn {

// Malformed count-table input. what() carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& message);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Observations read from a CSV count file.
///
/// Format: one observation per row, comma-separated non-negative integers.
/// Lines whose first non-blank character is '#' and blank lines are skipped.
/// The first remaining line is a header of column names unless every one of
/// its cells is an integer.
struct CountTable {
    std::vector<CountVector> rows;
    std::vector<std::string> column_names;  // empty when the file has no header
    std::vector<std::size_t> line_numbers;  // source line of each row

    std::size_t categories() const { return rows.empty() ? 0 : rows.front().size(); }
};

CountTable parse_count_table(std::istream& in);
CountTable read_count_table(const std::string& path);

void write_count_table(std::ostream& out, const CountTable& table);

}  // namespace dmn
