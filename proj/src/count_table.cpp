#include "dmn/count_table.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string_view>

namespace dmn {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_cells(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

std::optional<Count> parse_count(std::string_view cell) {
    Count value = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) return std::nullopt;
    return value;
}

bool all_integers(const std::vector<std::string_view>& cells) {
    for (auto c : cells) {
        if (!parse_count(c)) return false;
    }
    return true;
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

CountTable parse_count_table(std::istream& in) {
    CountTable table;
    std::string raw;
    std::size_t line_no = 0;
    bool first = true;
    std::size_t width = 0;

    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;

        const auto cells = split_cells(line);
        if (first) {
            first = false;
            width = cells.size();
            if (!all_integers(cells)) {
                for (auto c : cells) {
                    if (c.empty()) throw ParseError(line_no, "empty column name in header");
                    table.column_names.emplace_back(c);
                }
                continue;
            }
        }
        if (cells.size() != width) {
            throw ParseError(line_no, "expected " + std::to_string(width) + " cells, found " +
                                          std::to_string(cells.size()));
        }
        std::vector<Count> counts;
        counts.reserve(cells.size());
        for (std::size_t k = 0; k < cells.size(); ++k) {
            const auto v = parse_count(cells[k]);
            if (!v) {
                throw ParseError(line_no, "cell " + std::to_string(k + 1) + " ('" + std::string(cells[k]) +
                                              "') is not an integer");
            }
            if (*v < 0) {
                throw ParseError(line_no, "cell " + std::to_string(k + 1) + " is negative");
            }
            counts.push_back(*v);
        }
        try {
            table.rows.emplace_back(std::move(counts));
        } catch (const ResourceError& e) {
            throw ParseError(line_no, e.what());
        }
        table.line_numbers.push_back(line_no);
    }
    if (in.bad()) throw ParseError(line_no, "read error");
    return table;
}

CountTable read_count_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open '" + path + "'");
    return parse_count_table(in);
}

void write_count_table(std::ostream& out, const CountTable& table) {
    for (std::size_t k = 0; k < table.column_names.size(); ++k) {
        out << (k ? "," : "") << table.column_names[k];
    }
    if (!table.column_names.empty()) out << '\n';
    for (const CountVector& row : table.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << row[k];
        out << '\n';
    }
}

}  // namespace dmn
