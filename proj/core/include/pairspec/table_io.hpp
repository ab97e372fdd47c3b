#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string_view>
#include <vector>

namespace pairspec {

struct TableRow {
    double x = 0.0;
    double y = 0.0;
    std::size_t line = 0;  // 1-based source line, for error reporting
};

/// Reads a two-column whitespace-separated numeric table. Lines are
/// stripped at the first '#'; blank lines are skipped. Rows with anything
/// other than exactly two numbers raise ParseError with the line number.
/// An input with no data rows raises ParseError as well.
std::vector<TableRow> read_two_column_table(std::istream& in,
                                            std::string_view context);

/// File variant; raises IoError when the file cannot be opened.
std::vector<TableRow> read_two_column_table(const std::filesystem::path& path);

}  // namespace pairspec
