#include "pairspec/table_io.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "pairspec/errors.hpp"

namespace pairspec {

std::vector<TableRow> read_two_column_table(std::istream& in,
                                            std::string_view context) {
    std::vector<TableRow> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream fields(line);
        double x = 0.0;
        double y = 0.0;
        if (!(fields >> x)) {
            continue;  // blank or comment-only line
        }
        if (!(fields >> y)) {
            throw ParseError(std::string(context) + ": expected two columns",
                             line_no);
        }
        std::string extra;
        if (fields >> extra) {
            throw ParseError(std::string(context) + ": trailing token '" +
                                 extra + "'",
                             line_no);
        }
        rows.push_back({x, y, line_no});
    }
    if (rows.empty()) {
        throw ParseError(std::string(context) + ": no data rows");
    }
    return rows;
}

std::vector<TableRow> read_two_column_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open table file: " + path.string());
    }
    return read_two_column_table(in, path.string());
}

}  // namespace pairspec
