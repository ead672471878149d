#include "rydsim/table.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "rydsim/error.hpp"

namespace rydsim {

void Table::add_row(std::vector<double> row) {
    if (row.size() != columns.size()) throw DimensionError("table row width does not match header");
    rows.push_back(std::move(row));
}

std::vector<double> Table::column(std::size_t index) const {
    if (index >= columns.size()) throw DimensionError("table column index out of range");
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(row[index]);
    return out;
}

std::string format_number(double value) {
    if (value == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

void write_csv(std::ostream& out, const Table& table) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out << ',';
        out << table.columns[c];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            out << format_number(row[c]);
        }
        out << '\n';
    }
}

std::string to_csv(const Table& table) {
    std::ostringstream out;
    write_csv(out, table);
    return out.str();
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace

Table read_csv(std::istream& in) {
    Table table;
    std::string line;
    if (!std::getline(in, line) || line.empty()) throw DimensionError("csv: missing header row");
    if (line.back() == '\r') line.pop_back();
    table.columns = split(line);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split(line);
        if (fields.size() != table.columns.size())
            throw DimensionError("csv line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(table.columns.size()) + " fields");
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) {
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc{} || ptr != f.data() + f.size())
                throw DimensionError("csv line " + std::to_string(line_no) + ": not a number: '" + f + "'");
            row.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace rydsim
