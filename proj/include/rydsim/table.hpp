#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rydsim {

// Column-oriented numeric table; the serialization unit for every trace.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> row);
    std::vector<double> column(std::size_t index) const;
};

// 12 significant digits, shortest form.
std::string format_number(double value);

// Comma separated, header row, '\n' line endings.
void write_csv(std::ostream& out, const Table& table);
std::string to_csv(const Table& table);
Table read_csv(std::istream& in);

}  // namespace rydsim
