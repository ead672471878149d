#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rydsim/error.hpp"
#include "rydsim/table.hpp"

namespace rydsim::cli {

class SchemaError : public Error {
public:
    using Error::Error;
};

// Header rows of every trace the tool emits.
const std::vector<std::vector<std::string>>& trace_schemas();

// Throws SchemaError unless the table has a known header and at least one row.
void check_trace_schema(const Table& table);

// Line plot of every column against the first; one labeled series per column.
std::string render_svg(const Table& table, const std::string& title);

// Reads a trace CSV, checks it and writes the plot next to it (or to out_path).
std::filesystem::path emit_plot(const std::filesystem::path& csv_path, const std::filesystem::path& out_path = {});

}  // namespace rydsim::cli
