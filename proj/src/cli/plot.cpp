#include "rydsim/cli/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include "rydsim/cli/manifest.hpp"

namespace rydsim::cli {

const std::vector<std::vector<std::string>>& trace_schemas() {
    static const std::vector<std::vector<std::string>> schemas{
        {"delta3_MHz", "signal"},
        {"E_Vcm", "rhoS"},
        {"T_us", "amplitude", "fwhm"},
        {"m", "E_Vcm"},
        {"t_us", "P0", "P1", "P2"},
        {"N", "P1"},
        {"pump_delay_us", "efficiency"},
        {"B_over_rabi", "fidelity"},
        {"input", "output00", "output01", "output10", "output11"},
        {"N", "deviation_compensated", "deviation_uncompensated", "phase_compensated", "phase_uncompensated"},
    };
    return schemas;
}

void check_trace_schema(const Table& table) {
    const auto& schemas = trace_schemas();
    if (std::find(schemas.begin(), schemas.end(), table.columns) == schemas.end()) {
        std::string header;
        for (const auto& c : table.columns) header += (header.empty() ? "" : ",") + c;
        throw SchemaError("unrecognised trace header '" + header + "'");
    }
    if (table.rows.empty()) throw SchemaError("trace has no data rows");
    for (const auto& row : table.rows)
        for (double v : row)
            if (std::isnan(v)) throw SchemaError("trace contains NaN");
}

namespace {

constexpr double width = 720.0;
constexpr double height = 440.0;
constexpr double left = 70.0;
constexpr double right = 150.0;
constexpr double top = 40.0;
constexpr double bottom = 50.0;

const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

Range finite_range(const std::vector<double>& v) {
    Range r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (double x : v) {
        if (!std::isfinite(x)) continue;
        r.lo = std::min(r.lo, x);
        r.hi = std::max(r.hi, x);
    }
    if (!std::isfinite(r.lo)) return {0.0, 1.0};
    if (r.hi - r.lo < 1e-300) {
        r.lo -= 0.5;
        r.hi += 0.5;
    }
    return r;
}

}  // namespace

std::string render_svg(const Table& table, const std::string& title) {
    check_trace_schema(table);
    const auto x = table.column(0);
    std::vector<double> all_y;
    for (std::size_t c = 1; c < table.columns.size(); ++c) {
        const auto y = table.column(c);
        all_y.insert(all_y.end(), y.begin(), y.end());
    }
    const Range rx = finite_range(x);
    const Range ry = finite_range(all_y);
    const double pw = width - left - right;
    const double ph = height - top - bottom;
    auto sx = [&](double v) { return left + (v - rx.lo) / (rx.hi - rx.lo) * pw; };
    auto sy = [&](double v) { return top + (1.0 - (v - ry.lo) / (ry.hi - ry.lo)) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << left << "\" y=\"24\" font-size=\"14\">" << escape(title) << "</text>\n";
    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = rx.lo + (rx.hi - rx.lo) * i / 4.0;
        const double fy = ry.lo + (ry.hi - ry.lo) * i / 4.0;
        svg << "<text x=\"" << sx(fx) << "\" y=\"" << height - bottom + 18 << "\" text-anchor=\"middle\">"
            << format_number(fx) << "</text>\n";
        svg << "<text x=\"" << left - 6 << "\" y=\"" << sy(fy) + 4 << "\" text-anchor=\"end\">"
            << format_number(fy) << "</text>\n";
    }
    svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">"
        << escape(table.columns[0]) << "</text>\n";
    for (std::size_t c = 1; c < table.columns.size(); ++c) {
        const auto y = table.column(c);
        const char* colour = palette[(c - 1) % std::size(palette)];
        svg << "<polyline class=\"series\" data-label=\"" << escape(table.columns[c]) << "\" fill=\"none\" stroke=\""
            << colour << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
            svg << (first ? "" : " ") << sx(x[i]) << "," << sy(y[i]);
            first = false;
        }
        svg << "\"/>\n";
        const double ly = top + 16.0 * static_cast<double>(c);
        svg << "<line x1=\"" << width - right + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << width - right + 32
            << "\" y2=\"" << ly - 4 << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << width - right + 38 << "\" y=\"" << ly << "\">" << escape(table.columns[c])
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::filesystem::path emit_plot(const std::filesystem::path& csv_path, const std::filesystem::path& out_path) {
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw SchemaError("cannot open " + csv_path.string());
    Table table;
    try {
        table = read_csv(in);
    } catch (const DimensionError& e) {
        throw SchemaError(csv_path.string() + ": " + e.what());
    }
    std::filesystem::path target = out_path;
    if (target.empty()) {
        target = csv_path;
        target.replace_extension(".svg");
    }
    write_atomic(target, render_svg(table, csv_path.filename().string()));
    return target;
}

}  // namespace rydsim::cli
