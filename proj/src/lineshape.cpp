#include "rydsim/lineshape.hpp"

#include <algorithm>
#include <string>

#include "rydsim/error.hpp"

namespace rydsim {

void require_increasing(std::span<const double> grid, const char* what) {
    if (grid.empty()) throw DomainError(std::string(what) + ": grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw DomainError(std::string(what) + ": grid must be strictly increasing");
}

ResonanceStats lineshape_stats(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.empty()) throw DimensionError("lineshape_stats: x and y must be nonempty and equal length");
    const auto top = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
    ResonanceStats stats;
    stats.amplitude = y[top];
    stats.peak_position = x[top];
    if (stats.amplitude <= 0.0) {
        stats.truncated = true;
        return stats;
    }
    const double half = 0.5 * stats.amplitude;

    std::size_t lo = top;
    while (lo > 0 && y[lo - 1] >= half) --lo;
    std::size_t hi = top;
    while (hi + 1 < y.size() && y[hi + 1] >= half) ++hi;

    double left = x[lo];
    double right = x[hi];
    if (lo > 0) {
        const double f = (half - y[lo - 1]) / (y[lo] - y[lo - 1]);
        left = x[lo - 1] + f * (x[lo] - x[lo - 1]);
    } else {
        stats.truncated = true;
    }
    if (hi + 1 < y.size()) {
        const double f = (half - y[hi + 1]) / (y[hi] - y[hi + 1]);
        right = x[hi + 1] - f * (x[hi + 1] - x[hi]);
    } else {
        stats.truncated = true;
    }
    stats.fwhm = right - left;
    return stats;
}

double refined_peak_position(std::span<const double> x, std::span<const double> y, std::size_t i) {
    if (i == 0 || i + 1 >= x.size()) return x[i];
    const double x0 = x[i - 1], x1 = x[i], x2 = x[i + 1];
    const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
    const double d1 = (y1 - y0) / (x1 - x0);
    const double d2 = (y2 - y1) / (x2 - x1);
    const double curvature = (d2 - d1) / (x2 - x0);
    if (curvature >= 0.0) return x1;
    // vertex of the interpolating parabola
    const double vertex = 0.5 * (x0 + x1) - d1 / (2.0 * curvature);
    return std::clamp(vertex, x0, x2);
}

std::vector<Peak> find_peaks(std::span<const double> x, std::span<const double> y, double min_height) {
    if (x.size() != y.size()) throw DimensionError("find_peaks: x and y differ in length");
    std::vector<Peak> peaks;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        if (y[i] >= min_height && y[i] > y[i - 1] && y[i] >= y[i + 1])
            peaks.push_back({refined_peak_position(x, y, i), y[i], i});
    }
    return peaks;
}

}  // namespace rydsim
