#pragma once

#include <span>
#include <vector>

namespace rydsim {

struct ResonanceStats {
    double amplitude = 0.0;
    double fwhm = 0.0;
    double peak_position = 0.0;  // grid abscissa of the maximum
    bool truncated = false;      // half maximum not reached inside the grid
};

// Amplitude is the maximum sample; the FWHM is the contiguous half-maximum
// interval around it, with crossings located by linear interpolation.
ResonanceStats lineshape_stats(std::span<const double> x, std::span<const double> y);

struct Peak {
    double position = 0.0;  // parabolic refinement of the local maximum
    double height = 0.0;
    std::size_t index = 0;
};

// Local maxima above min_height, refined by a three-point parabola.
std::vector<Peak> find_peaks(std::span<const double> x, std::span<const double> y, double min_height);

// Parabolic vertex through the maximum sample and its neighbours.
double refined_peak_position(std::span<const double> x, std::span<const double> y, std::size_t index);

void require_increasing(std::span<const double> grid, const char* what);

}  // namespace rydsim
