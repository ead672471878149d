#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "rydsim/lineshape.hpp"
#include "rydsim/linalg.hpp"
#include "rydsim/model.hpp"
#include "rydsim/ode.hpp"
#include "rydsim/parallel.hpp"
#include "rydsim/table.hpp"

namespace rydsim::foerster {

inline constexpr int max_atoms = 5;

// All-P state plus one symmetrized flipped-pair state per unordered pair.
class PairBasis {
public:
    explicit PairBasis(int atom_count);

    int atom_count() const { return atom_count_; }
    int dimension() const { return 1 + static_cast<int>(pairs_.size()); }
    const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
    int index_of(int i, int j) const;  // basis index of pair (i, j)

private:
    int atom_count_;
    std::vector<std::pair<int, int>> pairs_;
};

enum class VolumeShape { cube, sphere };

struct ExcitationVolume {
    VolumeShape shape = VolumeShape::cube;
    double size_um = 25.0;  // cube edge or sphere diameter
    double min_distance_um = 2.0;

    void validate() const;
};

struct AtomConfiguration {
    std::vector<Vec3> positions_um;

    int atom_count() const { return static_cast<int>(positions_um.size()); }
    double min_pair_distance() const;
};

// Uniform placement; an atom closer than min_distance to an earlier one is redrawn.
AtomConfiguration sample_configuration(const ExcitationVolume& volume, int atom_count, std::uint64_t seed);

struct StarkSwitchProfile {
    double excitation_field_Vcm = 5.6;
    double interaction_field_Vcm = 1.79;
    double interaction_time_us = 3.0;

    void validate() const;
};

RMatrix build_pair_hamiltonian(const model::FoersterChannel& channel, const AtomConfiguration& config,
                               double field_Vcm, double min_distance_um = 2.0);

// Fraction of atoms in the final S state after evolving the all-P state for t_us.
double foerster_dynamics(const RMatrix& hamiltonian, int atom_count, double t_us);
// Infinite-time average of the same quantity.
double foerster_time_average(const RMatrix& hamiltonian, int atom_count);

struct ScanTrace {
    std::vector<double> field_Vcm;
    std::vector<double> rho_s;

    Table to_table() const;  // E_Vcm,rhoS
};

struct StarkScanOptions {
    int atom_count = 2;
    double interaction_time_us = 3.0;
    bool time_averaged = false;
    std::size_t samples = 200;
    std::uint64_t seed = 1;
    ExcitationVolume volume{};
};

struct StarkScan {
    ScanTrace trace;
    ResonanceStats stats;
};

StarkScan scan_stark(const model::FoersterChannel& channel, std::span<const double> field_grid,
                     const StarkScanOptions& options, const ParallelFor& parallel = serial_for);

struct TimePoint {
    double interaction_time_us;
    ResonanceStats stats;
};

struct TimeDependence {
    std::vector<TimePoint> points;

    Table to_table() const;  // T_us,amplitude,fwhm
};

// Field grid centred on the resonance, wide enough for a Fourier-limited line of duration t_us.
std::vector<double> resonance_window(const model::FoersterChannel& channel, double t_us, std::size_t points);

TimeDependence time_dependence(const model::FoersterChannel& channel, std::span<const double> time_grid_us,
                               StarkScanOptions options, std::size_t points_per_scan = 301,
                               const ParallelFor& parallel = serial_for);

double rf_dynamics(const model::FoersterChannel& channel, const AtomConfiguration& config, double dc_field_Vcm,
                   const model::RfField& rf, double t_us, const ode::AdaptiveOptions& options = {});

ScanTrace rf_scan(const model::FoersterChannel& channel, const AtomConfiguration& config,
                  std::span<const double> field_grid, const model::RfField& rf, double t_us,
                  const ParallelFor& parallel = serial_for);

struct FloquetCrossing {
    int order;
    double field_Vcm;
};

std::vector<FloquetCrossing> floquet_crossings(const model::FoersterChannel& channel, const model::RfField& rf,
                                               int m_max, double field_min_Vcm, double field_max_Vcm);

Table crossings_table(const std::vector<FloquetCrossing>& crossings);  // m,E_Vcm

// J_m(x, y) = sum_k J_{m-2k}(x) J_k(y)
double generalized_bessel(int m, double x, double y);

struct SidebandWeight {
    int order;
    std::complex<double> amplitude;
};

struct SidebandSpectrum {
    double mean_defect_MHz;  // cycle-averaged defect
    std::vector<SidebandWeight> weights;
};

// Sidebands of exp(-i phase) for the quadratic Stark defect driven by
// E(t) = E_dc + E_rf sin(2 pi f t); order m is resonant when the mean defect equals m f.
SidebandSpectrum floquet_sideband_weights(const model::FoersterChannel& channel, double dc_field_Vcm,
                                          const model::RfField& rf, int m_max);

struct DetectionResult {
    std::vector<std::uint64_t> true_counts;      // shots with N atoms present
    std::vector<std::uint64_t> detected_counts;  // shots with k atoms detected
};

// populations[N] is the probability of N Rydberg atoms in a shot.
DetectionResult apply_detection(std::span<const double> populations, const model::DetectionModel& detection,
                                std::uint64_t shots, std::uint64_t seed);

// Exact binomial thinning of a count distribution.
std::vector<double> detection_distribution(std::span<const double> populations, const model::DetectionModel& detection);

}  // namespace rydsim::foerster
