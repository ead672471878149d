#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rydsim/linalg.hpp"
#include "rydsim/ode.hpp"
#include "rydsim/parallel.hpp"
#include "rydsim/table.hpp"

namespace rydsim::blockade {

enum class TrapProfile {
    uniform_sphere,  // uniform inside a sphere of the given radius
    gaussian,        // isotropic Gaussian, rms width per axis equal to the radius
};

struct EnsembleSample {
    std::vector<Vec3> positions_um;
    std::uint64_t seed = 0;

    int atom_count() const { return static_cast<int>(positions_um.size()); }
};

inline constexpr double default_min_distance_um = 0.5;

EnsembleSample sample_ensemble(double mean_atoms, double radius_um, std::uint64_t seed,
                               TrapProfile profile = TrapProfile::uniform_sphere,
                               double min_distance_um = default_min_distance_um);

// Ground state, then single excitations, then (for k_max = 2) pair excitations.
class CollectiveBasis {
public:
    CollectiveBasis(int atom_count, int k_max);

    int atom_count() const { return atom_count_; }
    int k_max() const { return k_max_; }
    int dimension() const { return dimension_; }
    int shell(int index) const;
    int single_index(int atom) const { return 1 + atom; }
    int pair_index(int i, int j) const;

private:
    int atom_count_;
    int k_max_;
    int dimension_;
};

struct BlockadeHamiltonian {
    CollectiveBasis basis;
    RMatrix matrix;
};

// c6 = infinity removes the pair shell couplings (perfect blockade).
BlockadeHamiltonian build_blockade_hamiltonian(const EnsembleSample& sample, double rabi_MHz, double detuning_MHz,
                                               double c6_MHz_um6, int k_max = 2,
                                               double min_distance_um = default_min_distance_um);

struct TimeTrace {
    std::vector<double> time_us;
    std::vector<double> p0;
    std::vector<double> p1;
    std::vector<double> p2;

    Table to_table() const;  // t_us,P0,P1,P2
};

TimeTrace excitation_dynamics(const BlockadeHamiltonian& hamiltonian, std::span<const double> time_grid_us);

struct EnsembleOptions {
    double mean_atoms = 7.0;
    double radius_um = 2.0;
    double rabi_MHz = 1.0;
    double detuning_MHz = 0.0;
    double c6_MHz_um6 = 3.2e6;
    int k_max = 2;
    std::size_t samples = 500;
    std::uint64_t seed = 1;
    TrapProfile profile = TrapProfile::gaussian;
    double min_distance_um = default_min_distance_um;
};

struct EnsembleTrace {
    TimeTrace mean;
    double peak_p2 = 0.0;
    bool truncation_warning = false;  // P2 large enough that dropped shells matter
};

inline constexpr double truncation_warning_p2 = 0.2;

EnsembleTrace ensemble_average(const EnsembleOptions& options, std::span<const double> time_grid_us,
                               const ParallelFor& parallel = serial_for);

// Poisson-weighted sum of collective Rabi oscillations.
std::vector<double> jc_reference(double mean_atoms, double rabi1_MHz, std::span<const double> time_grid_us);
std::vector<double> jc_reference_fixed(int atom_count, double rabi1_MHz, std::span<const double> time_grid_us);

struct RevivalWindows {
    double initial_end_us;
    double collapse_begin_us;
    double collapse_end_us;
    double revival_begin_us;
    double revival_end_us;
};

RevivalWindows revival_windows(double mean_atoms, double rabi1_MHz);

// (envelope in revival window - envelope in collapse window) / initial envelope,
// envelope measured peak to peak and the result clipped to [0, 1].
double revival_contrast(std::span<const double> time_us, std::span<const double> p1, const RevivalWindows& windows);

enum class Envelope { flat, sine_squared };

struct ChirpPulse {
    double rabi_MHz = 1.0;
    double sweep_start_MHz = -40.0;
    double sweep_end_MHz = 40.0;
    double duration_us = 40.0;
    Envelope envelope = Envelope::flat;

    void validate() const;
    double detuning_at(double t_us) const;
    double rabi_at(double t_us) const;
    double sweep_rate() const;  // MHz/us
};

// Two-level sweep with coupling rabi * sqrt(N); returns the final excited population.
double chirped_excitation(int atom_count, const ChirpPulse& chirp, const ode::AdaptiveOptions& options = {});

struct GaussianPulse {
    double peak_rabi_MHz = 0.0;
    double center_us = 0.0;
    double width_us = 1.0;  // standard deviation of the field envelope

    double rabi_at(double t_us) const;
};

struct StirapPulses {
    GaussianPulse pump;
    GaussianPulse stokes;
    double intermediate_detuning_MHz = 0.0;

    void validate() const;
};

double stirap_transfer(const StirapPulses& pulses, const ode::AdaptiveOptions& options = {});

}  // namespace rydsim::blockade
