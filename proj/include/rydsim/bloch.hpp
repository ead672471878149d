#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "rydsim/linalg.hpp"
#include "rydsim/model.hpp"
#include "rydsim/ode.hpp"
#include "rydsim/parallel.hpp"
#include "rydsim/table.hpp"

namespace rydsim::bloch {

// Ladder |1> -> |2> -> |3> -> |4>; steps[i] drives level i+1 to level i+2.
struct LevelScheme {
    static constexpr int level_count = 4;

    std::array<model::LaserField, 3> steps{};
    std::array<double, 3> spont_decay_MHz{};  // gamma_2, gamma_3, gamma_4 (linewidths)
    double interaction_time_us = 4.0;

    void validate() const;
};

class DensityMatrix {
public:
    explicit DensityMatrix(CMatrix entries);

    static DensityMatrix ground_state(int dim);
    static DensityMatrix from_vector(const CVector& vec, int dim);

    int dim() const { return static_cast<int>(entries_.rows()); }
    const CMatrix& entries() const { return entries_; }
    CVector vectorized() const;  // column-major
    double population(int level) const;

    double trace_error() const;
    double hermiticity_error() const;
    double min_eigenvalue() const;

private:
    CMatrix entries_;
};

// Generator of d vec(rho)/dt in 1/us acting on column-major vec(rho).
class Liouvillian {
public:
    Liouvillian(int dim, CMatrix generator);

    int dim() const { return dim_; }
    const CMatrix& generator() const { return generator_; }
    CVector apply(const CVector& vec_rho) const { return generator_ * vec_rho; }

private:
    int dim_;
    CMatrix generator_;
};

struct JumpChannel {
    CMatrix op;
    double linewidth_MHz;  // applied as rate 2*pi*linewidth
};

// H in MHz; coherence_damping(j,k) is an extra decay rate (1/us) of rho_jk.
Liouvillian build_liouvillian(const CMatrix& hamiltonian, const std::vector<JumpChannel>& jumps,
                              const RMatrix& coherence_damping);
Liouvillian build_liouvillian(const LevelScheme& scheme);

CMatrix ladder_hamiltonian(const LevelScheme& scheme);

enum class Method { adaptive, fixed_step, exponential };

struct EvolveOptions {
    Method method = Method::adaptive;
    ode::Tolerance tol{};
    std::size_t fixed_steps = 0;  // 0 derives a count from the generator norm
};

DensityMatrix evolve(const DensityMatrix& rho0, const Liouvillian& generator, double t_us,
                     const EvolveOptions& options = {});

struct SpectrumTrace {
    std::vector<double> detuning_MHz;
    std::vector<double> signal;
    double atom_count = 1.0;

    Table to_table() const;  // delta3_MHz,signal
};

SpectrumTrace scan_spectrum(const LevelScheme& scheme, std::span<const double> delta3_grid_MHz,
                            double atom_count = 1.0, const EvolveOptions& options = {},
                            const ParallelFor& parallel = serial_for);

struct DopplerOptions {
    double temperature_K = 300.0;
    double mass_amu = 85.4678;
    std::size_t velocity_samples = 64;
    std::uint64_t seed = 1;
    EvolveOptions evolve{Method::exponential, {}, 0};
};

// Velocity-resolved scheme: every step detuning shifted by -k_i . v.
LevelScheme doppler_shifted(const LevelScheme& scheme, const model::BeamGeometry& geometry, const Vec3& velocity_m_per_s);

double thermal_speed_sigma(double temperature_K, double mass_amu);  // m/s per Cartesian component

SpectrumTrace doppler_averaged_spectrum(const LevelScheme& scheme, const model::BeamGeometry& geometry,
                                        std::span<const double> delta3_grid_MHz, const DopplerOptions& options,
                                        double atom_count = 1.0, const ParallelFor& parallel = serial_for);

}  // namespace rydsim::bloch
