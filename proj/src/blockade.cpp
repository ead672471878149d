#include "rydsim/blockade.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "rydsim/error.hpp"
#include "rydsim/lineshape.hpp"
#include "rydsim/model.hpp"
#include "rydsim/random.hpp"

namespace rydsim::blockade {

EnsembleSample sample_ensemble(double mean_atoms, double radius_um, std::uint64_t seed, TrapProfile profile,
                               double min_distance_um) {
    if (!(mean_atoms > 0.0)) throw DomainError("sample_ensemble: mean atom number must be > 0");
    if (!(radius_um > 0.0)) throw DomainError("sample_ensemble: radius must be > 0");
    if (!(min_distance_um >= 0.0)) throw DomainError("sample_ensemble: distance floor must be >= 0");
    Engine engine{seed};
    std::poisson_distribution<int> count(mean_atoms);
    std::uniform_real_distribution<double> uniform(-radius_um, radius_um);
    std::normal_distribution<double> normal(0.0, radius_um);
    auto draw = [&]() -> Vec3 {
        if (profile == TrapProfile::gaussian) return {normal(engine), normal(engine), normal(engine)};
        for (;;) {
            const Vec3 p(uniform(engine), uniform(engine), uniform(engine));
            if (p.norm() <= radius_um) return p;
        }
    };

    EnsembleSample sample;
    sample.seed = seed;
    const int n = count(engine);
    constexpr int max_attempts = 100000;
    for (int a = 0; a < n; ++a) {
        for (int attempt = 0;; ++attempt) {
            if (attempt == max_attempts) throw MinDistanceError("sample_ensemble: trap too small for the distance floor");
            const Vec3 p = draw();
            const bool clear = std::all_of(sample.positions_um.begin(), sample.positions_um.end(),
                                           [&](const Vec3& q) { return (p - q).norm() >= min_distance_um; });
            if (clear) {
                sample.positions_um.push_back(p);
                break;
            }
        }
    }
    return sample;
}

CollectiveBasis::CollectiveBasis(int atom_count, int k_max) : atom_count_(atom_count), k_max_(k_max) {
    if (atom_count < 0) throw DomainError("collective basis: atom count must be >= 0");
    if (k_max != 1 && k_max != 2) throw DomainError("collective basis: k_max must be 1 or 2");
    dimension_ = 1 + atom_count + (k_max == 2 ? atom_count * (atom_count - 1) / 2 : 0);
}

int CollectiveBasis::shell(int index) const {
    if (index < 0 || index >= dimension_) throw DimensionError("collective basis: index out of range");
    if (index == 0) return 0;
    return index <= atom_count_ ? 1 : 2;
}

int CollectiveBasis::pair_index(int i, int j) const {
    if (k_max_ < 2) throw DimensionError("collective basis: no pair shell at k_max = 1");
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= atom_count_ || i == j) throw DimensionError("collective basis: invalid pair");
    return 1 + atom_count_ + i * atom_count_ - i * (i + 1) / 2 + (j - i - 1);
}

BlockadeHamiltonian build_blockade_hamiltonian(const EnsembleSample& sample, double rabi_MHz, double detuning_MHz,
                                               double c6_MHz_um6, int k_max, double min_distance_um) {
    if (k_max != 1 && k_max != 2) throw DomainError("blockade hamiltonian: k_max must be 1 or 2");
    if (!(rabi_MHz >= 0.0)) throw DomainError("blockade hamiltonian: rabi must be >= 0");
    if (!(c6_MHz_um6 >= 0.0)) throw DomainError("blockade hamiltonian: C6 must be >= 0");
    const int n = sample.atom_count();
    const int shells = std::isinf(c6_MHz_um6) ? 1 : k_max;
    CollectiveBasis basis(n, shells);
    RMatrix h = RMatrix::Zero(basis.dimension(), basis.dimension());
    const double half = 0.5 * rabi_MHz;
    for (int i = 0; i < n; ++i) {
        const int s = basis.single_index(i);
        h(0, s) = h(s, 0) = half;
        h(s, s) = detuning_MHz;
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double r = (sample.positions_um[i] - sample.positions_um[j]).norm();
            if (r < min_distance_um || r == 0.0)
                throw MinDistanceError("blockade hamiltonian: atoms " + std::to_string(i) + " and " + std::to_string(j) +
                                       " closer than the distance floor");
            if (shells < 2) continue;
            const int p = basis.pair_index(i, j);
            h(p, p) = model::vdw_shift(c6_MHz_um6, r) + 2.0 * detuning_MHz;
            h(basis.single_index(i), p) = h(p, basis.single_index(i)) = half;
            h(basis.single_index(j), p) = h(p, basis.single_index(j)) = half;
        }
    return {basis, std::move(h)};
}

Table TimeTrace::to_table() const {
    Table t{{"t_us", "P0", "P1", "P2"}, {}};
    for (std::size_t i = 0; i < time_us.size(); ++i) t.add_row({time_us[i], p0[i], p1[i], p2[i]});
    return t;
}

namespace {

void require_time_grid(std::span<const double> grid) {
    if (grid.empty()) throw DomainError("time grid is empty");
    if (grid.front() < 0.0) throw DomainError("time grid must start at t >= 0");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw DomainError("time grid must be strictly increasing");
}

}  // namespace

TimeTrace excitation_dynamics(const BlockadeHamiltonian& hamiltonian, std::span<const double> grid) {
    require_time_grid(grid);
    const CollectiveBasis& basis = hamiltonian.basis;
    TimeTrace trace;
    trace.time_us.assign(grid.begin(), grid.end());
    trace.p0.resize(grid.size());
    trace.p1.resize(grid.size());
    trace.p2.resize(grid.size());

    const HermitianPropagator prop(hamiltonian.matrix);
    // Amplitudes of the ground state in the eigenbasis.
    const CVector weights = prop.eigenvectors().row(0).adjoint();
    const Eigen::Index dim = basis.dimension();
    const int n = basis.atom_count();
    CVector coeffs(dim);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        for (Eigen::Index q = 0; q < dim; ++q)
            coeffs[q] = weights[q] * std::polar(1.0, -two_pi * prop.energies()[q] * grid[k]);
        const CVector psi = prop.eigenvectors() * coeffs;
        trace.p0[k] = std::norm(psi[0]);
        trace.p1[k] = psi.segment(1, n).squaredNorm();
        trace.p2[k] = dim > 1 + n ? psi.tail(dim - 1 - n).squaredNorm() : 0.0;
    }
    return trace;
}

EnsembleTrace ensemble_average(const EnsembleOptions& options, std::span<const double> grid, const ParallelFor& parallel) {
    require_time_grid(grid);
    if (options.samples < 1) throw DomainError("ensemble_average: samples must be >= 1");
    std::vector<TimeTrace> traces(options.samples);
    parallel(options.samples, [&](std::size_t s) {
        const EnsembleSample sample = sample_ensemble(options.mean_atoms, options.radius_um, derive_seed(options.seed, s),
                                                      options.profile, options.min_distance_um);
        const auto h = build_blockade_hamiltonian(sample, options.rabi_MHz, options.detuning_MHz, options.c6_MHz_um6,
                                                  options.k_max, options.min_distance_um);
        traces[s] = excitation_dynamics(h, grid);
    });

    EnsembleTrace out;
    TimeTrace& mean = out.mean;
    mean.time_us.assign(grid.begin(), grid.end());
    mean.p0.assign(grid.size(), 0.0);
    mean.p1.assign(grid.size(), 0.0);
    mean.p2.assign(grid.size(), 0.0);
    for (const auto& t : traces)
        for (std::size_t k = 0; k < grid.size(); ++k) {
            mean.p0[k] += t.p0[k];
            mean.p1[k] += t.p1[k];
            mean.p2[k] += t.p2[k];
        }
    const double inv = 1.0 / static_cast<double>(options.samples);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        mean.p0[k] *= inv;
        mean.p1[k] *= inv;
        mean.p2[k] *= inv;
    }
    out.peak_p2 = *std::max_element(mean.p2.begin(), mean.p2.end());
    out.truncation_warning = out.peak_p2 > truncation_warning_p2;
    return out;
}

std::vector<double> jc_reference(double mean_atoms, double rabi1_MHz, std::span<const double> grid) {
    if (!(mean_atoms >= 0.0)) throw DomainError("jc_reference: mean atom number must be >= 0");
    std::vector<double> out(grid.size(), 0.0);
    if (mean_atoms == 0.0) return out;
    double weight = std::exp(-mean_atoms);  // Poisson(0)
    double cumulative = weight;
    for (int n = 1;; ++n) {
        weight *= mean_atoms / n;
        cumulative += weight;
        const double freq = rabi1_MHz * std::sqrt(static_cast<double>(n));
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double s = std::sin(std::numbers::pi * freq * grid[k]);
            out[k] += weight * s * s;
        }
        if (n > mean_atoms && 1.0 - cumulative < 1e-12) break;
    }
    return out;
}

std::vector<double> jc_reference_fixed(int atom_count, double rabi1_MHz, std::span<const double> grid) {
    if (atom_count < 0) throw DomainError("jc_reference_fixed: atom count must be >= 0");
    std::vector<double> out(grid.size(), 0.0);
    const double freq = rabi1_MHz * std::sqrt(static_cast<double>(atom_count));
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double s = std::sin(std::numbers::pi * freq * grid[k]);
        out[k] = s * s;
    }
    return out;
}

RevivalWindows revival_windows(double mean_atoms, double rabi1_MHz) {
    if (!(mean_atoms > 0.0) || !(rabi1_MHz > 0.0)) throw DomainError("revival_windows: inputs must be > 0");
    const double revival = 2.0 * std::sqrt(mean_atoms) / rabi1_MHz;
    return {1.0 / (rabi1_MHz * std::sqrt(mean_atoms)), 0.375 * revival, 0.625 * revival, 0.75 * revival, 1.25 * revival};
}

namespace {

double window_swing(std::span<const double> t, std::span<const double> y, double begin, double end) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    std::size_t count = 0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (t[k] < begin || t[k] > end) continue;
        lo = std::min(lo, y[k]);
        hi = std::max(hi, y[k]);
        ++count;
    }
    if (count < 3) throw WindowError("revival_contrast: fewer than three samples inside an analysis window");
    return hi - lo;
}

}  // namespace

double revival_contrast(std::span<const double> t, std::span<const double> p1, const RevivalWindows& w) {
    if (t.size() != p1.size() || t.empty()) throw DimensionError("revival_contrast: trace columns differ in length");
    if (t.front() > 0.0 || t.back() < w.revival_end_us)
        throw WindowError("revival_contrast: trace does not cover the revival window");
    const double initial = window_swing(t, p1, 0.0, w.initial_end_us);
    const double collapse = window_swing(t, p1, w.collapse_begin_us, w.collapse_end_us);
    const double revival = window_swing(t, p1, w.revival_begin_us, w.revival_end_us);
    if (initial <= 0.0) return 0.0;
    return std::clamp((revival - collapse) / initial, 0.0, 1.0);
}

void ChirpPulse::validate() const {
    if (!(duration_us > 0.0)) throw DomainError("chirp: duration must be > 0");
    if (!(rabi_MHz >= 0.0)) throw DomainError("chirp: rabi must be >= 0");
    if (!std::isfinite(sweep_start_MHz) || !std::isfinite(sweep_end_MHz)) throw DomainError("chirp: sweep must be finite");
}

double ChirpPulse::detuning_at(double t) const {
    return sweep_start_MHz + (sweep_end_MHz - sweep_start_MHz) * t / duration_us;
}

double ChirpPulse::rabi_at(double t) const {
    if (envelope == Envelope::flat) return rabi_MHz;
    const double s = std::sin(std::numbers::pi * t / duration_us);
    return rabi_MHz * s * s;
}

double ChirpPulse::sweep_rate() const { return (sweep_end_MHz - sweep_start_MHz) / duration_us; }

double chirped_excitation(int atom_count, const ChirpPulse& chirp, const ode::AdaptiveOptions& options) {
    chirp.validate();
    if (atom_count < 1) throw DomainError("chirped_excitation: atom count must be >= 1");
    if (chirp.sweep_start_MHz * chirp.sweep_end_MHz > 0.0)
        throw DomainError("chirped_excitation: sweep must cross zero detuning");
    const double scale = std::sqrt(static_cast<double>(atom_count));
    auto rhs = [&](double t, const Eigen::Vector2cd& c) -> Eigen::Vector2cd {
        const double half = 0.5 * scale * chirp.rabi_at(t);
        const double delta = chirp.detuning_at(t);
        return cplx(0.0, -two_pi) * Eigen::Vector2cd(half * c[1], half * c[0] - delta * c[1]);
    };
    ode::AdaptiveOptions opt = options;
    if (opt.max_step == 0.0) {
        const double fastest = std::max({std::abs(chirp.sweep_start_MHz), std::abs(chirp.sweep_end_MHz), scale * chirp.rabi_MHz});
        if (fastest > 0.0) opt.max_step = 0.1 / fastest;
    }
    const Eigen::Vector2cd end = ode::integrate_adaptive(rhs, Eigen::Vector2cd(1.0, 0.0), 0.0, chirp.duration_us, opt);
    return std::norm(end[1]);
}

double GaussianPulse::rabi_at(double t) const {
    const double z = (t - center_us) / width_us;
    return peak_rabi_MHz * std::exp(-0.5 * z * z);
}

void StirapPulses::validate() const {
    if (!(pump.width_us > 0.0) || !(stokes.width_us > 0.0)) throw DomainError("stirap: pulse widths must be > 0");
    if (!(pump.peak_rabi_MHz >= 0.0) || !(stokes.peak_rabi_MHz >= 0.0)) throw DomainError("stirap: peak rabi must be >= 0");
    if (!std::isfinite(intermediate_detuning_MHz)) throw DomainError("stirap: detuning must be finite");
}

double stirap_transfer(const StirapPulses& pulses, const ode::AdaptiveOptions& options) {
    pulses.validate();
    const double margin = 6.0 * std::max(pulses.pump.width_us, pulses.stokes.width_us);
    const double t0 = std::min(pulses.pump.center_us, pulses.stokes.center_us) - margin;
    const double t1 = std::max(pulses.pump.center_us, pulses.stokes.center_us) + margin;
    const double delta = pulses.intermediate_detuning_MHz;
    auto rhs = [&](double t, const Eigen::Vector3cd& c) -> Eigen::Vector3cd {
        const double p = 0.5 * pulses.pump.rabi_at(t);
        const double s = 0.5 * pulses.stokes.rabi_at(t);
        return cplx(0.0, -two_pi) * Eigen::Vector3cd(p * c[1], p * c[0] - delta * c[1] + s * c[2], s * c[1]);
    };
    ode::AdaptiveOptions opt = options;
    if (opt.max_step == 0.0) {
        const double fastest = std::max({pulses.pump.peak_rabi_MHz, pulses.stokes.peak_rabi_MHz, std::abs(delta)});
        if (fastest > 0.0) opt.max_step = 0.1 / fastest;
    }
    const Eigen::Vector3cd end = ode::integrate_adaptive(rhs, Eigen::Vector3cd(1.0, 0.0, 0.0), t0, t1, opt);
    return std::norm(end[2]);
}

}  // namespace rydsim::blockade
