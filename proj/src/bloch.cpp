#include "rydsim/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "rydsim/error.hpp"
#include "rydsim/lineshape.hpp"
#include "rydsim/random.hpp"

namespace rydsim::bloch {

namespace {

constexpr double boltzmann = 1.380649e-23;   // J/K
constexpr double atomic_mass = 1.66053906660e-27;  // kg

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

double infinity_norm(const CMatrix& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

}  // namespace

void LevelScheme::validate() const {
    for (const auto& step : steps) step.validate();
    for (double g : spont_decay_MHz)
        if (!(g >= 0.0)) throw DomainError("level scheme: decay rates must be >= 0");
    if (!(interaction_time_us >= 0.0)) throw DomainError("level scheme: interaction_time_us must be >= 0");
}

DensityMatrix::DensityMatrix(CMatrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0)
        throw DimensionError("density matrix must be square and nonempty");
}

DensityMatrix DensityMatrix::ground_state(int dim) {
    if (dim < 1) throw DimensionError("density matrix dimension must be >= 1");
    CMatrix rho = CMatrix::Zero(dim, dim);
    rho(0, 0) = 1.0;
    return DensityMatrix(std::move(rho));
}

DensityMatrix DensityMatrix::from_vector(const CVector& vec, int dim) {
    if (vec.size() != static_cast<Eigen::Index>(dim) * dim) throw DimensionError("vectorized state has wrong length");
    return DensityMatrix(Eigen::Map<const CMatrix>(vec.data(), dim, dim));
}

CVector DensityMatrix::vectorized() const { return Eigen::Map<const CVector>(entries_.data(), entries_.size()); }

double DensityMatrix::population(int level) const {
    if (level < 0 || level >= dim()) throw DimensionError("population: level out of range");
    return entries_(level, level).real();
}

double DensityMatrix::trace_error() const { return std::abs(entries_.trace() - cplx(1.0, 0.0)); }

double DensityMatrix::hermiticity_error() const { return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff(); }

double DensityMatrix::min_eigenvalue() const {
    const CMatrix herm = 0.5 * (entries_ + entries_.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

Liouvillian::Liouvillian(int dim, CMatrix generator) : dim_(dim), generator_(std::move(generator)) {
    const Eigen::Index n = static_cast<Eigen::Index>(dim) * dim;
    if (generator_.rows() != n || generator_.cols() != n) throw DimensionError("Liouvillian size must be dim^2");
}

Liouvillian build_liouvillian(const CMatrix& hamiltonian, const std::vector<JumpChannel>& jumps,
                              const RMatrix& coherence_damping) {
    const Eigen::Index d = hamiltonian.rows();
    if (hamiltonian.cols() != d) throw DimensionError("Hamiltonian must be square");
    if (coherence_damping.rows() != d || coherence_damping.cols() != d)
        throw DimensionError("coherence damping must match the Hamiltonian size");
    const CMatrix id = CMatrix::Identity(d, d);

    CMatrix gen = cplx(0.0, -two_pi) * (kron(id, hamiltonian) - kron(hamiltonian.transpose(), id));
    for (const auto& jump : jumps) {
        if (jump.op.rows() != d || jump.op.cols() != d) throw DimensionError("jump operator must match the Hamiltonian size");
        if (!(jump.linewidth_MHz >= 0.0)) throw DomainError("jump rates must be >= 0");
        if (jump.linewidth_MHz == 0.0) continue;
        const double rate = two_pi * jump.linewidth_MHz;
        const CMatrix ld = jump.op.adjoint() * jump.op;
        gen += rate * (kron(jump.op.conjugate(), jump.op) - 0.5 * kron(id, ld) - 0.5 * kron(ld.transpose(), id));
    }
    for (Eigen::Index k = 0; k < d; ++k)
        for (Eigen::Index j = 0; j < d; ++j) gen(j + k * d, j + k * d) -= coherence_damping(j, k);
    return Liouvillian(static_cast<int>(d), std::move(gen));
}

CMatrix ladder_hamiltonian(const LevelScheme& scheme) {
    constexpr int n = LevelScheme::level_count;
    CMatrix h = CMatrix::Zero(n, n);
    double cumulative = 0.0;
    for (int i = 0; i < 3; ++i) {
        cumulative += scheme.steps[i].detuning_MHz;
        h(i + 1, i + 1) = -cumulative;
        h(i, i + 1) = h(i + 1, i) = 0.5 * scheme.steps[i].rabi_MHz;
    }
    return h;
}

Liouvillian build_liouvillian(const LevelScheme& scheme) {
    scheme.validate();
    constexpr int n = LevelScheme::level_count;
    const CMatrix h = ladder_hamiltonian(scheme);

    auto lowering = [](int from, int to) {
        CMatrix op = CMatrix::Zero(n, n);
        op(to, from) = 1.0;
        return op;
    };
    const std::vector<JumpChannel> jumps{{lowering(1, 0), scheme.spont_decay_MHz[0]},
                                         {lowering(2, 1), scheme.spont_decay_MHz[1]},
                                         {lowering(3, 0), scheme.spont_decay_MHz[2]}};

    // Phase diffusion of each laser damps every coherence spanning its step;
    // the resulting Lorentzian FWHM in MHz is the summed linewidth.
    RMatrix damping = RMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            double width = 0.0;
            for (int i = std::min(j, k); i < std::max(j, k); ++i) width += scheme.steps[i].linewidth_MHz;
            damping(j, k) = std::numbers::pi * width;
        }
    return build_liouvillian(h, jumps, damping);
}

DensityMatrix evolve(const DensityMatrix& rho0, const Liouvillian& generator, double t_us, const EvolveOptions& options) {
    if (rho0.dim() != generator.dim()) throw DimensionError("evolve: state and generator dimensions differ");
    if (!(t_us >= 0.0)) throw DomainError("evolve: time must be >= 0");
    if (t_us == 0.0) return rho0;
    const CVector y0 = rho0.vectorized();
    const CMatrix& g = generator.generator();
    CVector y;
    switch (options.method) {
        case Method::adaptive: {
            ode::AdaptiveOptions opt;
            opt.tol = options.tol;
            y = ode::integrate_adaptive([&g](double, const CVector& v) -> CVector { return g * v; }, y0, 0.0, t_us, opt);
            break;
        }
        case Method::fixed_step: {
            std::size_t steps = options.fixed_steps;
            if (steps == 0) steps = static_cast<std::size_t>(std::ceil(infinity_norm(g) * t_us / 0.05)) + 1;
            y = ode::integrate_fixed([&g](double, const CVector& v) -> CVector { return g * v; }, y0, 0.0, t_us, steps);
            break;
        }
        case Method::exponential: {
            const CMatrix scaled = g * t_us;
            const CMatrix prop = scaled.exp();
            y = prop * y0;
            break;
        }
    }
    return DensityMatrix::from_vector(y, rho0.dim());
}

Table SpectrumTrace::to_table() const {
    Table t{{"delta3_MHz", "signal"}, {}};
    for (std::size_t i = 0; i < detuning_MHz.size(); ++i) t.add_row({detuning_MHz[i], signal[i]});
    return t;
}

namespace {

double rydberg_population(const LevelScheme& scheme, const EvolveOptions& options) {
    const Liouvillian l = build_liouvillian(scheme);
    const DensityMatrix rho = evolve(DensityMatrix::ground_state(LevelScheme::level_count), l, scheme.interaction_time_us, options);
    return rho.population(3);
}

LevelScheme with_delta3(LevelScheme scheme, double delta3) {
    scheme.steps[2].detuning_MHz = delta3;
    return scheme;
}

}  // namespace

SpectrumTrace scan_spectrum(const LevelScheme& scheme, std::span<const double> grid, double atom_count,
                            const EvolveOptions& options, const ParallelFor& parallel) {
    scheme.validate();
    require_increasing(grid, "scan_spectrum");
    if (!(atom_count > 0.0)) throw DomainError("scan_spectrum: atom count must be > 0");
    SpectrumTrace trace{{grid.begin(), grid.end()}, std::vector<double>(grid.size()), atom_count};
    parallel(grid.size(), [&](std::size_t i) {
        trace.signal[i] = atom_count * rydberg_population(with_delta3(scheme, grid[i]), options);
    });
    return trace;
}

LevelScheme doppler_shifted(const LevelScheme& scheme, const model::BeamGeometry& geometry, const Vec3& velocity) {
    LevelScheme shifted = scheme;
    for (int i = 0; i < 3; ++i) shifted.steps[i].detuning_MHz -= model::doppler_shift(geometry, i, velocity);
    return shifted;
}

double thermal_speed_sigma(double temperature_K, double mass_amu) {
    if (!(temperature_K >= 0.0)) throw DomainError("temperature must be >= 0");
    if (!(mass_amu > 0.0)) throw DomainError("mass must be > 0");
    return std::sqrt(boltzmann * temperature_K / (mass_amu * atomic_mass));
}

namespace {

double normal_pdf(double x, double mean, double sigma) {
    const double z = (x - mean) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

struct VelocityDraw {
    double along = 0.0;  // standard normal
    double perp1 = 0.0;
    double perp2 = 0.0;
    double pick = 0.0;   // uniform, selects the mixture component
};

}  // namespace

SpectrumTrace doppler_averaged_spectrum(const LevelScheme& scheme, const model::BeamGeometry& geometry,
                                        std::span<const double> grid, const DopplerOptions& options,
                                        double atom_count, const ParallelFor& parallel) {
    scheme.validate();
    geometry.validate();
    require_increasing(grid, "doppler_averaged_spectrum");
    if (options.velocity_samples < 1) throw DomainError("doppler: velocity_samples must be >= 1");
    const double sigma = thermal_speed_sigma(options.temperature_K, options.mass_amu);
    if (sigma == 0.0) return scan_spectrum(scheme, grid, atom_count, options.evolve, parallel);

    // Common random numbers across the grid keep the averaged line smooth.
    std::vector<VelocityDraw> draws(options.velocity_samples);
    for (std::size_t s = 0; s < draws.size(); ++s) {
        Engine engine = make_engine(options.seed, s);
        std::normal_distribution<double> normal;
        std::uniform_real_distribution<double> uniform;
        draws[s] = {normal(engine), normal(engine), normal(engine), uniform(engine)};
    }

    const Vec3 k_total = geometry.total_wavevector();
    const double k_norm = k_total.norm();
    double width_MHz = scheme.interaction_time_us > 0.0 ? 1.0 / scheme.interaction_time_us : 0.0;
    for (const auto& step : scheme.steps) width_MHz += step.linewidth_MHz;
    width_MHz = std::max(width_MHz, 1e-3);
    const double doppler_width_MHz = 1e3 * k_norm * sigma;
    const bool importance = doppler_width_MHz > width_MHz;

    Vec3 axis = importance ? Vec3(k_total / k_norm) : Vec3(Vec3::UnitX());
    Vec3 helper = std::abs(axis.x()) < 0.9 ? Vec3(Vec3::UnitX()) : Vec3(Vec3::UnitY());
    const Vec3 perp1 = axis.cross(helper).normalized();
    const Vec3 perp2 = axis.cross(perp1);

    SpectrumTrace trace{{grid.begin(), grid.end()}, std::vector<double>(grid.size()), atom_count};
    parallel(grid.size(), [&](std::size_t i) {
        const LevelScheme base = with_delta3(scheme, grid[i]);
        double sum = 0.0;
        if (!importance) {
            for (const auto& d : draws) {
                const Vec3 v = sigma * (d.along * axis + d.perp1 * perp1 + d.perp2 * perp2);
                sum += rydberg_population(doppler_shifted(base, geometry, v), options.evolve);
            }
        } else {
            // Defensive mixture: half thermal, half centred on the resonant
            // velocity class along the residual wave vector.
            double detuning_sum = 0.0;
            for (const auto& step : base.steps) detuning_sum += step.detuning_MHz;
            const double v_res = detuning_sum / (1e3 * k_norm);
            const double w = std::min(sigma, 2.0 * width_MHz / (1e3 * k_norm));
            for (const auto& d : draws) {
                const double along = d.pick < 0.5 ? sigma * d.along : v_res + w * d.along;
                const double weight =
                    normal_pdf(along, 0.0, sigma) / (0.5 * normal_pdf(along, 0.0, sigma) + 0.5 * normal_pdf(along, v_res, w));
                const Vec3 v = along * axis + sigma * (d.perp1 * perp1 + d.perp2 * perp2);
                sum += weight * rydberg_population(doppler_shifted(base, geometry, v), options.evolve);
            }
        }
        trace.signal[i] = atom_count * sum / static_cast<double>(draws.size());
    });
    return trace;
}

}  // namespace rydsim::bloch
