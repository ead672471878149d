#include "rydsim/foerster.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rydsim/error.hpp"
#include "rydsim/random.hpp"

namespace rydsim::foerster {

PairBasis::PairBasis(int atom_count) : atom_count_(atom_count) {
    if (atom_count < 1 || atom_count > max_atoms) throw DomainError("pair basis: atom count must lie in [1, 5]");
    for (int i = 0; i < atom_count; ++i)
        for (int j = i + 1; j < atom_count; ++j) pairs_.emplace_back(i, j);
}

int PairBasis::index_of(int i, int j) const {
    if (i > j) std::swap(i, j);
    for (std::size_t k = 0; k < pairs_.size(); ++k)
        if (pairs_[k] == std::pair{i, j}) return static_cast<int>(k) + 1;
    throw DomainError("pair basis: no such pair");
}

void ExcitationVolume::validate() const {
    if (!(size_um > 0.0)) throw DomainError("volume: size_um must be > 0");
    if (!(min_distance_um >= 0.0)) throw DomainError("volume: min_distance_um must be >= 0");
}

double AtomConfiguration::min_pair_distance() const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < positions_um.size(); ++i)
        for (std::size_t j = i + 1; j < positions_um.size(); ++j)
            best = std::min(best, (positions_um[i] - positions_um[j]).norm());
    return best;
}

void StarkSwitchProfile::validate() const {
    if (!(excitation_field_Vcm >= 0.0) || !(interaction_field_Vcm >= 0.0))
        throw DomainError("stark switch: fields must be >= 0");
    if (!(interaction_time_us > 0.0)) throw DomainError("stark switch: interaction_time_us must be > 0");
}

AtomConfiguration sample_configuration(const ExcitationVolume& volume, int atom_count, std::uint64_t seed) {
    volume.validate();
    if (atom_count < 1 || atom_count > max_atoms) throw DomainError("sample_configuration: atom count must lie in [1, 5]");
    Engine engine{seed};
    std::uniform_real_distribution<double> coord(-0.5 * volume.size_um, 0.5 * volume.size_um);
    auto draw = [&] {
        for (;;) {
            const Vec3 p(coord(engine), coord(engine), coord(engine));
            if (volume.shape == VolumeShape::cube || p.norm() <= 0.5 * volume.size_um) return p;
        }
    };
    AtomConfiguration config;
    constexpr int max_attempts = 100000;
    for (int a = 0; a < atom_count; ++a) {
        for (int attempt = 0;; ++attempt) {
            if (attempt == max_attempts) throw MinDistanceError("sample_configuration: volume too small for the distance floor");
            const Vec3 p = draw();
            const bool clear = std::all_of(config.positions_um.begin(), config.positions_um.end(),
                                           [&](const Vec3& q) { return (p - q).norm() >= volume.min_distance_um; });
            if (clear) {
                config.positions_um.push_back(p);
                break;
            }
        }
    }
    return config;
}

RMatrix build_pair_hamiltonian(const model::FoersterChannel& channel, const AtomConfiguration& config,
                               double field_Vcm, double min_distance_um) {
    const PairBasis basis(config.atom_count());
    const double defect = model::foerster_defect(channel, field_Vcm);
    RMatrix h = RMatrix::Zero(basis.dimension(), basis.dimension());
    for (std::size_t k = 0; k < basis.pairs().size(); ++k) {
        const auto [i, j] = basis.pairs()[k];
        const double r = (config.positions_um[i] - config.positions_um[j]).norm();
        if (r < min_distance_um || r == 0.0)
            throw MinDistanceError("pair hamiltonian: atoms " + std::to_string(i) + " and " + std::to_string(j) +
                                   " closer than the distance floor");
        const auto idx = static_cast<Eigen::Index>(k) + 1;
        h(idx, idx) = defect;
        h(0, idx) = h(idx, 0) = std::sqrt(2.0) * model::dd_coupling(channel, r);
    }
    return h;
}

namespace {

int atoms_for_dimension(Eigen::Index dim) {
    for (int n = 1; n <= max_atoms; ++n)
        if (1 + n * (n - 1) / 2 == dim) return n;
    return 0;
}

void check_dimension(const RMatrix& h, int atom_count) {
    if (h.rows() != h.cols()) throw DimensionError("pair hamiltonian must be square");
    if (atom_count < 1 || 1 + atom_count * (atom_count - 1) / 2 != h.rows() ||
        (atom_count > 1 && atoms_for_dimension(h.rows()) != atom_count))
        throw DimensionError("pair hamiltonian size does not match the atom count");
}

}  // namespace

double foerster_dynamics(const RMatrix& hamiltonian, int atom_count, double t_us) {
    check_dimension(hamiltonian, atom_count);
    if (!(t_us >= 0.0)) throw DomainError("foerster_dynamics: time must be >= 0");
    if (atom_count == 1 || t_us == 0.0) return 0.0;
    const HermitianPropagator prop(hamiltonian);
    CVector psi0 = CVector::Zero(hamiltonian.rows());
    psi0[0] = 1.0;
    const CVector psi = prop.evolve(psi0, t_us);
    return (1.0 - std::norm(psi[0])) / atom_count;
}

double foerster_time_average(const RMatrix& hamiltonian, int atom_count) {
    check_dimension(hamiltonian, atom_count);
    if (atom_count == 1) return 0.0;
    Eigen::SelfAdjointEigenSolver<RMatrix> solver(hamiltonian);
    const Eigen::VectorXd& e = solver.eigenvalues();
    const RMatrix& v = solver.eigenvectors();
    const double scale = std::max(1.0, e.cwiseAbs().maxCoeff());
    // Project onto each eigenspace; degenerate eigenvectors must be grouped.
    double remaining = 0.0;
    Eigen::Index k = 0;
    while (k < e.size()) {
        Eigen::Index end = k + 1;
        while (end < e.size() && e[end] - e[end - 1] < 1e-9 * scale) ++end;
        Eigen::VectorXd projected = Eigen::VectorXd::Zero(e.size());
        for (Eigen::Index q = k; q < end; ++q) projected += v(0, q) * v.col(q);
        remaining += projected[0] * projected[0];
        k = end;
    }
    return (1.0 - remaining) / atom_count;
}

Table ScanTrace::to_table() const {
    Table t{{"E_Vcm", "rhoS"}, {}};
    for (std::size_t i = 0; i < field_Vcm.size(); ++i) t.add_row({field_Vcm[i], rho_s[i]});
    return t;
}

StarkScan scan_stark(const model::FoersterChannel& channel, std::span<const double> grid,
                     const StarkScanOptions& options, const ParallelFor& parallel) {
    channel.validate();
    require_increasing(grid, "scan_stark");
    if (options.samples < 1) throw DomainError("scan_stark: samples must be >= 1");
    if (!options.time_averaged && !(options.interaction_time_us > 0.0))
        throw DomainError("scan_stark: interaction_time_us must be > 0");
    PairBasis{options.atom_count};

    std::vector<std::vector<double>> rows(options.samples);
    parallel(options.samples, [&](std::size_t s) {
        const AtomConfiguration config =
            sample_configuration(options.volume, options.atom_count, derive_seed(options.seed, s));
        std::vector<double>& row = rows[s];
        row.resize(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const RMatrix h = build_pair_hamiltonian(channel, config, grid[i], options.volume.min_distance_um);
            row[i] = options.time_averaged ? foerster_time_average(h, options.atom_count)
                                           : foerster_dynamics(h, options.atom_count, options.interaction_time_us);
        }
    });

    StarkScan out;
    out.trace.field_Vcm.assign(grid.begin(), grid.end());
    out.trace.rho_s.assign(grid.size(), 0.0);
    for (const auto& row : rows)
        for (std::size_t i = 0; i < grid.size(); ++i) out.trace.rho_s[i] += row[i];
    for (double& v : out.trace.rho_s) v /= static_cast<double>(options.samples);
    out.stats = lineshape_stats(out.trace.field_Vcm, out.trace.rho_s);
    return out;
}

Table TimeDependence::to_table() const {
    Table t{{"T_us", "amplitude", "fwhm"}, {}};
    for (const auto& p : points) t.add_row({p.interaction_time_us, p.stats.amplitude, p.stats.fwhm});
    return t;
}

std::vector<double> resonance_window(const model::FoersterChannel& channel, double t_us, std::size_t points) {
    const auto centre = channel.resonance_field();
    if (!centre) throw DomainError("resonance_window: channel has no real resonance field");
    if (!(t_us > 0.0)) throw DomainError("resonance_window: time must be > 0");
    if (points < 3) throw DomainError("resonance_window: at least three points required");
    const double half_width_MHz = 8.0 / t_us + 6.0;
    const double s = channel.stark_coeff_MHz_per_V2cm2;
    auto field_at = [&](double defect) {
        return std::sqrt(std::max(0.0, (channel.defect_zero_field_MHz - defect) / s));
    };
    double lo = field_at(-half_width_MHz);
    double hi = field_at(half_width_MHz);
    if (lo > hi) std::swap(lo, hi);
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i) grid[i] = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
    return grid;
}

TimeDependence time_dependence(const model::FoersterChannel& channel, std::span<const double> time_grid,
                               StarkScanOptions options, std::size_t points_per_scan, const ParallelFor& parallel) {
    TimeDependence out;
    options.time_averaged = false;
    for (double t : time_grid) {
        if (!(t > 0.0)) throw DomainError("time_dependence: interaction times must be > 0");
        options.interaction_time_us = t;
        const auto grid = resonance_window(channel, t, points_per_scan);
        out.points.push_back({t, scan_stark(channel, grid, options, parallel).stats});
    }
    return out;
}

double rf_dynamics(const model::FoersterChannel& channel, const AtomConfiguration& config, double dc_field_Vcm,
                   const model::RfField& rf, double t_us, const ode::AdaptiveOptions& options) {
    rf.validate();
    if (!(t_us >= 0.0)) throw DomainError("rf_dynamics: time must be >= 0");
    const int n = config.atom_count();
    const RMatrix h0 = build_pair_hamiltonian(channel, config, dc_field_Vcm, 0.0);
    if (n == 1) return 0.0;
    const double depth = rf.defect_modulation_MHz;
    const double freq = rf.frequency_MHz;
    auto rhs = [&](double t, const CVector& psi) -> CVector {
        const double shift = -depth * std::sin(two_pi * freq * t);
        CVector out = h0 * psi;
        out.tail(psi.size() - 1) += shift * psi.tail(psi.size() - 1);
        return cplx(0.0, -two_pi) * out;
    };
    CVector psi0 = CVector::Zero(h0.rows());
    psi0[0] = 1.0;
    ode::AdaptiveOptions opt = options;
    if (opt.max_step == 0.0 && freq > 0.0) opt.max_step = 0.05 / freq;
    const CVector psi = ode::integrate_adaptive(rhs, psi0, 0.0, t_us, opt);
    return (1.0 - std::norm(psi[0])) / n;
}

ScanTrace rf_scan(const model::FoersterChannel& channel, const AtomConfiguration& config,
                  std::span<const double> grid, const model::RfField& rf, double t_us, const ParallelFor& parallel) {
    require_increasing(grid, "rf_scan");
    ScanTrace trace{{grid.begin(), grid.end()}, std::vector<double>(grid.size())};
    parallel(grid.size(), [&](std::size_t i) { trace.rho_s[i] = rf_dynamics(channel, config, grid[i], rf, t_us); });
    return trace;
}

std::vector<FloquetCrossing> floquet_crossings(const model::FoersterChannel& channel, const model::RfField& rf,
                                               int m_max, double field_min, double field_max) {
    rf.validate();
    if (m_max < 0) throw DomainError("floquet_crossings: m_max must be >= 0");
    if (!std::isfinite(field_min) || !std::isfinite(field_max) || field_min > field_max)
        throw DomainError("floquet_crossings: field range must be finite and ordered");
    std::vector<FloquetCrossing> out;
    const double s = channel.stark_coeff_MHz_per_V2cm2;
    if (s == 0.0) return out;
    for (int m = -m_max; m <= m_max; ++m) {
        const double e2 = (channel.defect_zero_field_MHz - m * rf.frequency_MHz) / s;
        if (e2 < 0.0) continue;
        const double e = std::sqrt(e2);
        for (double candidate : {-e, e}) {
            if (candidate >= field_min && candidate <= field_max) out.push_back({m, candidate});
            if (e == 0.0) break;
        }
    }
    return out;
}

Table crossings_table(const std::vector<FloquetCrossing>& crossings) {
    Table t{{"m", "E_Vcm"}, {}};
    for (const auto& c : crossings) t.add_row({static_cast<double>(c.order), c.field_Vcm});
    return t;
}

namespace {

double bessel_j(int n, double x) {
    // J_{-n} = (-1)^n J_n and J_n(-x) = (-1)^n J_n(x)
    double sign = 1.0;
    if (n < 0) {
        n = -n;
        if (n % 2) sign = -sign;
    }
    if (x < 0.0) {
        x = -x;
        if (n % 2) sign = -sign;
    }
    return sign * std::cyl_bessel_j(static_cast<double>(n), x);
}

}  // namespace

double generalized_bessel(int m, double x, double y) {
    if (y == 0.0) return bessel_j(m, x);
    const int reach = static_cast<int>(std::ceil(std::abs(y) + 0.5 * std::abs(x))) + 30;
    double sum = 0.0;
    for (int k = -reach; k <= reach; ++k) sum += bessel_j(m - 2 * k, x) * bessel_j(k, y);
    return sum;
}

SidebandSpectrum floquet_sideband_weights(const model::FoersterChannel& channel, double dc_field_Vcm,
                                          const model::RfField& rf, int m_max) {
    rf.validate();
    if (m_max < 0) throw DomainError("floquet_sideband_weights: m_max must be >= 0");
    const double s = channel.stark_coeff_MHz_per_V2cm2;
    double rf_field = 0.0;
    if (rf.field_amplitude_Vcm) {
        rf_field = *rf.field_amplitude_Vcm;
    } else if (rf.defect_modulation_MHz > 0.0) {
        const double slope = std::abs(2.0 * s * dc_field_Vcm);
        if (slope == 0.0) throw DomainError("floquet_sideband_weights: zero Stark slope, give field_amplitude_Vcm");
        rf_field = rf.defect_modulation_MHz / slope;
    }
    // Delta(t) = mean - a sin(w t) + b cos(2 w t)
    const double a = 2.0 * s * dc_field_Vcm * rf_field;
    const double b = 0.5 * s * rf_field * rf_field;
    const double x = -a / rf.frequency_MHz;
    const double y = b / (2.0 * rf.frequency_MHz);

    SidebandSpectrum out;
    out.mean_defect_MHz = model::foerster_defect(channel, dc_field_Vcm) - b;
    static const std::complex<double> i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (int m = -m_max; m <= m_max; ++m) out.weights.push_back({m, i_pow[((m % 4) + 4) % 4] * generalized_bessel(m, x, y)});
    return out;
}

DetectionResult apply_detection(std::span<const double> populations, const model::DetectionModel& detection,
                                std::uint64_t shots, std::uint64_t seed) {
    detection.validate();
    if (populations.empty()) throw DomainError("apply_detection: populations are empty");
    for (double p : populations)
        if (!(p >= 0.0)) throw DomainError("apply_detection: populations must be >= 0");
    DetectionResult out{std::vector<std::uint64_t>(populations.size()), std::vector<std::uint64_t>(populations.size())};
    Engine engine{seed};
    std::discrete_distribution<int> pick(populations.begin(), populations.end());
    for (std::uint64_t s = 0; s < shots; ++s) {
        const int present = pick(engine);
        std::binomial_distribution<int> thin(present, detection.efficiency);
        ++out.true_counts[present];
        ++out.detected_counts[thin(engine)];
    }
    return out;
}

std::vector<double> detection_distribution(std::span<const double> populations, const model::DetectionModel& detection) {
    detection.validate();
    const double eta = detection.efficiency;
    std::vector<double> out(populations.size(), 0.0);
    for (std::size_t n = 0; n < populations.size(); ++n) {
        double choose = 1.0;  // C(n, k)
        for (std::size_t k = 0; k <= n; ++k) {
            out[k] += populations[n] * choose * std::pow(eta, static_cast<double>(k)) *
                      std::pow(1.0 - eta, static_cast<double>(n - k));
            choose = choose * static_cast<double>(n - k) / static_cast<double>(k + 1);
        }
    }
    return out;
}

}  // namespace rydsim::foerster
