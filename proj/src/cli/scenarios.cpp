#include "rydsim/cli/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "rydsim/bloch.hpp"
#include "rydsim/blockade.hpp"
#include "rydsim/foerster.hpp"
#include "rydsim/gates.hpp"
#include "rydsim/lineshape.hpp"
#include "rydsim/mesoscopic.hpp"
#include "rydsim/model.hpp"

namespace rydsim::cli {

namespace {

constexpr std::size_t max_grid_points = 1'000'000;

template <class F>
void checked(const Reader& r, const std::string& key, F&& check) {
    try {
        check();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        r.fail(key, e.what());
    }
}

std::vector<double> read_grid(Reader& p, const std::string& key, const std::string& unit, double start,
                              double stop, double step) {
    Reader g = p.child(key);
    const double a = g.number("start_" + unit, start);
    const double b = g.number("stop_" + unit, stop);
    const double h = g.number_above("step_" + unit, step, 0.0);
    g.finish();
    if (b <= a) g.fail("stop_" + unit, "must exceed start_" + unit);
    const double count = std::floor((b - a) / h + 1e-9) + 1.0;
    if (count > static_cast<double>(max_grid_points)) g.fail("step_" + unit, "grid too fine");
    std::vector<double> grid;
    for (std::size_t i = 0; i < static_cast<std::size_t>(count); ++i) grid.push_back(a + h * static_cast<double>(i));
    return grid;
}

json stats_json(const ResonanceStats& s) {
    return {{"amplitude", s.amplitude}, {"fwhm", s.fwhm}, {"peak_position", s.peak_position}, {"truncated", s.truncated}};
}

json ladder_defaults(const std::array<model::LaserField, 3>& steps) {
    json out = json::array();
    for (int i = 0; i < 3; ++i) {
        json s = {{"wavelength_nm", steps[i].wavelength_nm}, {"rabi_MHz", steps[i].rabi_MHz},
                  {"linewidth_MHz", steps[i].linewidth_MHz}};
        if (i < 2) s["detuning_MHz"] = steps[i].detuning_MHz;
        out.push_back(s);
    }
    return out;
}

// The third-step detuning is the scan variable and is not read from the config.
bloch::LevelScheme read_ladder(Reader& p, const bloch::LevelScheme& defaults) {
    bloch::LevelScheme scheme = defaults;
    const json fallback = ladder_defaults(defaults.steps);
    auto steps = p.children("steps", fallback);
    for (int i = 0; i < 3; ++i) {
        Reader& s = steps[i];
        model::LaserField& f = scheme.steps[i];
        f.wavelength_nm = s.number_above("wavelength_nm", f.wavelength_nm, 0.0);
        if (i < 2) f.detuning_MHz = s.number("detuning_MHz", f.detuning_MHz);
        f.rabi_MHz = s.number_at_least("rabi_MHz", f.rabi_MHz, 0.0);
        f.linewidth_MHz = s.number_at_least("linewidth_MHz", f.linewidth_MHz, 0.0);
        s.finish();
        checked(s, "", [&] { f.validate(); });
    }
    Reader d = p.child("decay_MHz");
    scheme.spont_decay_MHz[0] = d.number_at_least("level2", defaults.spont_decay_MHz[0], 0.0);
    scheme.spont_decay_MHz[1] = d.number_at_least("level3", defaults.spont_decay_MHz[1], 0.0);
    scheme.spont_decay_MHz[2] = d.number_at_least("level4", defaults.spont_decay_MHz[2], 0.0);
    d.finish();
    scheme.interaction_time_us = p.number_above("interaction_time_us", defaults.interaction_time_us, 0.0);
    checked(p, "", [&] { scheme.validate(); });
    return scheme;
}

bloch::Method read_method(Reader& p, const std::string& fallback) {
    const std::string m = p.choice("method", fallback, {"adaptive", "fixed_step", "exponential"});
    if (m == "fixed_step") return bloch::Method::fixed_step;
    if (m == "exponential") return bloch::Method::exponential;
    return bloch::Method::adaptive;
}

model::FoersterChannel read_channel(Reader& p, const std::string& fallback_preset) {
    Reader c = p.child("channel");
    const std::string preset = c.choice("preset", fallback_preset, {"rb37p", "rb39p"});
    const bool is37 = preset == "rb37p";
    model::FoersterChannel channel = is37 ? model::presets::rb37p_channel() : model::presets::rb39p_channel();
    const double d0 = c.number("defect_zero_field_MHz", channel.defect_zero_field_MHz);
    const double e_cal = c.number_above(
        "calibration_field_Vcm",
        is37 ? model::presets::rb37p_resonance_field_Vcm : model::presets::rb39p_first_order_field_Vcm, 0.0);
    const double d_cal = c.number("calibration_defect_MHz", is37 ? 0.0 : model::presets::rb39p_rf_frequency_MHz);
    channel.dd_coeff_MHz_um3 = c.number_above("dd_coeff_MHz_um3", channel.dd_coeff_MHz_um3, 0.0);
    c.finish();
    checked(c, "calibration_field_Vcm", [&] { model::apply_calibration(channel, model::calibrate_channel(d0, e_cal, d_cal)); });
    checked(c, "", [&] { channel.validate(); });
    return channel;
}

foerster::ExcitationVolume read_volume(Reader& p) {
    Reader v = p.child("volume");
    foerster::ExcitationVolume vol;
    vol.shape = v.choice("shape", "cube", {"cube", "sphere"}) == "cube" ? foerster::VolumeShape::cube
                                                                        : foerster::VolumeShape::sphere;
    vol.size_um = v.number_above("size_um", vol.size_um, 0.0);
    vol.min_distance_um = v.number_above("min_distance_um", vol.min_distance_um, 0.0);
    v.finish();
    checked(v, "", [&] { vol.validate(); });
    return vol;
}

json volume_json(const foerster::ExcitationVolume& v) {
    return {{"shape", v.shape == foerster::VolumeShape::cube ? "cube" : "sphere"},
            {"size_um", v.size_um},
            {"min_distance_um", v.min_distance_um}};
}

blockade::Envelope read_envelope(Reader& p, const std::string& fallback) {
    return p.choice("envelope", fallback, {"flat", "sine_squared"}) == "flat" ? blockade::Envelope::flat
                                                                             : blockade::Envelope::sine_squared;
}

// ---- spectrum --------------------------------------------------------------

struct SpectrumSpec {
    bloch::LevelScheme scheme;
    double atom_count;
    bloch::EvolveOptions evolve;
    std::vector<double> grid;
};

SpectrumSpec read_spectrum(Reader& p) {
    bloch::LevelScheme d;
    d.steps = {model::LaserField{780.241, 92.0, 10.0, 0.5}, model::LaserField{1366.875, 0.0, 40.0, 0.5},
               model::LaserField{743.0, 0.0, 0.5, 0.5}};
    d.spont_decay_MHz = {6.07, 3.49, 0.0};
    d.interaction_time_us = 2.0;
    SpectrumSpec s;
    s.scheme = read_ladder(p, d);
    s.atom_count = p.number_above("atom_count", 1.0, 0.0);
    s.evolve.method = read_method(p, "adaptive");
    s.evolve.tol.relative = p.number_above("relative_tolerance", 1e-8, 0.0);
    s.grid = read_grid(p, "grid", "MHz", -130.0, 60.0, 0.5);
    return s;
}

ScenarioOutput run_spectrum(const SpectrumSpec& s, const ParallelFor& parallel) {
    const auto trace = bloch::scan_spectrum(s.scheme, s.grid, s.atom_count, s.evolve, parallel);
    ScenarioOutput out;
    out.trace = trace.to_table();
    const auto stats = lineshape_stats(trace.detuning_MHz, trace.signal);
    out.results = stats_json(stats);
    return out;
}

// ---- doppler ---------------------------------------------------------------

struct DopplerSpec {
    bloch::LevelScheme scheme;
    model::BeamGeometry geometry;
    std::string geometry_name;
    bloch::DopplerOptions options;
    std::vector<double> grid;
};

DopplerSpec read_doppler(Reader& p, std::uint64_t seed) {
    bloch::LevelScheme d;
    d.steps = {model::LaserField{780.241, 3000.0, 60.0, 0.0}, model::LaserField{1366.875, 0.0, 500.0, 0.0},
               model::LaserField{743.0, 0.0, 60.0, 0.0}};
    d.spont_decay_MHz = {6.07, 3.49, 0.0};
    d.interaction_time_us = 10.0;
    DopplerSpec s;
    s.scheme = read_ladder(p, d);
    s.geometry_name = p.choice("geometry", "star", {"star", "collinear"});
    const std::array<double, 3> wl{s.scheme.steps[0].wavelength_nm, s.scheme.steps[1].wavelength_nm,
                                   s.scheme.steps[2].wavelength_nm};
    checked(p, "geometry", [&] {
        s.geometry = s.geometry_name == "star" ? model::beam_angles(wl).geometry : model::collinear_geometry(wl);
    });
    s.options.temperature_K = p.number_at_least("temperature_K", 300.0, 0.0);
    s.options.mass_amu = p.number_above("mass_amu", 85.4678, 0.0);
    s.options.velocity_samples = static_cast<std::size_t>(p.integer("velocity_samples", 64, 1, 1'000'000));
    s.options.evolve.method = read_method(p, "exponential");
    s.options.seed = seed;
    s.grid = read_grid(p, "grid", "MHz", -3000.3, -2999.7, 0.005);
    return s;
}

ScenarioOutput run_doppler(const DopplerSpec& s, const ParallelFor& parallel) {
    const auto trace = bloch::doppler_averaged_spectrum(s.scheme, s.geometry, s.grid, s.options, 1.0, parallel);
    ScenarioOutput out;
    out.trace = trace.to_table();
    out.results = stats_json(lineshape_stats(trace.detuning_MHz, trace.signal));
    out.results["closure_residual_per_nm"] = s.geometry.closure_residual();
    out.ensemble = json{{"kind", "thermal velocity samples"},
                        {"velocity_samples", s.options.velocity_samples},
                        {"temperature_K", s.options.temperature_K},
                        {"seed", s.options.seed},
                        {"geometry", s.geometry_name}};
    return out;
}

// ---- foerster-scan ---------------------------------------------------------

struct FoersterScanSpec {
    model::FoersterChannel channel;
    foerster::StarkScanOptions options;
    std::vector<double> grid;
};

FoersterScanSpec read_foerster_scan(Reader& p, std::uint64_t seed) {
    FoersterScanSpec s;
    s.channel = read_channel(p, "rb37p");
    s.options.atom_count = static_cast<int>(p.integer("atom_count", 2, 1, foerster::max_atoms));
    s.options.interaction_time_us = p.number_above("interaction_time_us", 0.5, 0.0);
    s.options.time_averaged = p.boolean("time_averaged", false);
    s.options.samples = static_cast<std::size_t>(p.integer("samples", 200, 1, 10'000'000));
    s.options.volume = read_volume(p);
    s.options.seed = seed;
    const double centre = s.channel.resonance_field().value_or(model::presets::rb37p_resonance_field_Vcm);
    s.grid = read_grid(p, "grid", "Vcm", std::max(0.0, centre - 0.05), centre + 0.05, 0.0005);
    return s;
}

json foerster_ensemble(const foerster::StarkScanOptions& o) {
    return {{"kind", "random atom configurations"},
            {"samples", o.samples},
            {"seed", o.seed},
            {"atom_count", o.atom_count},
            {"volume", volume_json(o.volume)}};
}

ScenarioOutput run_foerster_scan(const FoersterScanSpec& s, const ParallelFor& parallel) {
    const auto scan = foerster::scan_stark(s.channel, s.grid, s.options, parallel);
    ScenarioOutput out;
    out.trace = scan.trace.to_table();
    out.results = stats_json(scan.stats);
    out.ensemble = foerster_ensemble(s.options);
    return out;
}

// ---- foerster-time ---------------------------------------------------------

struct FoersterTimeSpec {
    model::FoersterChannel channel;
    foerster::StarkScanOptions options;
    std::vector<double> times;
    std::size_t points;
};

FoersterTimeSpec read_foerster_time(Reader& p, std::uint64_t seed) {
    FoersterTimeSpec s;
    s.channel = read_channel(p, "rb37p");
    s.options.atom_count = static_cast<int>(p.integer("atom_count", 2, 1, foerster::max_atoms));
    s.options.samples = static_cast<std::size_t>(p.integer("samples", 200, 1, 10'000'000));
    s.options.volume = read_volume(p);
    s.options.seed = seed;
    s.times = p.numbers("times_us", {0.1, 0.15, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0});
    for (double t : s.times)
        if (t <= 0.0) p.fail("times_us", "must be > 0");
    checked(p, "times_us", [&] { require_increasing(s.times, "times_us"); });
    s.points = static_cast<std::size_t>(p.integer("points_per_scan", 301, 11, 100'000));
    if (!s.channel.resonance_field()) p.fail("channel", "has no dc resonance field");
    return s;
}

ScenarioOutput run_foerster_time(const FoersterTimeSpec& s, const ParallelFor& parallel) {
    const auto td = foerster::time_dependence(s.channel, s.times, s.options, s.points, parallel);
    ScenarioOutput out;
    out.trace = td.to_table();
    json points = json::array();
    for (const auto& tp : td.points) points.push_back(stats_json(tp.stats));
    out.results = {{"points", points}};
    out.ensemble = foerster_ensemble(s.options);
    return out;
}

// ---- rf-floquet ------------------------------------------------------------

struct RfFloquetSpec {
    model::FoersterChannel channel;
    model::RfField rf;
    int m_max;
    double field_min;
    double field_max;
    bool time_domain;
    double distance_um;
    double interaction_time_us;
    std::vector<double> grid;
};

RfFloquetSpec read_rf_floquet(Reader& p) {
    RfFloquetSpec s;
    s.channel = read_channel(p, "rb37p");
    Reader r = p.child("rf");
    s.rf.frequency_MHz = r.number_above("frequency_MHz", 15.0, 0.0);
    s.rf.defect_modulation_MHz = r.number_at_least("defect_modulation_MHz", 22.5, 0.0);
    if (r.has("field_amplitude_Vcm")) s.rf.field_amplitude_Vcm = r.number_at_least("field_amplitude_Vcm", 0.0, 0.0);
    r.finish();
    checked(r, "", [&] { s.rf.validate(); });
    s.m_max = static_cast<int>(p.integer("m_max", 2, 0, 50));
    s.field_min = p.number_at_least("field_min_Vcm", 1.3, 0.0);
    s.field_max = p.number_above("field_max_Vcm", 2.3, s.field_min);
    Reader t = p.child("time_domain");
    s.time_domain = t.boolean("enabled", false);
    s.distance_um = t.number_above("distance_um", 10.2, 0.0);
    s.interaction_time_us = t.number_above("interaction_time_us", 3.0, 0.0);
    s.grid = read_grid(t, "grid", "Vcm", s.field_min, s.field_max, 0.002);
    t.finish();
    return s;
}

ScenarioOutput run_rf_floquet(const RfFloquetSpec& s, const ParallelFor& parallel) {
    const auto crossings = foerster::floquet_crossings(s.channel, s.rf, s.m_max, s.field_min, s.field_max);
    ScenarioOutput out;
    out.trace = foerster::crossings_table(crossings);
    json list = json::array();
    for (const auto& c : crossings) list.push_back({{"m", c.order}, {"E_Vcm", c.field_Vcm}});
    out.results = {{"crossings", list}};
    if (s.time_domain) {
        foerster::AtomConfiguration pair{{Vec3::Zero(), Vec3(s.distance_um, 0.0, 0.0)}};
        const auto scan = foerster::rf_scan(s.channel, pair, s.grid, s.rf, s.interaction_time_us, parallel);
        out.extra.emplace_back("rf_scan.csv", scan.to_table());
        json matched = json::array();
        const auto peaks = find_peaks(scan.field_Vcm, scan.rho_s, 0.0);
        for (const auto& c : crossings) {
            const Peak* best = nullptr;
            for (const auto& pk : peaks)
                if (std::abs(pk.position - c.field_Vcm) <= 0.02 && (!best || pk.height > best->height)) best = &pk;
            json m = {{"m", c.order}, {"crossing_Vcm", c.field_Vcm}};
            if (best) m["peak_Vcm"] = best->position;
            matched.push_back(m);
        }
        out.results["time_domain_peaks"] = matched;
    }
    return out;
}

// ---- blockade-revivals -----------------------------------------------------

struct RevivalSpec {
    blockade::EnsembleOptions options;
    std::vector<double> times;
    double blockade_radius_um;
};

RevivalSpec read_revivals(Reader& p, std::uint64_t seed) {
    RevivalSpec s;
    auto& o = s.options;
    o.mean_atoms = p.number_above("mean_atoms", 7.0, 0.0);
    o.radius_um = p.number_above("radius_um", 2.0, 0.0);
    o.c6_MHz_um6 = p.number_above("c6_MHz_um6", 3.2e6, 0.0);
    s.blockade_radius_um = p.number_above("blockade_radius_um", 10.0, 0.0);
    const double derived = model::rabi_for_blockade_radius(o.c6_MHz_um6, s.blockade_radius_um, o.mean_atoms);
    o.rabi_MHz = p.number_at_least("rabi_MHz", derived, 0.0);
    o.detuning_MHz = p.number("detuning_MHz", 0.0);
    o.k_max = static_cast<int>(p.integer("k_max", 2, 1, 2));
    o.samples = static_cast<std::size_t>(p.integer("samples", 500, 1, 10'000'000));
    o.profile = p.choice("profile", "gaussian", {"gaussian", "uniform_sphere"}) == "gaussian"
                    ? blockade::TrapProfile::gaussian
                    : blockade::TrapProfile::uniform_sphere;
    o.min_distance_um = p.number_above("min_distance_um", blockade::default_min_distance_um, 0.0);
    o.seed = seed;
    Reader t = p.child("time");
    const double stop = t.number_above("stop_us", 10.0, 0.0);
    const double step = t.number_above("step_us", 0.01, 0.0);
    t.finish();
    if (stop / step > static_cast<double>(max_grid_points)) t.fail("step_us", "grid too fine");
    const auto n = static_cast<std::size_t>(std::floor(stop / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) s.times.push_back(step * static_cast<double>(i));
    return s;
}

ScenarioOutput run_revivals(const RevivalSpec& s, const ParallelFor& parallel) {
    const auto& o = s.options;
    const auto ens = blockade::ensemble_average(o, s.times, parallel);
    const auto jc = blockade::jc_reference(o.mean_atoms, o.rabi_MHz, s.times);
    const auto windows = blockade::revival_windows(o.mean_atoms, o.rabi_MHz);
    double rms = 0.0;
    for (std::size_t i = 0; i < jc.size(); ++i) rms += (ens.mean.p1[i] - jc[i]) * (ens.mean.p1[i] - jc[i]);
    rms = std::sqrt(rms / static_cast<double>(jc.size()));
    ScenarioOutput out;
    out.trace = ens.mean.to_table();
    out.results = {{"rabi_MHz", o.rabi_MHz},
                   {"revival_contrast", blockade::revival_contrast(s.times, ens.mean.p1, windows)},
                   {"jc_revival_contrast", blockade::revival_contrast(s.times, jc, windows)},
                   {"rms_vs_jc", rms},
                   {"peak_p2", ens.peak_p2},
                   {"truncation_warning", ens.truncation_warning},
                   {"revival_time_us", 2.0 * std::sqrt(o.mean_atoms) / o.rabi_MHz}};
    out.ensemble = json{{"kind", "Poisson-loaded atom ensembles"},
                        {"samples", o.samples},
                        {"seed", o.seed},
                        {"mean_atoms", o.mean_atoms},
                        {"radius_um", o.radius_um},
                        {"profile", o.profile == blockade::TrapProfile::gaussian ? "gaussian" : "uniform_sphere"}};
    return out;
}

// ---- chirp -----------------------------------------------------------------

struct ChirpSpec {
    blockade::ChirpPulse chirp;
    int max_atoms;
};

ChirpSpec read_chirp(Reader& p) {
    ChirpSpec s;
    auto& c = s.chirp;
    c.rabi_MHz = p.number_above("rabi_MHz", 1.0, 0.0);
    c.sweep_start_MHz = p.number("sweep_start_MHz", -40.0);
    c.sweep_end_MHz = p.number("sweep_end_MHz", 40.0);
    c.duration_us = p.number_above("duration_us", 40.0, 0.0);
    c.envelope = read_envelope(p, "flat");
    checked(p, "", [&] { c.validate(); });
    s.max_atoms = static_cast<int>(p.integer("max_atoms", 10, 1, 1000));
    return s;
}

ScenarioOutput run_chirp(const ChirpSpec& s, const ParallelFor& parallel) {
    std::vector<double> p1(static_cast<std::size_t>(s.max_atoms));
    parallel(p1.size(), [&](std::size_t i) { p1[i] = blockade::chirped_excitation(static_cast<int>(i) + 1, s.chirp); });
    ScenarioOutput out;
    out.trace.columns = {"N", "P1"};
    for (std::size_t i = 0; i < p1.size(); ++i) out.trace.add_row({static_cast<double>(i + 1), p1[i]});
    const auto [lo, hi] = std::minmax_element(p1.begin(), p1.end());
    out.results = {{"min_P1", *lo}, {"spread", *hi - *lo}, {"sweep_rate_MHz_per_us", s.chirp.sweep_rate()}};
    return out;
}

// ---- stirap ----------------------------------------------------------------

struct StirapSpec {
    blockade::StirapPulses pulses;
    std::vector<double> delays;
};

blockade::GaussianPulse read_gaussian(Reader& p, const std::string& key, bool with_center) {
    Reader g = p.child(key);
    blockade::GaussianPulse pulse;
    pulse.peak_rabi_MHz = g.number_at_least("peak_rabi_MHz", 20.0, 0.0);
    pulse.width_us = g.number_above("width_us", 1.0, 0.0);
    if (with_center) pulse.center_us = g.number("center_us", 0.0);
    g.finish();
    return pulse;
}

StirapSpec read_stirap(Reader& p) {
    StirapSpec s;
    s.pulses.pump = read_gaussian(p, "pump", false);
    s.pulses.stokes = read_gaussian(p, "stokes", true);
    s.pulses.intermediate_detuning_MHz = p.number("intermediate_detuning_MHz", 0.0);
    s.delays = p.numbers("pump_delays_us", {-3.0, -2.0, -1.2, -0.6, 0.0, 0.6, 1.2, 2.0, 3.0});
    checked(p, "", [&] { s.pulses.validate(); });
    return s;
}

ScenarioOutput run_stirap(const StirapSpec& s, const ParallelFor& parallel) {
    std::vector<double> eff(s.delays.size());
    parallel(eff.size(), [&](std::size_t i) {
        blockade::StirapPulses pulses = s.pulses;
        pulses.pump.center_us = pulses.stokes.center_us + s.delays[i];
        eff[i] = blockade::stirap_transfer(pulses);
    });
    ScenarioOutput out;
    out.trace.columns = {"pump_delay_us", "efficiency"};
    for (std::size_t i = 0; i < eff.size(); ++i) out.trace.add_row({s.delays[i], eff[i]});
    out.results = {{"max_efficiency", *std::max_element(eff.begin(), eff.end())}};
    return out;
}

// ---- gate-sim --------------------------------------------------------------

struct GateSpec {
    double rabi;
    gates::PulseSequence sequence;
    std::vector<double> ratios;
    double truth_table_ratio;
};

GateSpec read_gate(Reader& p) {
    GateSpec s;
    s.rabi = p.number_above("rabi_MHz", 1.0, 0.0);
    s.ratios = p.numbers("blockade_ratios", {0.0, 1.0, 3.0, 10.0, 30.0, 100.0, 300.0});
    for (double r : s.ratios)
        if (r < 0.0) p.fail("blockade_ratios", "must be >= 0");
    s.truth_table_ratio = p.number_at_least("truth_table_ratio", 100.0, 0.0);
    s.sequence = gates::default_cz_sequence();
    const auto envelope = read_envelope(p, "sine_squared");
    for (auto& seg : s.sequence.segments) seg.envelope = envelope;
    return s;
}

ScenarioOutput run_gate(const GateSpec& s, const ParallelFor& parallel) {
    std::vector<std::optional<gates::CzSimulation>> sims(s.ratios.size());
    parallel(sims.size(), [&](std::size_t i) {
        sims[i].emplace(gates::simulate_blockade_cz({s.rabi, s.ratios[i] * s.rabi}, s.sequence));
    });
    ScenarioOutput out;
    out.trace.columns = {"B_over_rabi", "fidelity"};
    for (std::size_t i = 0; i < sims.size(); ++i) out.trace.add_row({s.ratios[i], sims[i]->fidelity});
    const auto cnot = gates::simulate_blockade_cnot({s.rabi, s.truth_table_ratio * s.rabi}, s.sequence);
    out.extra.emplace_back("truth_table.csv", cnot.truth_table_csv());
    const auto bell = gates::blockade_bell_state({s.rabi, std::numeric_limits<double>::infinity()});
    json leak = json::array();
    for (const auto& sim : sims) leak.push_back(sim->leakage);
    out.results = {{"leakage", leak},
                   {"cnot_fidelity", cnot.fidelity},
                   {"cnot_leakage", cnot.leakage},
                   {"bell_fidelity_perfect_blockade", gates::bell_fidelity(bell)}};
    return out;
}

// ---- mesoscopic-gate -------------------------------------------------------

struct MesoscopicSpec {
    double phi;
    double rabi;
    int max_atoms;
    gates::AuxiliaryKind auxiliary;
    gates::AdiabaticTransfer transfer;
};

MesoscopicSpec read_mesoscopic(Reader& p) {
    MesoscopicSpec s;
    s.phi = p.number("phi_rad", 0.7);
    s.rabi = p.number_above("rabi_MHz", 1.0, 0.0);
    s.max_atoms = static_cast<int>(p.integer("max_atoms", 10, 1, 200));
    s.auxiliary = p.choice("auxiliary", "microwave_rydberg", {"microwave_rydberg", "optical_ground"}) ==
                          "microwave_rydberg"
                      ? gates::AuxiliaryKind::microwave_rydberg
                      : gates::AuxiliaryKind::optical_ground;
    Reader t = p.child("transfer");
    s.transfer.sweep_MHz = t.number_above("sweep_MHz", 20.0, 0.0);
    s.transfer.duration_us = t.number_above("duration_us", 60.0, 0.0);
    t.finish();
    return s;
}

ScenarioOutput run_mesoscopic(const MesoscopicSpec& s, const ParallelFor& parallel) {
    const auto forward = gates::phase_rotation_forward(s.phi, s.auxiliary, s.transfer);
    const auto compensated = gates::phase_compensated(forward);
    const auto naive = gates::naive_return(forward);
    gates::MesoscopicOptions options;
    options.auxiliary = s.auxiliary;
    const auto n = static_cast<std::size_t>(s.max_atoms);
    std::vector<gates::MesoscopicGate> comp(n), unc(n);
    parallel(2 * n, [&](std::size_t k) {
        const gates::MesoscopicRegister reg{static_cast<int>(k % n) + 1, s.rabi};
        if (k < n)
            comp[k] = gates::mesoscopic_unitary(compensated, reg, options);
        else
            unc[k - n] = gates::mesoscopic_unitary(naive, reg, options);
    });
    ScenarioOutput out;
    out.trace.columns = {"N", "deviation_compensated", "deviation_uncompensated", "phase_compensated",
                         "phase_uncompensated"};
    double dev_c = 0.0;
    double dev_u = 0.0;
    double leak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dc = phase_aligned_distance(comp[i].logical, comp[0].logical);
        const double du = phase_aligned_distance(unc[i].logical, unc[0].logical);
        dev_c = std::max(dev_c, dc);
        dev_u = std::max(dev_u, du);
        leak = std::max(leak, comp[i].leakage);
        out.trace.add_row({static_cast<double>(i + 1), dc, du, comp[i].logical_phase(), unc[i].logical_phase()});
    }
    out.results = {{"max_deviation_compensated", dev_c},
                   {"max_deviation_uncompensated", dev_u},
                   {"max_leakage_compensated", leak}};
    return out;
}

}  // namespace

void resolve_params(const std::string& scenario, Reader& p) {
    if (scenario == "spectrum") read_spectrum(p);
    else if (scenario == "doppler") read_doppler(p, 0);
    else if (scenario == "foerster-scan") read_foerster_scan(p, 0);
    else if (scenario == "foerster-time") read_foerster_time(p, 0);
    else if (scenario == "rf-floquet") read_rf_floquet(p);
    else if (scenario == "blockade-revivals") read_revivals(p, 0);
    else if (scenario == "chirp") read_chirp(p);
    else if (scenario == "stirap") read_stirap(p);
    else if (scenario == "gate-sim") read_gate(p);
    else if (scenario == "mesoscopic-gate") read_mesoscopic(p);
    else throw ConfigError("scenario", "unknown scenario '" + scenario + "'");
}

ScenarioOutput execute_scenario(const ScenarioConfig& config, const ParallelFor& parallel) {
    json scratch = json::object();
    Reader p(config.params, scratch, "params");
    const auto seed = config.seed;
    const std::string& name = config.scenario;
    ScenarioOutput out;
    if (name == "spectrum") out = run_spectrum(read_spectrum(p), parallel);
    else if (name == "doppler") out = run_doppler(read_doppler(p, seed), parallel);
    else if (name == "foerster-scan") out = run_foerster_scan(read_foerster_scan(p, seed), parallel);
    else if (name == "foerster-time") out = run_foerster_time(read_foerster_time(p, seed), parallel);
    else if (name == "rf-floquet") out = run_rf_floquet(read_rf_floquet(p), parallel);
    else if (name == "blockade-revivals") out = run_revivals(read_revivals(p, seed), parallel);
    else if (name == "chirp") out = run_chirp(read_chirp(p), parallel);
    else if (name == "stirap") out = run_stirap(read_stirap(p), parallel);
    else if (name == "gate-sim") out = run_gate(read_gate(p), parallel);
    else if (name == "mesoscopic-gate") out = run_mesoscopic(read_mesoscopic(p), parallel);
    else throw ConfigError("scenario", "unknown scenario '" + name + "'");
    p.finish();
    return out;
}

}  // namespace rydsim::cli
