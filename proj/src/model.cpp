#include "rydsim/model.hpp"

#include <cmath>
#include <sstream>

#include "rydsim/error.hpp"

namespace rydsim::model {

namespace {

bool is_half_integer(double v) {
    const double twice = 2.0 * v;
    return std::abs(twice - std::round(twice)) < 1e-12 && std::lround(twice) % 2 != 0;
}

std::string fraction(double v) {
    const long twice = std::lround(2.0 * v);
    return twice % 2 ? std::to_string(twice) + "/2" : std::to_string(twice / 2);
}

}  // namespace

char orbital_letter(Orbital l) {
    switch (l) {
        case Orbital::S: return 'S';
        case Orbital::P: return 'P';
        case Orbital::D: return 'D';
        case Orbital::F: return 'F';
    }
    return '?';
}

Orbital orbital_from_letter(char letter) {
    switch (letter) {
        case 'S': return Orbital::S;
        case 'P': return Orbital::P;
        case 'D': return Orbital::D;
        case 'F': return Orbital::F;
        default: throw DomainError(std::string("orbital letter must be one of S, P, D, F, got '") + letter + "'");
    }
}

void RydbergStateLabel::validate() const {
    if (species.empty()) throw DomainError("state label: species is empty");
    if (n < 1) throw DomainError("state label: n must be >= 1");
    const double l_value = static_cast<double>(l);
    if (l_value >= n) throw DomainError("state label: orbital L must be below n");
    if (!is_half_integer(j) || j <= 0.0 || std::abs(std::abs(j - l_value) - 0.5) > 1e-12)
        throw DomainError("state label: J must equal L +/- 1/2 and be positive");
    if (!is_half_integer(mj_abs) || mj_abs <= 0.0 || mj_abs > j)
        throw DomainError("state label: |mJ| must be a positive half-integer not above J");
}

std::string RydbergStateLabel::to_string() const {
    std::ostringstream out;
    out << species << ' ' << n << orbital_letter(l) << fraction(j) << " |mJ|=" << fraction(mj_abs);
    return out.str();
}

void LaserField::validate() const {
    if (!(wavelength_nm > 0.0)) throw DomainError("laser: wavelength_nm must be > 0");
    if (!(rabi_MHz >= 0.0)) throw DomainError("laser: rabi_MHz must be >= 0");
    if (!(linewidth_MHz >= 0.0)) throw DomainError("laser: linewidth_MHz must be >= 0");
    if (!std::isfinite(detuning_MHz)) throw DomainError("laser: detuning_MHz must be finite");
}

void RfField::validate() const {
    if (!(frequency_MHz > 0.0)) throw DomainError("rf: frequency_MHz must be > 0");
    if (!(defect_modulation_MHz >= 0.0)) throw DomainError("rf: defect_modulation_MHz must be >= 0");
    if (field_amplitude_Vcm && !(*field_amplitude_Vcm >= 0.0))
        throw DomainError("rf: field_amplitude_Vcm must be >= 0");
}

void FoersterChannel::validate() const {
    initial_pair.first.validate();
    initial_pair.second.validate();
    final_pair.first.validate();
    final_pair.second.validate();
    if (!std::isfinite(defect_zero_field_MHz) || !std::isfinite(stark_coeff_MHz_per_V2cm2))
        throw DomainError("channel: defect coefficients must be finite");
    if (!(dd_coeff_MHz_um3 > 0.0)) throw DomainError("channel: dd_coeff_MHz_um3 must be > 0");
}

std::optional<double> FoersterChannel::resonance_field() const {
    if (stark_coeff_MHz_per_V2cm2 == 0.0) return std::nullopt;
    const double e2 = defect_zero_field_MHz / stark_coeff_MHz_per_V2cm2;
    if (e2 < 0.0) return std::nullopt;
    return std::sqrt(e2);
}

void BeamGeometry::validate() const {
    for (int i = 0; i < 3; ++i) {
        if (!(wavelengths_nm[i] > 0.0)) throw DomainError("geometry: wavelengths must be > 0");
        if (std::abs(unit_wavevectors[i].norm() - 1.0) > 1e-12)
            throw DomainError("geometry: wave-vector directions must be unit vectors");
    }
}

Vec3 BeamGeometry::wavevector(int beam) const {
    if (beam < 0 || beam > 2) throw DomainError("geometry: beam index must be 0, 1 or 2");
    return unit_wavevectors[beam] / wavelengths_nm[beam];
}

Vec3 BeamGeometry::total_wavevector() const { return wavevector(0) + wavevector(1) + wavevector(2); }

double BeamGeometry::closure_residual() const { return total_wavevector().norm(); }

void DetectionModel::validate() const {
    if (!(efficiency >= 0.0 && efficiency <= 1.0)) throw DomainError("detection: efficiency must lie in [0, 1]");
}

double foerster_defect(const FoersterChannel& channel, double field_Vcm) {
    return channel.defect_zero_field_MHz - channel.stark_coeff_MHz_per_V2cm2 * field_Vcm * field_Vcm;
}

StarkCoefficients calibrate_channel(double defect_zero_field_MHz, double resonance_field_Vcm,
                                    double defect_at_field_MHz) {
    if (!(std::abs(resonance_field_Vcm) > 0.0) || !std::isfinite(resonance_field_Vcm))
        throw CalibrationError("calibration field must be nonzero and finite");
    const double s = (defect_zero_field_MHz - defect_at_field_MHz) / (resonance_field_Vcm * resonance_field_Vcm);
    return {defect_zero_field_MHz, s};
}

void apply_calibration(FoersterChannel& channel, const StarkCoefficients& coeffs) {
    channel.defect_zero_field_MHz = coeffs.defect_zero_field_MHz;
    channel.stark_coeff_MHz_per_V2cm2 = coeffs.stark_coeff_MHz_per_V2cm2;
}

double dd_coupling(const FoersterChannel& channel, double distance_um) {
    if (!(distance_um > 0.0)) throw DomainError("dd_coupling: distance must be > 0");
    return channel.dd_coeff_MHz_um3 / (distance_um * distance_um * distance_um);
}

double vdw_shift(double c6_MHz_um6, double distance_um) {
    if (!(distance_um > 0.0)) throw DomainError("vdw_shift: distance must be > 0");
    const double r3 = distance_um * distance_um * distance_um;
    return c6_MHz_um6 / (r3 * r3);
}

double blockade_radius(double c6_MHz_um6, double rabi_MHz, double atom_count) {
    if (!(rabi_MHz > 0.0)) throw DomainError("blockade_radius: rabi must be > 0");
    if (!(atom_count >= 1.0)) throw DomainError("blockade_radius: atom count must be >= 1");
    return std::pow(c6_MHz_um6 / (rabi_MHz * std::sqrt(atom_count)), 1.0 / 6.0);
}

double rabi_for_blockade_radius(double c6_MHz_um6, double radius_um, double atom_count) {
    if (!(atom_count >= 1.0)) throw DomainError("rabi_for_blockade_radius: atom count must be >= 1");
    return vdw_shift(c6_MHz_um6, radius_um) / std::sqrt(atom_count);
}

BeamAngles beam_angles(const std::array<double, 3>& wavelengths_nm) {
    for (double w : wavelengths_nm)
        if (!(w > 0.0)) throw DomainError("beam_angles: wavelengths must be > 0");
    const double k1 = 1.0 / wavelengths_nm[0];
    const double k2 = 1.0 / wavelengths_nm[1];
    const double k3 = 1.0 / wavelengths_nm[2];
    const double cos12 = (k3 * k3 - k1 * k1 - k2 * k2) / (2.0 * k1 * k2);
    if (!(cos12 >= -1.0 && cos12 <= 1.0))
        throw ClosureError("beam_angles: wavenumbers violate the triangle inequality, no zero-sum geometry exists");

    BeamAngles out;
    out.theta12 = std::acos(cos12);
    BeamGeometry& g = out.geometry;
    g.wavelengths_nm = wavelengths_nm;
    g.unit_wavevectors[0] = Vec3::UnitX();
    g.unit_wavevectors[1] = Vec3(cos12, std::sqrt(std::max(0.0, 1.0 - cos12 * cos12)), 0.0);
    const Vec3 sum12 = k1 * g.unit_wavevectors[0] + k2 * g.unit_wavevectors[1];
    g.unit_wavevectors[2] = sum12.norm() > 0.0 ? Vec3(-sum12.normalized()) : Vec3(Vec3::UnitY());
    out.theta13 = std::acos(std::clamp(g.unit_wavevectors[0].dot(g.unit_wavevectors[2]), -1.0, 1.0));
    out.theta23 = std::acos(std::clamp(g.unit_wavevectors[1].dot(g.unit_wavevectors[2]), -1.0, 1.0));

    const double kmax = std::max({k1, k2, k3});
    if (g.closure_residual() > 1e-12 * kmax) throw ClosureError("beam_angles: closure residual above tolerance");
    return out;
}

BeamGeometry collinear_geometry(const std::array<double, 3>& wavelengths_nm) {
    BeamGeometry g;
    g.wavelengths_nm = wavelengths_nm;
    g.unit_wavevectors = {Vec3::UnitX(), Vec3::UnitX(), Vec3::UnitX()};
    g.validate();
    return g;
}

double doppler_shift(const BeamGeometry& geometry, int beam, const Vec3& velocity_m_per_s) {
    // (1/nm) * (m/s) = 1e9 Hz = 1e3 MHz
    return geometry.wavevector(beam).dot(velocity_m_per_s) * 1e3;
}

namespace presets {

namespace {

RydbergStateLabel rb(int n, Orbital l, double j) { return {"Rb", n, l, j, 0.5}; }

}  // namespace

FoersterChannel rb37p_channel() {
    FoersterChannel c;
    c.initial_pair = {rb(37, Orbital::P, 1.5), rb(37, Orbital::P, 1.5)};
    c.final_pair = {rb(37, Orbital::S, 0.5), rb(38, Orbital::S, 0.5)};
    c.dd_coeff_MHz_um3 = 150.0;
    apply_calibration(c, calibrate_channel(-103.136, rb37p_resonance_field_Vcm));
    return c;
}

FoersterChannel rb39p_channel() {
    FoersterChannel c;
    c.initial_pair = {rb(39, Orbital::P, 1.5), rb(39, Orbital::P, 1.5)};
    c.final_pair = {rb(39, Orbital::S, 0.5), rb(40, Orbital::S, 0.5)};
    c.dd_coeff_MHz_um3 = 185.0;
    apply_calibration(c, calibrate_channel(74.313, rb39p_first_order_field_Vcm, rb39p_rf_frequency_MHz));
    return c;
}

}  // namespace presets

}  // namespace rydsim::model
