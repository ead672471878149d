#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>

#include "rydsim/linalg.hpp"

// Units: frequencies are ordinary frequencies in MHz, times in us, lengths in
// um unless the name says otherwise, fields in V/cm. Phases accrue as 2*pi*f*t.
namespace rydsim::model {

enum class Orbital { S = 0, P = 1, D = 2, F = 3 };

char orbital_letter(Orbital l);
Orbital orbital_from_letter(char letter);

struct RydbergStateLabel {
    std::string species = "Rb";
    int n = 1;
    Orbital l = Orbital::S;
    double j = 0.5;
    double mj_abs = 0.5;

    void validate() const;
    std::string to_string() const;  // e.g. "Rb 37P3/2 |mJ|=1/2"
};

struct LaserField {
    double wavelength_nm = 780.0;
    double detuning_MHz = 0.0;
    double rabi_MHz = 0.0;
    double linewidth_MHz = 0.0;

    void validate() const;
};

struct RfField {
    double frequency_MHz = 15.0;
    double defect_modulation_MHz = 0.0;       // peak swing of the defect
    std::optional<double> field_amplitude_Vcm;  // raw amplitude, informational

    void validate() const;
};

struct StarkCoefficients {
    double defect_zero_field_MHz = 0.0;
    double stark_coeff_MHz_per_V2cm2 = 0.0;
};

struct FoersterChannel {
    std::pair<RydbergStateLabel, RydbergStateLabel> initial_pair;
    std::pair<RydbergStateLabel, RydbergStateLabel> final_pair;
    double defect_zero_field_MHz = 0.0;
    double stark_coeff_MHz_per_V2cm2 = 0.0;
    double dd_coeff_MHz_um3 = 1.0;

    void validate() const;
    // Field at which the defect vanishes, if any.
    std::optional<double> resonance_field() const;
};

struct BeamGeometry {
    std::array<double, 3> wavelengths_nm{};
    std::array<Vec3, 3> unit_wavevectors{};

    void validate() const;
    Vec3 wavevector(int beam) const;  // 1/nm
    Vec3 total_wavevector() const;
    double closure_residual() const;  // |k1 + k2 + k3| in 1/nm
};

struct BeamAngles {
    double theta12 = 0.0;
    double theta23 = 0.0;
    double theta13 = 0.0;
    BeamGeometry geometry;
};

struct DetectionModel {
    double efficiency = 1.0;

    void validate() const;
};

double foerster_defect(const FoersterChannel& channel, double field_Vcm);
StarkCoefficients calibrate_channel(double defect_zero_field_MHz, double resonance_field_Vcm,
                                    double defect_at_field_MHz = 0.0);
void apply_calibration(FoersterChannel& channel, const StarkCoefficients& coeffs);

double dd_coupling(const FoersterChannel& channel, double distance_um);
double vdw_shift(double c6_MHz_um6, double distance_um);
double blockade_radius(double c6_MHz_um6, double rabi_MHz, double atom_count);
// Single-atom Rabi frequency for which the blockade radius equals radius_um.
double rabi_for_blockade_radius(double c6_MHz_um6, double radius_um, double atom_count);

BeamAngles beam_angles(const std::array<double, 3>& wavelengths_nm);
BeamGeometry collinear_geometry(const std::array<double, 3>& wavelengths_nm);
// Frequency shift k_i . v seen by a moving atom, in MHz for v in m/s.
double doppler_shift(const BeamGeometry& geometry, int beam, const Vec3& velocity_m_per_s);

namespace presets {

// Zero-field defects from literature Rb quantum defects; dipole strengths are
// orientation-averaged estimates.
FoersterChannel rb37p_channel();
FoersterChannel rb39p_channel();

inline constexpr double rb37p_resonance_field_Vcm = 1.79;
inline constexpr double rb39p_first_order_field_Vcm = 0.66;
inline constexpr double rb39p_rf_frequency_MHz = 95.0;

}  // namespace presets

}  // namespace rydsim::model
