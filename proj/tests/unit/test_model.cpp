#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "rydsim/error.hpp"
#include "rydsim/model.hpp"

using namespace rydsim;
using namespace rydsim::model;

TEST(StateLabel, ValidatesQuantumNumbers) {
    RydbergStateLabel p{"Rb", 37, Orbital::P, 1.5, 0.5};
    EXPECT_NO_THROW(p.validate());
    EXPECT_EQ(p.to_string(), "Rb 37P3/2 |mJ|=1/2");
    RydbergStateLabel bad_j{"Rb", 37, Orbital::P, 2.5, 0.5};
    EXPECT_THROW(bad_j.validate(), DomainError);
    RydbergStateLabel bad_l{"Rb", 2, Orbital::D, 2.5, 0.5};
    EXPECT_THROW(bad_l.validate(), DomainError);
    RydbergStateLabel bad_mj{"Rb", 37, Orbital::S, 0.5, 1.5};
    EXPECT_THROW(bad_mj.validate(), DomainError);
    EXPECT_EQ(orbital_from_letter('D'), Orbital::D);
    EXPECT_THROW(orbital_from_letter('X'), DomainError);
}

TEST(LaserField, RejectsNegativeRates) {
    LaserField f{780.0, 10.0, -1.0, 0.0};
    EXPECT_THROW(f.validate(), DomainError);
    f.rabi_MHz = 1.0;
    f.linewidth_MHz = -0.1;
    EXPECT_THROW(f.validate(), DomainError);
    f.linewidth_MHz = 0.0;
    EXPECT_NO_THROW(f.validate());
}

TEST(FoersterDefect, EvenAndQuadratic) {
    FoersterChannel c = presets::rb37p_channel();
    for (double e : {0.0, 0.3, 1.1, 1.79, 2.5}) EXPECT_NEAR(foerster_defect(c, e), foerster_defect(c, -e), 1e-12);
    const double d1 = foerster_defect(c, 1.0) - foerster_defect(c, 0.0);
    const double d2 = foerster_defect(c, 2.0) - foerster_defect(c, 0.0);
    EXPECT_NEAR(d2, 4.0 * d1, 1e-10);
}

TEST(FoersterDefect, CalibrationHitsResonance) {
    const auto coeffs = calibrate_channel(-103.136, 1.79);
    FoersterChannel c = presets::rb37p_channel();
    apply_calibration(c, coeffs);
    EXPECT_NEAR(foerster_defect(c, 1.79), 0.0, 1e-12);
    ASSERT_TRUE(c.resonance_field().has_value());
    EXPECT_NEAR(*c.resonance_field(), 1.79, 1e-12);
    EXPECT_THROW(calibrate_channel(-103.0, 0.0), CalibrationError);
}

TEST(FoersterDefect, ThirtyNinePCalibration) {
    const FoersterChannel c = presets::rb39p_channel();
    EXPECT_NEAR(foerster_defect(c, presets::rb39p_first_order_field_Vcm), presets::rb39p_rf_frequency_MHz, 1e-10);
    EXPECT_FALSE(c.resonance_field().has_value());
}

TEST(Interactions, PowerLaws) {
    FoersterChannel c = presets::rb37p_channel();
    c.dd_coeff_MHz_um3 = 1000.0;
    EXPECT_NEAR(dd_coupling(c, 10.0), 1.0, 1e-14);
    EXPECT_NEAR(vdw_shift(3.2e6, 10.0), 3.2, 1e-12);
    EXPECT_THROW(vdw_shift(1.0, 0.0), DomainError);
}

TEST(Interactions, BlockadeRadiusRoundTrip) {
    for (double rabi : {0.5, 1.2, 7.0})
        for (double n : {1.0, 7.0, 30.0}) {
            const double r = blockade_radius(3.2e6, rabi, n);
            EXPECT_NEAR(vdw_shift(3.2e6, r) / (rabi * std::sqrt(n)), 1.0, 1e-10);
        }
    EXPECT_NEAR(rabi_for_blockade_radius(3.2e6, 10.0, 7.0), 3.2 / std::sqrt(7.0), 1e-12);
}

TEST(BeamAngles, StarGeometryMatchesLawOfCosines) {
    const std::array<double, 3> wl{780.0, 1367.0, 743.0};
    const BeamAngles a = beam_angles(wl);
    EXPECT_NEAR(a.theta12, oracle::closure_angle(1 / 780.0, 1 / 1367.0, 1 / 743.0), 1e-12);
    EXPECT_NEAR(a.theta13, oracle::closure_angle(1 / 780.0, 1 / 743.0, 1 / 1367.0), 1e-9);
    EXPECT_NEAR(a.theta23, oracle::closure_angle(1 / 1367.0, 1 / 743.0, 1 / 780.0), 1e-9);
    EXPECT_LT(a.geometry.closure_residual(), 1e-12 * (1 / 743.0));
}

TEST(BeamAngles, EqualWavelengthsGiveOneTwenty) {
    const BeamAngles a = beam_angles({500.0, 500.0, 500.0});
    const double deg = 180.0 / std::numbers::pi;
    EXPECT_NEAR(a.theta12 * deg, 120.0, 1e-9);
    EXPECT_NEAR(a.theta13 * deg, 120.0, 1e-9);
    EXPECT_NEAR(a.theta23 * deg, 120.0, 1e-9);
}

TEST(BeamAngles, OpenTriangleIsRejected) {
    EXPECT_THROW(beam_angles({500.0, 10000.0, 10000.0}), ClosureError);
    EXPECT_THROW(beam_angles({100.0, 1000.0, 1000.0}), ClosureError);
}

TEST(BeamAngles, ClosureHoldsAcrossRandomTriangles) {
    for (int i = 0; i < 200; ++i) {
        const double a = 400.0 + 7.0 * i;
        const double b = 600.0 + 3.0 * ((i * 37) % 200);
        const double c = 500.0 + 5.0 * ((i * 53) % 150);
        try {
            const BeamAngles g = beam_angles({a, b, c});
            EXPECT_LT(g.geometry.closure_residual(), 1e-12 * std::max({1 / a, 1 / b, 1 / c}));
        } catch (const ClosureError&) {
            const double k1 = 1 / a, k2 = 1 / b, k3 = 1 / c;
            EXPECT_TRUE(k1 > k2 + k3 || k2 > k1 + k3 || k3 > k1 + k2);
        }
    }
}

TEST(Doppler, ShiftUnits) {
    const BeamGeometry g = collinear_geometry({780.0, 1367.0, 743.0});
    // 1 m/s along a 780 nm beam: 1/780e-9 Hz = 1.2821 MHz
    EXPECT_NEAR(doppler_shift(g, 0, Vec3(1.0, 0.0, 0.0)), 1e3 / 780.0, 1e-12);
    EXPECT_NEAR(doppler_shift(g, 0, Vec3(0.0, 1.0, 0.0)), 0.0, 1e-15);
}

TEST(Detection, EfficiencyRange) {
    EXPECT_THROW(DetectionModel{1.2}.validate(), DomainError);
    EXPECT_NO_THROW(DetectionModel{0.65}.validate());
}
