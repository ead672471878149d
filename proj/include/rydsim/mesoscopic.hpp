#pragma once

#include <vector>

#include "rydsim/gates.hpp"
#include "rydsim/ode.hpp"

namespace rydsim::gates {

// Per-register collective levels: |0>, |1>, |r> and an auxiliary level.
enum class CollectiveLevel { zero = 0, one = 1, rydberg = 2, auxiliary = 3 };

enum class AuxiliaryKind {
    microwave_rydberg,  // second Rydberg level, instantaneous ideal microwave rotations
    optical_ground,     // ground sublevel driven optically at the single-atom Rabi frequency
};

struct MesoscopicRegister {
    int atom_count = 1;
    double rabi_MHz = 1.0;  // single-atom; |0> <-> |r> is enhanced by sqrt(N)

    void validate() const;
    double coupling(Transition transition) const;
};

struct MesoscopicGate {
    CMatrix logical;  // propagator restricted to the logical subspace
    double leakage = 0.0;
    bool leakage_flagged = false;

    GateMatrix unitary() const;
    double logical_phase() const;  // arg U00 - arg U_last (single register)
};

inline constexpr double mesoscopic_leakage_threshold = 1e-3;

struct MesoscopicOptions {
    AuxiliaryKind auxiliary = AuxiliaryKind::microwave_rydberg;
    ode::AdaptiveOptions ode{ode::Tolerance{1e-11, 1e-13}, 0.0, 0.0, 50'000'000};
};

MesoscopicGate mesoscopic_unitary(const PulseSequence& sequence, const MesoscopicRegister& reg,
                                  const MesoscopicOptions& options = {});

// Two blockaded registers; logical order |control target>.
MesoscopicGate mesoscopic_two_register(const PulseSequence& sequence, const MesoscopicRegister& control,
                                       const MesoscopicRegister& target, const MesoscopicOptions& options = {});

struct AdiabaticTransfer {
    double sweep_MHz = 20.0;  // detuning swept from -sweep to +sweep
    double duration_us = 60.0;
};

// Transfer |0> -> |r>, phase payload on |r>, no return.
PulseSequence phase_rotation_forward(double phi, AuxiliaryKind auxiliary, const AdiabaticTransfer& transfer = {});
// Control and target transfers, 2 pi microwave payload on the target.
PulseSequence cz_forward(const AdiabaticTransfer& transfer = {});

// Appends the transfer segments in reverse order with unchanged sweep direction
// and the laser phase advanced by pi: the return follows the opposite adiabatic
// branch, so the dynamic phase cancels and the passage sign is undone.
PulseSequence phase_compensated(const PulseSequence& forward);
// Appends the time-reversed transfers (phase advanced by pi); the dynamic phase doubles instead.
PulseSequence naive_return(const PulseSequence& forward);

}  // namespace rydsim::gates
