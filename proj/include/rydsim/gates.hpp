#pragma once

#include <array>
#include <initializer_list>
#include <span>
#include <vector>

#include "rydsim/blockade.hpp"
#include "rydsim/linalg.hpp"
#include "rydsim/table.hpp"

namespace rydsim::gates {

// Square unitary of dimension 2^k, checked on construction.
class GateMatrix {
public:
    explicit GateMatrix(CMatrix entries, double tolerance = 1e-10);

    int dim() const { return static_cast<int>(entries_.rows()); }
    int qubits() const;
    const CMatrix& matrix() const { return entries_; }
    cplx operator()(int row, int col) const { return entries_(row, col); }

    double unitarity_error() const;

private:
    CMatrix entries_;
};

GateMatrix identity(int qubits);
GateMatrix hadamard();
GateMatrix phase_gate(double phi);
GateMatrix cnot_ideal();
GateMatrix cz_ideal();

CVector apply(const GateMatrix& gate, const CVector& state);
// compose({a, b, c}) applies a first, then b, then c.
GateMatrix compose(std::initializer_list<GateMatrix> gates);
GateMatrix compose(std::span<const GateMatrix> gates);
GateMatrix kron(const GateMatrix& a, const GateMatrix& b);

// Unitary factor of the polar decomposition of a square matrix.
GateMatrix nearest_unitary(const CMatrix& m);

// |Tr(ideal^dagger actual)|^2 / d^2
double process_fidelity(const CMatrix& ideal, const CMatrix& actual);

// Removes single-qubit Z phases fixed by the diagonal of a two-qubit gate.
CMatrix local_phase_frame(const CMatrix& two_qubit);

// Overlap with (|10> + |01>) / sqrt(2).
double bell_fidelity(const CVector& state);

enum class Register { control, target, both };
enum class Transition { zero_rydberg, one_rydberg, rydberg_auxiliary };
enum class SegmentKind { resonant, chirp, microwave };
enum class SegmentRole { payload, transfer };

struct PulseSegment {
    SegmentKind kind = SegmentKind::resonant;
    Register atom = Register::control;
    Transition transition = Transition::one_rydberg;
    double area_pi = 1.0;         // resonant and microwave segments
    double phase = 0.0;           // radians
    double duration_us = 0.0;     // resonant: 0 derives it from the area; chirp: sweep time
    double sweep_start_MHz = 0.0;  // chirp only
    double sweep_end_MHz = 0.0;
    blockade::Envelope envelope = blockade::Envelope::sine_squared;
    SegmentRole role = SegmentRole::payload;

    void validate() const;
};

struct PulseSequence {
    std::vector<PulseSegment> segments;

    void validate() const;
};

// pi(control 1->r), 2pi(target 1->r), pi(control r->1)
PulseSequence default_cz_sequence();

struct BlockadePair {
    double rabi_MHz = 1.0;  // peak value of shaped pulses
    double blockade_shift_MHz = 0.0;  // infinity removes |rr>

    void validate() const;
};

struct CzSimulation {
    CMatrix block;            // computational block of the propagator, |control target>
    CMatrix frame_corrected;  // block after the local Z frame
    GateMatrix effective;     // nearest unitary of the corrected block
    double fidelity = 0.0;
    double leakage = 0.0;
    bool leakage_flagged = false;
};

inline constexpr double leakage_flag_threshold = 0.1;

CMatrix pair_propagator(const BlockadePair& pair, const PulseSequence& sequence);
CzSimulation simulate_blockade_cz(const BlockadePair& pair, const PulseSequence& sequence = default_cz_sequence());

struct CnotSimulation {
    CMatrix matrix;                              // (I x H) CZ (I x H) on the frame-corrected CZ
    std::array<std::array<double, 4>, 4> truth_table{};  // [input][output] probabilities
    double fidelity = 0.0;
    double leakage = 0.0;

    Table truth_table_csv() const;  // input,output00,output01,output10,output11
};

CnotSimulation simulate_blockade_cnot(const BlockadePair& pair, const PulseSequence& sequence = default_cz_sequence());

// Collective pi pulse 1 -> r on both atoms from |11>, then pi pulses r -> 0;
// returns the computational-basis state.
CVector blockade_bell_state(const BlockadePair& pair);

}  // namespace rydsim::gates
