#include "rydsim/gates.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "rydsim/error.hpp"
#include "rydsim/ode.hpp"

namespace rydsim::gates {

namespace {

bool is_power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

constexpr int level_count = 3;  // |0>, |1>, |r> per atom
constexpr int rydberg = 2;
constexpr std::array<int, 4> computational{0, 1, 3, 4};  // |00>, |01>, |10>, |11>

}  // namespace

GateMatrix::GateMatrix(CMatrix entries, double tolerance) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || !is_power_of_two(entries_.rows()))
        throw DimensionError("gate matrix must be square with dimension 2^k");
    if (unitarity_error() > tolerance) throw DomainError("gate matrix is not unitary within tolerance");
}

int GateMatrix::qubits() const {
    int q = 0;
    while ((1 << q) < dim()) ++q;
    return q;
}

double GateMatrix::unitarity_error() const {
    return (entries_.adjoint() * entries_ - CMatrix::Identity(dim(), dim())).cwiseAbs().maxCoeff();
}

GateMatrix identity(int qubits) {
    if (qubits < 0 || qubits > 12) throw DomainError("identity: qubit count out of range");
    return GateMatrix(CMatrix::Identity(1 << qubits, 1 << qubits));
}

GateMatrix hadamard() {
    const double s = 1.0 / std::sqrt(2.0);
    CMatrix h(2, 2);
    h << s, s, s, -s;
    return GateMatrix(h);
}

GateMatrix phase_gate(double phi) {
    CMatrix u = CMatrix::Identity(2, 2);
    u(1, 1) = std::polar(1.0, phi);
    return GateMatrix(u);
}

GateMatrix cnot_ideal() {
    CMatrix u = CMatrix::Zero(4, 4);
    u(0, 0) = u(1, 1) = u(2, 3) = u(3, 2) = 1.0;
    return GateMatrix(u);
}

GateMatrix cz_ideal() {
    CMatrix u = CMatrix::Identity(4, 4);
    u(3, 3) = -1.0;
    return GateMatrix(u);
}

CVector apply(const GateMatrix& gate, const CVector& state) {
    if (state.size() != gate.dim()) throw DimensionError("apply: state dimension does not match the gate");
    return gate.matrix() * state;
}

GateMatrix compose(std::span<const GateMatrix> gates) {
    if (gates.empty()) throw DimensionError("compose: no gates given");
    CMatrix total = gates.front().matrix();
    for (std::size_t i = 1; i < gates.size(); ++i) {
        if (gates[i].dim() != total.rows()) throw DimensionError("compose: gate dimensions differ");
        total = gates[i].matrix() * total;
    }
    return nearest_unitary(total);
}

GateMatrix compose(std::initializer_list<GateMatrix> gates) {
    return compose(std::span<const GateMatrix>(gates.begin(), gates.size()));
}

GateMatrix kron(const GateMatrix& a, const GateMatrix& b) {
    CMatrix out(a.dim() * b.dim(), a.dim() * b.dim());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) out.block(i * b.dim(), j * b.dim(), b.dim(), b.dim()) = a(i, j) * b.matrix();
    return GateMatrix(out);
}

GateMatrix nearest_unitary(const CMatrix& m) {
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return GateMatrix(svd.matrixU() * svd.matrixV().adjoint());
}

double process_fidelity(const CMatrix& ideal, const CMatrix& actual) {
    if (ideal.rows() != actual.rows() || ideal.cols() != actual.cols())
        throw DimensionError("process_fidelity: dimensions differ");
    const double d = static_cast<double>(ideal.rows());
    return std::norm((ideal.adjoint() * actual).trace()) / (d * d);
}

CMatrix local_phase_frame(const CMatrix& m) {
    if (m.rows() != 4 || m.cols() != 4) throw DimensionError("local_phase_frame: two-qubit gate expected");
    const double p00 = std::arg(m(0, 0)), p01 = std::arg(m(1, 1)), p10 = std::arg(m(2, 2));
    const Eigen::Vector4cd frame(std::polar(1.0, -p00), std::polar(1.0, -p01), std::polar(1.0, -p10),
                                 std::polar(1.0, -(p10 + p01 - p00)));
    return frame.asDiagonal() * m;
}

double bell_fidelity(const CVector& state) {
    if (state.size() != 4) throw DimensionError("bell_fidelity: two-qubit state expected");
    const double s = 1.0 / std::sqrt(2.0);
    return std::norm(s * (state[1] + state[2]));
}

void PulseSegment::validate() const {
    if (!std::isfinite(area_pi) || !std::isfinite(phase)) throw DomainError("pulse segment: area and phase must be finite");
    if (!(duration_us >= 0.0)) throw DomainError("pulse segment: duration must be >= 0");
    if (kind == SegmentKind::chirp) {
        if (!(duration_us > 0.0)) throw DomainError("pulse segment: chirp needs a positive duration");
        if (transition == Transition::rydberg_auxiliary) throw DomainError("pulse segment: chirps drive ground-Rydberg transitions");
        if (!std::isfinite(sweep_start_MHz) || !std::isfinite(sweep_end_MHz))
            throw DomainError("pulse segment: sweep must be finite");
    }
    if (kind == SegmentKind::microwave && transition != Transition::rydberg_auxiliary)
        throw DomainError("pulse segment: microwave segments drive the Rydberg-auxiliary transition");
}

void PulseSequence::validate() const {
    if (segments.empty()) throw DomainError("pulse sequence: no segments");
    for (const auto& s : segments) s.validate();
}

PulseSequence default_cz_sequence() {
    PulseSegment control_up{};
    control_up.atom = Register::control;
    control_up.transition = Transition::one_rydberg;
    control_up.area_pi = 1.0;
    PulseSegment target = control_up;
    target.atom = Register::target;
    target.area_pi = 2.0;
    return {{control_up, target, control_up}};
}

void BlockadePair::validate() const {
    if (!(rabi_MHz > 0.0)) throw DomainError("blockade pair: rabi must be > 0");
    if (!(blockade_shift_MHz >= 0.0)) throw DomainError("blockade pair: blockade shift must be >= 0");
}

namespace {

CMatrix atom_coupling(const PulseSegment& seg, double rabi) {
    const int lower = seg.transition == Transition::zero_rydberg ? 0 : 1;
    CMatrix h = CMatrix::Zero(level_count, level_count);
    h(rydberg, lower) = 0.5 * rabi * std::polar(1.0, seg.phase);
    h(lower, rydberg) = std::conj(h(rydberg, lower));
    return h;
}

CMatrix embed(const CMatrix& local, Register atom) {
    const CMatrix id = CMatrix::Identity(level_count, level_count);
    CMatrix out = CMatrix::Zero(level_count * level_count, level_count * level_count);
    auto kron3 = [](const CMatrix& a, const CMatrix& b) {
        CMatrix k(9, 9);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) k.block(3 * i, 3 * j, 3, 3) = a(i, j) * b;
        return k;
    };
    if (atom != Register::target) out += kron3(local, id);
    if (atom != Register::control) out += kron3(id, local);
    return out;
}

}  // namespace

CMatrix pair_propagator(const BlockadePair& pair, const PulseSequence& sequence) {
    pair.validate();
    sequence.validate();
    const bool perfect = std::isinf(pair.blockade_shift_MHz);
    const int dim = perfect ? 8 : 9;  // |rr> is the last product state
    CMatrix total = CMatrix::Identity(dim, dim);
    for (const auto& seg : sequence.segments) {
        if (seg.kind != SegmentKind::resonant || seg.transition == Transition::rydberg_auxiliary)
            throw DomainError("blockade pair: only resonant ground-Rydberg segments are supported");
        const CMatrix coupling = embed(atom_coupling(seg, pair.rabi_MHz), seg.atom).topLeftCorner(dim, dim);
        CMatrix shift = CMatrix::Zero(dim, dim);
        if (!perfect) shift(8, 8) = pair.blockade_shift_MHz;
        // rabi_MHz is the peak value; a sine-squared pulse needs twice the flat duration for the same area
        const bool flat = seg.envelope == blockade::Envelope::flat;
        const double flat_duration = seg.area_pi / (2.0 * pair.rabi_MHz);
        const double duration = seg.duration_us > 0.0 ? seg.duration_us : (flat ? 1.0 : 2.0) * flat_duration;
        if (flat || perfect || pair.blockade_shift_MHz == 0.0) {
            // without a shift H(t) = f(t) H0 commutes with itself and only the area matters
            const double area_time = flat ? duration : 0.5 * duration;
            total = HermitianPropagator(CMatrix(coupling + shift)).unitary(area_time) * total;
            continue;
        }
        auto rhs = [&](double t, const CVector& y) -> CVector {
            const double s = std::sin(std::numbers::pi * t / duration);
            const Eigen::Map<const CMatrix> u(y.data(), dim, dim);
            CMatrix d = cplx(0.0, -two_pi) * (s * s * (coupling * u) + shift * u);
            return Eigen::Map<const CVector>(d.data(), d.size());
        };
        ode::AdaptiveOptions opt{ode::Tolerance{1e-11, 1e-13}};
        opt.max_step = 0.1 / std::max({pair.rabi_MHz, perfect ? 0.0 : pair.blockade_shift_MHz, 1.0 / duration});
        const CVector y0 = Eigen::Map<const CVector>(total.data(), total.size());
        const CVector y1 = ode::integrate_adaptive(rhs, y0, 0.0, duration, opt);
        total = Eigen::Map<const CMatrix>(y1.data(), dim, dim);
    }
    return total;
}

namespace {

CMatrix computational_block(const CMatrix& full) {
    CMatrix block(4, 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) block(r, c) = full(computational[r], computational[c]);
    return block;
}

}  // namespace

CzSimulation simulate_blockade_cz(const BlockadePair& pair, const PulseSequence& sequence) {
    const CMatrix full = pair_propagator(pair, sequence);
    CzSimulation out{computational_block(full), {}, identity(2), 0.0, 0.0, false};
    out.frame_corrected = local_phase_frame(out.block);
    out.effective = nearest_unitary(out.frame_corrected);
    out.fidelity = process_fidelity(cz_ideal().matrix(), out.frame_corrected);
    out.leakage = std::max(0.0, 1.0 - out.block.squaredNorm() / 4.0);
    out.leakage_flagged = out.leakage > leakage_flag_threshold;
    return out;
}

Table CnotSimulation::truth_table_csv() const {
    Table t{{"input", "output00", "output01", "output10", "output11"}, {}};
    constexpr std::array<double, 4> labels{0, 1, 10, 11};
    for (int in = 0; in < 4; ++in)
        t.add_row({labels[in], truth_table[in][0], truth_table[in][1], truth_table[in][2], truth_table[in][3]});
    return t;
}

CnotSimulation simulate_blockade_cnot(const BlockadePair& pair, const PulseSequence& sequence) {
    const CzSimulation cz = simulate_blockade_cz(pair, sequence);
    const CMatrix ih = kron(identity(1), hadamard()).matrix();
    CnotSimulation out;
    out.matrix = ih * cz.frame_corrected * ih;
    for (int in = 0; in < 4; ++in)
        for (int o = 0; o < 4; ++o) out.truth_table[in][o] = std::norm(out.matrix(o, in));
    out.fidelity = process_fidelity(cnot_ideal().matrix(), out.matrix);
    out.leakage = cz.leakage;
    return out;
}

CVector blockade_bell_state(const BlockadePair& pair) {
    PulseSegment excite{};
    excite.atom = Register::both;
    excite.transition = Transition::one_rydberg;
    // collective coupling sqrt(2) * rabi
    excite.duration_us = 1.0 / (2.0 * std::sqrt(2.0) * pair.rabi_MHz);
    excite.envelope = blockade::Envelope::flat;
    PulseSegment map_down{};
    map_down.atom = Register::both;
    map_down.transition = Transition::zero_rydberg;
    map_down.area_pi = 1.0;
    map_down.envelope = blockade::Envelope::flat;
    const CMatrix full = pair_propagator(pair, {{excite, map_down}});
    CVector out(4);
    for (int r = 0; r < 4; ++r) out[r] = full(computational[r], computational[3]);
    return out;
}

}  // namespace rydsim::gates
