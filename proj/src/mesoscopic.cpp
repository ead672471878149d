#include "rydsim/mesoscopic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rydsim/error.hpp"

namespace rydsim::gates {

namespace {

constexpr int levels = 4;

int level(CollectiveLevel l) { return static_cast<int>(l); }

std::pair<int, int> transition_levels(Transition t) {
    switch (t) {
        case Transition::zero_rydberg: return {level(CollectiveLevel::zero), level(CollectiveLevel::rydberg)};
        case Transition::one_rydberg: return {level(CollectiveLevel::one), level(CollectiveLevel::rydberg)};
        case Transition::rydberg_auxiliary: return {level(CollectiveLevel::rydberg), level(CollectiveLevel::auxiliary)};
    }
    return {0, 0};
}

// (c/2)(e^{i phi}|upper><lower| + h.c.)
CMatrix local_coupling(Transition t, double coupling, double phase) {
    const auto [lower, upper] = transition_levels(t);
    CMatrix h = CMatrix::Zero(levels, levels);
    h(upper, lower) = 0.5 * coupling * std::polar(1.0, phase);
    h(lower, upper) = std::conj(h(upper, lower));
    return h;
}

CMatrix local_projector(int lvl) {
    CMatrix p = CMatrix::Zero(levels, levels);
    p(lvl, lvl) = 1.0;
    return p;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Product space of one or two registers with the doubly-Rydberg states removed.
class CollectiveSystem {
public:
    CollectiveSystem(std::vector<MesoscopicRegister> regs, AuxiliaryKind auxiliary)
        : regs_(std::move(regs)), auxiliary_(auxiliary) {
        for (const auto& r : regs_) r.validate();
        const int full = regs_.size() == 1 ? levels : levels * levels;
        for (int s = 0; s < full; ++s)
            if (regs_.size() == 1 || !(is_rydberg(s / levels) && is_rydberg(s % levels))) allowed_.push_back(s);
        for (int c = 0; c < 2; ++c) {
            if (regs_.size() == 1) {
                logical_.push_back(position(c));
                continue;
            }
            for (int t = 0; t < 2; ++t) logical_.push_back(position(c * levels + t));
        }
    }

    Eigen::Index dimension() const { return static_cast<Eigen::Index>(allowed_.size()); }
    const std::vector<int>& logical() const { return logical_; }

    // Local operator on the selected registers, restricted to allowed states.
    CMatrix embed(const CMatrix& control_op, const CMatrix& target_op, Register atom) const {
        CMatrix full;
        if (regs_.size() == 1) {
            if (atom == Register::target) throw DomainError("mesoscopic: single register has no target");
            full = control_op;
        } else {
            const CMatrix id = CMatrix::Identity(levels, levels);
            full = CMatrix::Zero(levels * levels, levels * levels);
            if (atom != Register::target) full += kron(control_op, id);
            if (atom != Register::control) full += kron(id, target_op);
        }
        return restrict(full);
    }

    // Unitary product of per-register local unitaries, restricted.
    CMatrix embed_unitary(const CMatrix& local, Register atom) const {
        if (regs_.size() == 1) {
            if (atom == Register::target) throw DomainError("mesoscopic: single register has no target");
            return restrict(local);
        }
        const CMatrix id = CMatrix::Identity(levels, levels);
        const CMatrix c = atom != Register::target ? local : id;
        const CMatrix t = atom != Register::control ? local : id;
        return restrict(kron(c, t));
    }

    const MesoscopicRegister& reg(Register atom) const {
        return regs_[atom == Register::target && regs_.size() > 1 ? 1 : 0];
    }

    AuxiliaryKind auxiliary() const { return auxiliary_; }

private:
    bool is_rydberg(int lvl) const {
        return lvl == level(CollectiveLevel::rydberg) ||
               (lvl == level(CollectiveLevel::auxiliary) && auxiliary_ == AuxiliaryKind::microwave_rydberg);
    }

    int position(int full_index) const {
        return static_cast<int>(std::find(allowed_.begin(), allowed_.end(), full_index) - allowed_.begin());
    }

    CMatrix restrict(const CMatrix& full) const {
        CMatrix out(dimension(), dimension());
        for (Eigen::Index r = 0; r < dimension(); ++r)
            for (Eigen::Index c = 0; c < dimension(); ++c) out(r, c) = full(allowed_[r], allowed_[c]);
        return out;
    }

    std::vector<MesoscopicRegister> regs_;
    AuxiliaryKind auxiliary_;
    std::vector<int> allowed_;
    std::vector<int> logical_;
};

double chirp_envelope(const PulseSegment& seg, double t) {
    if (seg.envelope == blockade::Envelope::flat) return 1.0;
    const double s = std::sin(std::numbers::pi * t / seg.duration_us);
    return s * s;
}

CMatrix microwave_rotation(const PulseSegment& seg) {
    const double half = 0.5 * std::numbers::pi * seg.area_pi;
    const auto [lower, upper] = transition_levels(seg.transition);
    CMatrix u = CMatrix::Identity(levels, levels);
    u(lower, lower) = u(upper, upper) = std::cos(half);
    u(upper, lower) = cplx(0.0, -1.0) * std::polar(1.0, seg.phase) * std::sin(half);
    u(lower, upper) = cplx(0.0, -1.0) * std::polar(1.0, -seg.phase) * std::sin(half);
    return u;
}

CMatrix run_segment(const CollectiveSystem& sys, const PulseSegment& seg, const CMatrix& psi,
                    const MesoscopicOptions& options) {
    seg.validate();
    switch (seg.kind) {
        case SegmentKind::microwave: {
            if (sys.auxiliary() != AuxiliaryKind::microwave_rydberg)
                throw DomainError("mesoscopic: microwave segment needs a Rydberg auxiliary level");
            return sys.embed_unitary(microwave_rotation(seg), seg.atom) * psi;
        }
        case SegmentKind::resonant: {
            if (seg.transition == Transition::rydberg_auxiliary && sys.auxiliary() != AuxiliaryKind::optical_ground)
                throw DomainError("mesoscopic: optical auxiliary pulse needs a ground auxiliary level");
            const double cc = sys.reg(Register::control).coupling(seg.transition);
            const double ct = sys.reg(Register::target).coupling(seg.transition);
            const CMatrix h = sys.embed(local_coupling(seg.transition, cc, seg.phase),
                                        local_coupling(seg.transition, ct, seg.phase), seg.atom);
            const double reference = seg.atom == Register::target ? ct : cc;
            // H(t) = f(t) H0 commutes with itself, so only the pulse area matters
            const double mean_envelope = seg.envelope == blockade::Envelope::flat ? 1.0 : 0.5;
            const double area_time = seg.duration_us > 0.0 ? mean_envelope * seg.duration_us : seg.area_pi / (2.0 * reference);
            return HermitianPropagator(h).unitary(area_time) * psi;
        }
        case SegmentKind::chirp: {
            const double cc = sys.reg(Register::control).coupling(seg.transition);
            const double ct = sys.reg(Register::target).coupling(seg.transition);
            const int upper = transition_levels(seg.transition).second;
            const CMatrix hc = sys.embed(local_coupling(seg.transition, cc, seg.phase),
                                         local_coupling(seg.transition, ct, seg.phase), seg.atom);
            const CMatrix hd = -sys.embed(local_projector(upper), local_projector(upper), seg.atom);
            const Eigen::Index rows = psi.rows(), cols = psi.cols();
            auto rhs = [&](double t, const CVector& y) -> CVector {
                const double delta = seg.sweep_start_MHz + (seg.sweep_end_MHz - seg.sweep_start_MHz) * t / seg.duration_us;
                const Eigen::Map<const CMatrix> state(y.data(), rows, cols);
                CMatrix d = cplx(0.0, -two_pi) * (chirp_envelope(seg, t) * (hc * state) + delta * (hd * state));
                return Eigen::Map<const CVector>(d.data(), d.size());
            };
            ode::AdaptiveOptions opt = options.ode;
            if (opt.max_step == 0.0) {
                const double fastest =
                    std::max({std::abs(seg.sweep_start_MHz), std::abs(seg.sweep_end_MHz), std::max(cc, ct), 1e-3});
                opt.max_step = 0.1 / fastest;
            }
            const CVector y0 = Eigen::Map<const CVector>(psi.data(), psi.size());
            const CVector y1 = ode::integrate_adaptive(rhs, y0, 0.0, seg.duration_us, opt);
            return Eigen::Map<const CMatrix>(y1.data(), rows, cols);
        }
    }
    return psi;
}

MesoscopicGate simulate(const CollectiveSystem& sys, const PulseSequence& sequence, const MesoscopicOptions& options) {
    sequence.validate();
    const auto& logical = sys.logical();
    const auto d = static_cast<Eigen::Index>(logical.size());
    CMatrix psi = CMatrix::Zero(sys.dimension(), d);
    for (Eigen::Index k = 0; k < d; ++k) psi(logical[k], k) = 1.0;
    for (const auto& seg : sequence.segments) psi = run_segment(sys, seg, psi, options);

    MesoscopicGate gate;
    gate.logical.resize(d, d);
    for (Eigen::Index r = 0; r < d; ++r) gate.logical.row(r) = psi.row(logical[r]);
    gate.leakage = std::max(0.0, 1.0 - gate.logical.squaredNorm() / static_cast<double>(d));
    gate.leakage_flagged = gate.leakage > mesoscopic_leakage_threshold;
    return gate;
}

}  // namespace

void MesoscopicRegister::validate() const {
    if (atom_count < 1) throw DomainError("mesoscopic register: atom count must be >= 1");
    if (!(rabi_MHz > 0.0)) throw DomainError("mesoscopic register: rabi must be > 0");
}

double MesoscopicRegister::coupling(Transition transition) const {
    return transition == Transition::zero_rydberg ? rabi_MHz * std::sqrt(static_cast<double>(atom_count)) : rabi_MHz;
}

GateMatrix MesoscopicGate::unitary() const { return nearest_unitary(logical); }

double MesoscopicGate::logical_phase() const {
    const Eigen::Index last = logical.rows() - 1;
    return std::arg(logical(0, 0) * std::conj(logical(last, last)));
}

MesoscopicGate mesoscopic_unitary(const PulseSequence& sequence, const MesoscopicRegister& reg,
                                  const MesoscopicOptions& options) {
    return simulate(CollectiveSystem({reg}, options.auxiliary), sequence, options);
}

MesoscopicGate mesoscopic_two_register(const PulseSequence& sequence, const MesoscopicRegister& control,
                                       const MesoscopicRegister& target, const MesoscopicOptions& options) {
    return simulate(CollectiveSystem({control, target}, options.auxiliary), sequence, options);
}

namespace {

PulseSegment transfer_chirp(Register atom, const AdiabaticTransfer& transfer) {
    PulseSegment s{};
    s.kind = SegmentKind::chirp;
    s.atom = atom;
    s.transition = Transition::zero_rydberg;
    s.duration_us = transfer.duration_us;
    s.sweep_start_MHz = -transfer.sweep_MHz;
    s.sweep_end_MHz = transfer.sweep_MHz;
    s.envelope = blockade::Envelope::sine_squared;
    s.role = SegmentRole::transfer;
    return s;
}

}  // namespace

PulseSequence phase_rotation_forward(double phi, AuxiliaryKind auxiliary, const AdiabaticTransfer& transfer) {
    PulseSequence seq;
    seq.segments.push_back(transfer_chirp(Register::control, transfer));
    // Two pi pulses with phases a, b multiply |r> by -exp(i(a - b)); a - b = pi - phi gives exp(-i phi).
    PulseSegment pulse{};
    pulse.kind = auxiliary == AuxiliaryKind::microwave_rydberg ? SegmentKind::microwave : SegmentKind::resonant;
    pulse.atom = Register::control;
    pulse.transition = Transition::rydberg_auxiliary;
    pulse.area_pi = 1.0;
    pulse.phase = 0.0;
    seq.segments.push_back(pulse);
    pulse.phase = phi - std::numbers::pi;
    seq.segments.push_back(pulse);
    return seq;
}

PulseSequence cz_forward(const AdiabaticTransfer& transfer) {
    PulseSequence seq;
    seq.segments.push_back(transfer_chirp(Register::control, transfer));
    seq.segments.push_back(transfer_chirp(Register::target, transfer));
    PulseSegment loop{};
    loop.kind = SegmentKind::microwave;
    loop.atom = Register::target;
    loop.transition = Transition::rydberg_auxiliary;
    loop.area_pi = 2.0;
    seq.segments.push_back(loop);
    return seq;
}

PulseSequence phase_compensated(const PulseSequence& forward) {
    PulseSequence out = forward;
    for (auto it = forward.segments.rbegin(); it != forward.segments.rend(); ++it) {
        if (it->role != SegmentRole::transfer) continue;
        PulseSegment back = *it;
        back.phase += std::numbers::pi;
        out.segments.push_back(back);
    }
    return out;
}

PulseSequence naive_return(const PulseSequence& forward) {
    PulseSequence out = forward;
    for (auto it = forward.segments.rbegin(); it != forward.segments.rend(); ++it) {
        if (it->role != SegmentRole::transfer) continue;
        PulseSegment back = *it;
        back.phase += std::numbers::pi;
        std::swap(back.sweep_start_MHz, back.sweep_end_MHz);
        out.segments.push_back(back);
    }
    return out;
}

}  // namespace rydsim::gates
