#include "qmarl/statevector.hpp"

#include <cmath>
#include <stdexcept>

namespace qmarl::qsim {

Statevector::Statevector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw std::invalid_argument("Statevector: n_qubits must be in [1, " +
                                    std::to_string(kMaxQubits) + "], got " +
                                    std::to_string(n_qubits));
    }
    amps_.assign(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
    amps_[0] = cplx{1.0, 0.0};
}

double Statevector::norm_sq() const {
    double s = 0.0;
    for (const cplx& a : amps_) s += std::norm(a);
    return s;
}

void Statevector::check_qubit(int qubit) const {
    if (qubit < 0 || qubit >= n_qubits_) {
        throw std::out_of_range("qubit index " + std::to_string(qubit) +
                                " out of range for " + std::to_string(n_qubits_) +
                                " qubits");
    }
}

void Statevector::apply_single_qubit(int qubit, cplx u00, cplx u01, cplx u10,
                                     cplx u11) {
    check_qubit(qubit);
    const std::size_t bit = std::size_t{1} << qubit;
    const std::size_t dim = amps_.size();
    for (std::size_t base = 0; base < dim; base += 2 * bit) {
        for (std::size_t low = 0; low < bit; ++low) {
            const std::size_t i0 = base | low;
            const std::size_t i1 = i0 | bit;
            const cplx a0 = amps_[i0];
            const cplx a1 = amps_[i1];
            amps_[i0] = u00 * a0 + u01 * a1;
            amps_[i1] = u10 * a0 + u11 * a1;
        }
    }
}

void Statevector::apply_h(int qubit) {
    const double s = 1.0 / std::sqrt(2.0);
    apply_single_qubit(qubit, {s, 0}, {s, 0}, {s, 0}, {-s, 0});
}

void Statevector::apply_x(int qubit) {
    apply_single_qubit(qubit, {0, 0}, {1, 0}, {1, 0}, {0, 0});
}

void Statevector::apply_z(int qubit) {
    check_qubit(qubit);
    const std::size_t bit = std::size_t{1} << qubit;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if (i & bit) amps_[i] = -amps_[i];
    }
}

void Statevector::apply_rx(int qubit, double angle) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    apply_single_qubit(qubit, {c, 0}, {0, -s}, {0, -s}, {c, 0});
}

void Statevector::apply_ry(int qubit, double angle) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    apply_single_qubit(qubit, {c, 0}, {-s, 0}, {s, 0}, {c, 0});
}

void Statevector::apply_rz(int qubit, double angle) {
    check_qubit(qubit);
    const cplx p0{std::cos(angle / 2.0), -std::sin(angle / 2.0)};
    const cplx p1{std::cos(angle / 2.0), std::sin(angle / 2.0)};
    const std::size_t bit = std::size_t{1} << qubit;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        amps_[i] *= (i & bit) ? p1 : p0;
    }
}

void Statevector::apply_cnot(int control, int target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) {
        throw std::invalid_argument("CNOT: control and target must differ");
    }
    const std::size_t cbit = std::size_t{1} << control;
    const std::size_t tbit = std::size_t{1} << target;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        // swap each pair once, from the target-clear side
        if ((i & cbit) && !(i & tbit)) {
            std::swap(amps_[i], amps_[i | tbit]);
        }
    }
}

Statevector apply_gate(const Statevector& state, const GateOp& op) {
    Statevector out = state;
    switch (op.kind) {
        case GateKind::H: out.apply_h(op.target); break;
        case GateKind::CNOT: out.apply_cnot(op.control, op.target); break;
        case GateKind::RX: out.apply_rx(op.target, op.angle); break;
        case GateKind::RY: out.apply_ry(op.target, op.angle); break;
        case GateKind::RZ: out.apply_rz(op.target, op.angle); break;
    }
    return out;
}

bool is_bell(Entanglement e) {
    return e == Entanglement::PhiPlus || e == Entanglement::PhiMinus ||
           e == Entanglement::PsiPlus || e == Entanglement::PsiMinus;
}

Statevector prepare_state(int n_qubits, Entanglement variant,
                          std::span<const int> designated) {
    Statevector state(n_qubits);
    for (int q : designated) {
        if (q < 0 || q >= n_qubits) {
            throw std::invalid_argument("prepare_state: designated qubit " +
                                        std::to_string(q) + " out of range");
        }
    }
    if (variant == Entanglement::Product) {
        return state;
    }
    if (is_bell(variant)) {
        if (designated.size() != 2) {
            throw std::invalid_argument(
                "prepare_state: Bell variants need exactly 2 designated qubits");
        }
    } else {  // GHZ
        if (designated.size() < 3) {
            throw std::invalid_argument(
                "prepare_state: GHZ needs at least 3 designated qubits");
        }
    }

    // H + CNOT ladder builds |Phi+> / |GHZ_N> on the designated qubits.
    state.apply_h(designated[0]);
    for (std::size_t i = 0; i + 1 < designated.size(); ++i) {
        state.apply_cnot(designated[i], designated[i + 1]);
    }

    // Remaining Bell states via corrections on the second qubit:
    // Phi- = Z1 Phi+, Psi+ = X1 Phi+, Psi- = Z1 X1 Phi+.
    if (variant == Entanglement::PsiPlus || variant == Entanglement::PsiMinus) {
        state.apply_x(designated[1]);
    }
    if (variant == Entanglement::PhiMinus || variant == Entanglement::PsiMinus) {
        state.apply_z(designated[1]);
    }
    return state;
}

std::vector<double> born_probabilities(const Statevector& state) {
    std::vector<double> probs(state.dim());
    const auto& amps = state.amplitudes();
    for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = std::norm(amps[i]);
    return probs;
}

std::vector<double> z_expectations(const Statevector& state) {
    std::vector<double> z(state.n_qubits(), 0.0);
    const auto& amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        if (p == 0.0) continue;
        for (int q = 0; q < state.n_qubits(); ++q) {
            z[q] += (i >> q) & 1 ? -p : p;
        }
    }
    return z;
}

std::size_t JointTable::flat_index(std::span<const int> outcomes) const {
    if (outcomes.size() != register_bits.size()) {
        throw std::invalid_argument("JointTable: outcome arity mismatch");
    }
    std::size_t idx = 0;
    std::size_t stride = 1;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const std::size_t card = std::size_t{1} << register_bits[i];
        if (outcomes[i] < 0 || static_cast<std::size_t>(outcomes[i]) >= card) {
            throw std::out_of_range("JointTable: outcome out of range");
        }
        idx += stride * static_cast<std::size_t>(outcomes[i]);
        stride *= card;
    }
    return idx;
}

double JointTable::prob(std::span<const int> outcomes) const {
    return probs[flat_index(outcomes)];
}

JointTable marginal_joint_distribution(const Statevector& state,
                                       std::span<const LocalRegister> registers) {
    std::vector<bool> seen(state.n_qubits(), false);
    for (const auto& reg : registers) {
        for (int q : reg.qubit_indices) {
            if (q < 0 || q >= state.n_qubits()) {
                throw std::out_of_range("marginal_joint_distribution: bad qubit index");
            }
            if (seen[q]) {
                throw std::invalid_argument(
                    "marginal_joint_distribution: registers overlap at qubit " +
                    std::to_string(q));
            }
            seen[q] = true;
        }
    }

    JointTable table;
    std::size_t total = 1;
    for (const auto& reg : registers) {
        table.register_bits.push_back(static_cast<int>(reg.qubit_indices.size()));
        total <<= reg.qubit_indices.size();
    }
    table.probs.assign(total, 0.0);

    const auto& amps = state.amplitudes();
    for (std::size_t basis = 0; basis < amps.size(); ++basis) {
        const double p = std::norm(amps[basis]);
        if (p == 0.0) continue;
        std::size_t idx = 0;
        std::size_t stride = 1;
        for (const auto& reg : registers) {
            std::size_t outcome = 0;
            for (std::size_t b = 0; b < reg.qubit_indices.size(); ++b) {
                outcome |= ((basis >> reg.qubit_indices[b]) & 1) << b;
            }
            idx += stride * outcome;
            stride <<= reg.qubit_indices.size();
        }
        table.probs[idx] += p;
    }
    return table;
}

}  // namespace qmarl::qsim
