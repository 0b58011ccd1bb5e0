#include "qmarl/circuit.hpp"

#include <cmath>
#include <stdexcept>

#include "qmarl/errors.hpp"

namespace qmarl::qsim {

void CircuitSpec::validate() const {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw std::invalid_argument("CircuitSpec: n_qubits out of range");
    }
    std::vector<int> uses(n_params, 0);
    for (const auto& slot : gates) {
        if (slot.param_index >= 0) {
            const GateKind k = slot.gate.kind;
            if (k != GateKind::RX && k != GateKind::RY && k != GateKind::RZ) {
                throw std::invalid_argument(
                    "CircuitSpec: only rotation gates may be parameterised");
            }
            if (slot.param_index >= n_params) {
                throw std::invalid_argument("CircuitSpec: param_index out of range");
            }
            uses[slot.param_index] += 1;
        }
    }
    for (int i = 0; i < n_params; ++i) {
        if (uses[i] != 1) {
            throw std::invalid_argument("CircuitSpec: parameter " + std::to_string(i) +
                                        " must be bound to exactly one gate");
        }
    }
}

Statevector run_circuit(const CircuitSpec& circuit, std::span<const double> params) {
    if (static_cast<int>(params.size()) != circuit.n_params) {
        throw std::invalid_argument("run_circuit: parameter count mismatch");
    }
    Statevector state =
        prepare_state(circuit.n_qubits, circuit.prep, circuit.designated);
    for (const auto& slot : circuit.gates) {
        GateOp op = slot.gate;
        if (slot.param_index >= 0) op.angle = params[slot.param_index];
        switch (op.kind) {
            case GateKind::H: state.apply_h(op.target); break;
            case GateKind::CNOT: state.apply_cnot(op.control, op.target); break;
            case GateKind::RX: state.apply_rx(op.target, op.angle); break;
            case GateKind::RY: state.apply_ry(op.target, op.angle); break;
            case GateKind::RZ: state.apply_rz(op.target, op.angle); break;
        }
    }
    return state;
}

double outcome_probability(const CircuitSpec& circuit, std::span<const double> params,
                           std::uint64_t outcome) {
    const Statevector state = run_circuit(circuit, params);
    if (outcome >= state.dim()) {
        throw std::out_of_range("outcome_probability: outcome bitstring out of range");
    }
    return std::norm(state.amplitude(outcome));
}

std::vector<double> param_shift_log_grad(const CircuitSpec& circuit,
                                         std::span<const double> params,
                                         std::uint64_t outcome) {
    const double p0 = outcome_probability(circuit, params, outcome);
    if (p0 < 1e-12) {
        throw DegenerateOutcomeError(
            "param_shift_log_grad: outcome probability below 1e-12");
    }
    std::vector<double> shifted(params.begin(), params.end());
    std::vector<double> grad(circuit.n_params, 0.0);
    const double denom = 2.0 * std::sin(kParamShift) * p0;
    for (int i = 0; i < circuit.n_params; ++i) {
        const double original = shifted[i];
        shifted[i] = original + kParamShift;
        const double p_plus = outcome_probability(circuit, shifted, outcome);
        shifted[i] = original - kParamShift;
        const double p_minus = outcome_probability(circuit, shifted, outcome);
        shifted[i] = original;
        grad[i] = (p_plus - p_minus) / denom;
    }
    return grad;
}

std::vector<std::vector<double>> param_shift_jacobian(
    const CircuitSpec& circuit, std::span<const double> params,
    const std::function<std::vector<double>(const Statevector&)>& features,
    int param_begin, int param_end) {
    if (param_end < 0) param_end = circuit.n_params;
    if (param_begin < 0 || param_end > circuit.n_params || param_begin > param_end) {
        throw std::invalid_argument("param_shift_jacobian: bad parameter range");
    }
    std::vector<double> shifted(params.begin(), params.end());
    std::vector<std::vector<double>> jac(param_end - param_begin);
    const double denom = 2.0 * std::sin(kParamShift);
    for (int i = param_begin; i < param_end; ++i) {
        const double original = shifted[i];
        shifted[i] = original + kParamShift;
        const std::vector<double> f_plus = features(run_circuit(circuit, shifted));
        shifted[i] = original - kParamShift;
        const std::vector<double> f_minus = features(run_circuit(circuit, shifted));
        shifted[i] = original;
        auto& row = jac[i - param_begin];
        row.resize(f_plus.size());
        for (std::size_t k = 0; k < f_plus.size(); ++k) {
            row[k] = (f_plus[k] - f_minus[k]) / denom;
        }
    }
    return jac;
}

}  // namespace qmarl::qsim
