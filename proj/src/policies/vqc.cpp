#include "qmarl/policies/vqc.hpp"

#include <cmath>
#include <stdexcept>

namespace qmarl::policies {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void VqcCoreConfig::validate() const {
    if (n_qubits < 1 || n_qubits > qsim::kMaxQubits) {
        throw std::invalid_argument("VqcCoreConfig: n_qubits out of range");
    }
    if (depth < 1) throw std::invalid_argument("VqcCoreConfig: depth must be >= 1");
    if (rotations_per_qubit_per_layer != 4 && rotations_per_qubit_per_layer != 6) {
        throw std::invalid_argument(
            "VqcCoreConfig: rotations_per_qubit_per_layer must be 4 or 6");
    }
}

VqcParamLayout vqc_param_layout(const VqcCoreConfig& cfg) {
    VqcParamLayout layout;
    layout.prepend_offset = 0;
    layout.encoding_offset = cfg.prepend_count();
    layout.variational_offset = cfg.prepend_count() + cfg.encoding_count();
    layout.total = cfg.params_per_agent();
    return layout;
}

void append_agent_gates(qsim::CircuitSpec& circuit, const VqcCoreConfig& cfg,
                        int qubit_offset, int param_offset) {
    cfg.validate();
    int param = param_offset;

    if (cfg.prepend_variational_block) {
        for (int q = 0; q < cfg.n_qubits; ++q) {
            const int target = qubit_offset + q;
            circuit.gates.push_back({{qsim::GateKind::RZ, target}, param++});
            circuit.gates.push_back({{qsim::GateKind::RY, target}, param++});
            circuit.gates.push_back({{qsim::GateKind::RZ, target}, param++});
        }
    }

    // angle encoding: RX, RY, RZ per qubit, angles come from preprocessing
    for (int q = 0; q < cfg.n_qubits; ++q) {
        const int target = qubit_offset + q;
        circuit.gates.push_back({{qsim::GateKind::RX, target}, param++});
        circuit.gates.push_back({{qsim::GateKind::RY, target}, param++});
        circuit.gates.push_back({{qsim::GateKind::RZ, target}, param++});
    }

    const bool six = cfg.rotations_per_qubit_per_layer == 6;
    auto rotation_block = [&]() {
        for (int q = 0; q < cfg.n_qubits; ++q) {
            const int target = qubit_offset + q;
            circuit.gates.push_back({{qsim::GateKind::RZ, target}, param++});
            circuit.gates.push_back({{qsim::GateKind::RY, target}, param++});
            if (six) circuit.gates.push_back({{qsim::GateKind::RZ, target}, param++});
        }
    };
    for (int layer = 0; layer < cfg.depth; ++layer) {
        rotation_block();
        for (int q = 0; q + 1 < cfg.n_qubits; ++q) {
            circuit.gates.push_back(
                {{qsim::GateKind::CNOT, qubit_offset + q + 1, qubit_offset + q}, -1});
        }
        rotation_block();
    }
}

std::vector<double> assemble_agent_params(const VqcCoreConfig& cfg,
                                          std::span<const double> trainable,
                                          std::span<const double> encoding) {
    if (static_cast<int>(trainable.size()) != cfg.trainable_count() ||
        static_cast<int>(encoding.size()) != cfg.encoding_count()) {
        throw std::invalid_argument("assemble_agent_params: size mismatch");
    }
    std::vector<double> params;
    params.reserve(cfg.params_per_agent());
    params.insert(params.end(), trainable.begin(), trainable.begin() + cfg.prepend_count());
    params.insert(params.end(), encoding.begin(), encoding.end());
    params.insert(params.end(), trainable.begin() + cfg.prepend_count(), trainable.end());
    return params;
}

std::vector<double> agent_features(const qsim::Statevector& state,
                                   const VqcCoreConfig& cfg, int qubit_offset) {
    if (cfg.readout == ReadoutMode::ZExpectation) {
        const auto z = z_expectations(state);
        return std::vector<double>(z.begin() + qubit_offset,
                                   z.begin() + qubit_offset + cfg.n_qubits);
    }
    qsim::LocalRegister reg;
    reg.agent_id = 0;
    for (int q = 0; q < cfg.n_qubits; ++q) reg.qubit_indices.push_back(qubit_offset + q);
    const std::vector<qsim::LocalRegister> regs{reg};
    return marginal_joint_distribution(state, regs).probs;
}

std::vector<double> init_vqc_angles(const VqcCoreConfig& cfg, Rng& rng) {
    std::vector<double> angles(cfg.trainable_count());
    for (double& a : angles) a = rng.uniform(-kPi, kPi);
    return angles;
}

}  // namespace qmarl::policies
