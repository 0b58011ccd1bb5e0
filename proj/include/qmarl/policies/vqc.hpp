#pragma once

#include <vector>

#include "qmarl/circuit.hpp"
#include "qmarl/dense.hpp"
#include "qmarl/rng.hpp"

namespace qmarl::policies {

enum class ReadoutMode { ZExpectation, FullDistribution };

// One agent's variational circuit block: angle encoding followed by `depth`
// variational layers. rotations_per_qubit_per_layer = 4 lays down RZ,RY on
// each side of the nearest-neighbour CNOT chain; 6 uses the full RZ-RY-RZ
// decomposition on each side. The optional extra variational block (RZ,RY,RZ
// per qubit before encoding) is off by default.
struct VqcCoreConfig {
    int n_qubits = 4;
    int depth = 3;
    int rotations_per_qubit_per_layer = 4;  // 4 or 6
    bool prepend_variational_block = false;
    ReadoutMode readout = ReadoutMode::ZExpectation;

    int encoding_count() const { return 3 * n_qubits; }
    int prepend_count() const { return prepend_variational_block ? 3 * n_qubits : 0; }
    int variational_count() const {
        return n_qubits * depth * rotations_per_qubit_per_layer;
    }
    int trainable_count() const { return prepend_count() + variational_count(); }
    int params_per_agent() const { return trainable_count() + encoding_count(); }
    int feature_dim() const {
        return readout == ReadoutMode::ZExpectation ? n_qubits : 1 << n_qubits;
    }
    void validate() const;
};

// Appends one agent's gate slots to `circuit`. The agent's register is
// [qubit_offset, qubit_offset + n_qubits); its circuit parameters occupy
// [param_offset, param_offset + params_per_agent()) ordered as
// [prepend block | encoding | variational layers], matching gate order.
void append_agent_gates(qsim::CircuitSpec& circuit, const VqcCoreConfig& cfg,
                        int qubit_offset, int param_offset);

// Index helpers into one agent's parameter block.
struct VqcParamLayout {
    int prepend_offset = 0;
    int encoding_offset = 0;
    int variational_offset = 0;
    int total = 0;
};
VqcParamLayout vqc_param_layout(const VqcCoreConfig& cfg);

// Assembles the circuit parameter block for one agent from its trainable
// angles and the encoding angles produced by preprocessing.
std::vector<double> assemble_agent_params(const VqcCoreConfig& cfg,
                                          std::span<const double> trainable,
                                          std::span<const double> encoding);

// Agent features read from the joint state: per-qubit <Z> of the agent's
// register, or the Born marginal over its register.
std::vector<double> agent_features(const qsim::Statevector& state,
                                   const VqcCoreConfig& cfg, int qubit_offset);

// Trainable circuit angles drawn uniformly from [-pi, pi).
std::vector<double> init_vqc_angles(const VqcCoreConfig& cfg, Rng& rng);

}  // namespace qmarl::policies
