#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qmarl/statevector.hpp"

namespace qmarl::qsim {

// Exact two-point shift for rotation gates whose angle is the parameter.
inline constexpr double kParamShift = 3.14159265358979323846 / 4.0;  // pi/4

// Declarative circuit: fixed entangled-state preparation followed by a gate
// list. A gate slot with param_index >= 0 is a rotation whose angle is read
// from the parameter vector; each parameter index must be used by exactly
// one slot. Parameters are gate angles — callers that store a parameter
// theta entering a gate as R(2*theta) apply the chain-rule factor 2
// themselves.
struct CircuitSpec {
    struct Slot {
        GateOp gate;
        int param_index = -1;
    };

    int n_qubits = 0;
    Entanglement prep = Entanglement::Product;
    std::vector<int> designated;
    std::vector<Slot> gates;
    int n_params = 0;

    void validate() const;  // throws on malformed specs
};

Statevector run_circuit(const CircuitSpec& circuit, std::span<const double> params);

// Born probability of one joint outcome bitstring (little-endian).
double outcome_probability(const CircuitSpec& circuit, std::span<const double> params,
                           std::uint64_t outcome);

// d log P(outcome) / d params via the parameter-shift rule,
// (P(theta+d) - P(theta-d)) / (2 sin(d) P(theta)) with d = pi/4.
// Two forward passes per parameter. Throws DegenerateOutcomeError when
// P(outcome) < 1e-12.
std::vector<double> param_shift_log_grad(const CircuitSpec& circuit,
                                         std::span<const double> params,
                                         std::uint64_t outcome);

// Shift-rule Jacobian of an arbitrary statevector functional: returns
// J[i][k] = d features[k] / d params[param_begin + i]. Exact for any feature
// that is linear in the outcome probabilities (Born entries, Z expectations,
// marginals). param_end = -1 means all parameters.
std::vector<std::vector<double>> param_shift_jacobian(
    const CircuitSpec& circuit, std::span<const double> params,
    const std::function<std::vector<double>(const Statevector&)>& features,
    int param_begin = 0, int param_end = -1);

}  // namespace qmarl::qsim
