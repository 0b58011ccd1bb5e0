#pragma once

#include <array>

#include "qmarl/circuit.hpp"
#include "qmarl/rng.hpp"
#include "qmarl/statevector.hpp"

namespace qmarl::policies {

enum class ChshMode { ClassicalBernoulli, QuantumLocalRotation };

// Two trainable parameters per agent, one per input bit. Quantum mode:
// theta[x] is the half-angle of an RY(2*theta) measurement rotation on the
// agent's qubit. Classical mode: theta[x] is a Bernoulli logit,
// P(output 1) = sigmoid(theta[x]).
struct ChshAgentPolicy {
    ChshMode mode = ChshMode::QuantumLocalRotation;
    std::array<double, 2> theta{0.0, 0.0};
};

// Exact joint table P(a, b | x, y); index a + 2b. Quantum pairs share the
// prepared two-qubit state; classical pairs factorise and ignore it.
qsim::JointTable chsh_joint_action_distribution(const ChshAgentPolicy& alice,
                                                const ChshAgentPolicy& bob, int x,
                                                int y, qsim::Entanglement entanglement);

// The two-gate measurement circuit behind the quantum table. Circuit
// parameters are the gate angles (2*theta_A[x], 2*theta_B[y]).
qsim::CircuitSpec chsh_measurement_circuit(qsim::Entanglement entanglement);

// d log P(a, b | x, y) with respect to the two active stored parameters
// theta_A[x] and theta_B[y] (all other components are untouched this round).
struct ChshLogProbGrad {
    double d_theta_alice = 0.0;
    double d_theta_bob = 0.0;
};
ChshLogProbGrad chsh_log_prob_grad(const ChshAgentPolicy& alice,
                                   const ChshAgentPolicy& bob, int x, int y, int a,
                                   int b, qsim::Entanglement entanglement);

// Per-agent action entropy (of the agent's own marginal) and its gradient
// with respect to the agent's active parameter.
struct ChshEntropy {
    double entropy_alice = 0.0;
    double d_theta_alice = 0.0;
    double entropy_bob = 0.0;
    double d_theta_bob = 0.0;
};
ChshEntropy chsh_entropy_grad(const ChshAgentPolicy& alice, const ChshAgentPolicy& bob,
                              int x, int y, qsim::Entanglement entanglement);

}  // namespace qmarl::policies
