#include "qmarl/policies/chsh_policy.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace qmarl::policies {

namespace {

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

double clamp_prob(double p) {
    if (p < 1e-12) return 1e-12;
    if (p > 1.0 - 1e-12) return 1.0 - 1e-12;
    return p;
}

// binary entropy and its derivative w.r.t. p
double binary_entropy(double p) {
    p = clamp_prob(p);
    return -p * std::log(p) - (1 - p) * std::log(1 - p);
}
double binary_entropy_dp(double p) {
    p = clamp_prob(p);
    return -std::log(p / (1 - p));
}

void check_modes(const ChshAgentPolicy& alice, const ChshAgentPolicy& bob) {
    if (alice.mode != bob.mode) {
        throw std::invalid_argument("chsh: agent modes must match");
    }
}

}  // namespace

qsim::CircuitSpec chsh_measurement_circuit(qsim::Entanglement entanglement) {
    qsim::CircuitSpec circuit;
    circuit.n_qubits = 2;
    circuit.prep = entanglement;
    if (entanglement != qsim::Entanglement::Product) {
        circuit.designated = {0, 1};
    }
    circuit.n_params = 2;
    circuit.gates.push_back({{qsim::GateKind::RY, 0}, 0});
    circuit.gates.push_back({{qsim::GateKind::RY, 1}, 1});
    return circuit;
}

qsim::JointTable chsh_joint_action_distribution(const ChshAgentPolicy& alice,
                                                const ChshAgentPolicy& bob, int x,
                                                int y, qsim::Entanglement entanglement) {
    check_modes(alice, bob);
    if ((x | y) & ~1) throw std::invalid_argument("chsh: inputs must be bits");

    if (alice.mode == ChshMode::ClassicalBernoulli) {
        const double pa = sigmoid(alice.theta[x]);
        const double pb = sigmoid(bob.theta[y]);
        qsim::JointTable table;
        table.register_bits = {1, 1};
        table.probs = {(1 - pa) * (1 - pb), pa * (1 - pb), (1 - pa) * pb, pa * pb};
        return table;
    }

    const auto circuit = chsh_measurement_circuit(entanglement);
    const std::vector<double> params{2 * alice.theta[x], 2 * bob.theta[y]};
    const auto state = run_circuit(circuit, params);
    const std::vector<qsim::LocalRegister> registers{{0, {0}}, {1, {1}}};
    return marginal_joint_distribution(state, registers);
}

ChshLogProbGrad chsh_log_prob_grad(const ChshAgentPolicy& alice,
                                   const ChshAgentPolicy& bob, int x, int y, int a,
                                   int b, qsim::Entanglement entanglement) {
    check_modes(alice, bob);
    ChshLogProbGrad grad;
    if (alice.mode == ChshMode::ClassicalBernoulli) {
        // Bernoulli log-likelihood gradient w.r.t. the logit
        grad.d_theta_alice = a - sigmoid(alice.theta[x]);
        grad.d_theta_bob = b - sigmoid(bob.theta[y]);
        return grad;
    }
    const auto circuit = chsh_measurement_circuit(entanglement);
    const std::vector<double> params{2 * alice.theta[x], 2 * bob.theta[y]};
    const std::uint64_t outcome =
        static_cast<std::uint64_t>(a) | (static_cast<std::uint64_t>(b) << 1);
    const auto gate_grad = qsim::param_shift_log_grad(circuit, params, outcome);
    // gate angle = 2 * stored parameter
    grad.d_theta_alice = 2.0 * gate_grad[0];
    grad.d_theta_bob = 2.0 * gate_grad[1];
    return grad;
}

ChshEntropy chsh_entropy_grad(const ChshAgentPolicy& alice, const ChshAgentPolicy& bob,
                              int x, int y, qsim::Entanglement entanglement) {
    check_modes(alice, bob);
    ChshEntropy result;
    if (alice.mode == ChshMode::ClassicalBernoulli) {
        const double pa = sigmoid(alice.theta[x]);
        const double pb = sigmoid(bob.theta[y]);
        result.entropy_alice = binary_entropy(pa);
        result.entropy_bob = binary_entropy(pb);
        // dH/dtheta = dH/dp * p(1-p)
        result.d_theta_alice = binary_entropy_dp(pa) * pa * (1 - pa);
        result.d_theta_bob = binary_entropy_dp(pb) * pb * (1 - pb);
        return result;
    }

    const auto circuit = chsh_measurement_circuit(entanglement);
    const std::vector<double> params{2 * alice.theta[x], 2 * bob.theta[y]};
    auto marginals = [](const qsim::Statevector& state) {
        const auto z = z_expectations(state);
        // P(bit = 1) = (1 - <Z>) / 2, one entry per agent qubit
        return std::vector<double>{(1 - z[0]) / 2, (1 - z[1]) / 2};
    };
    const auto here = marginals(run_circuit(circuit, params));
    const auto jac = qsim::param_shift_jacobian(circuit, params, marginals);

    result.entropy_alice = binary_entropy(here[0]);
    result.entropy_bob = binary_entropy(here[1]);
    // chain: stored parameter -> gate angle (factor 2) -> marginal -> entropy
    result.d_theta_alice = binary_entropy_dp(here[0]) * 2.0 * jac[0][0];
    result.d_theta_bob = binary_entropy_dp(here[1]) * 2.0 * jac[1][1];
    return result;
}

}  // namespace qmarl::policies
