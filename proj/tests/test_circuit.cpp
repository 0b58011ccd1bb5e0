#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "qmarl/circuit.hpp"
#include "qmarl/errors.hpp"
#include "qmarl/rng.hpp"

using namespace qmarl;
using namespace qmarl::qsim;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Finite-difference oracle, central differences with h = 1e-6.
double fd_log_prob(const CircuitSpec& c, std::vector<double> params, int index,
                   std::uint64_t outcome) {
    const double h = 1e-6;
    params[index] += h;
    const double up = std::log(outcome_probability(c, params, outcome));
    params[index] -= 2 * h;
    const double down = std::log(outcome_probability(c, params, outcome));
    return (up - down) / (2 * h);
}

CircuitSpec random_rotation_circuit(Rng& rng, int max_qubits, int max_depth) {
    CircuitSpec c;
    c.n_qubits = 1 + rng.uniform_int(max_qubits);
    const int depth = 1 + rng.uniform_int(max_depth);
    int param = 0;
    for (int d = 0; d < depth; ++d) {
        for (int q = 0; q < c.n_qubits; ++q) {
            const int axis = rng.uniform_int(3);
            const GateKind kind = axis == 0   ? GateKind::RX
                                  : axis == 1 ? GateKind::RY
                                              : GateKind::RZ;
            c.gates.push_back({{kind, q}, param++});
        }
        if (c.n_qubits > 1) {
            for (int q = 0; q + 1 < c.n_qubits; ++q) {
                c.gates.push_back({{GateKind::CNOT, q + 1, q}, -1});
            }
        }
    }
    c.n_params = param;
    return c;
}

}  // namespace

TEST_CASE("circuit validation") {
    CircuitSpec c;
    c.n_qubits = 1;
    c.n_params = 1;
    c.gates.push_back({{GateKind::H, 0}, 0});  // H cannot carry a parameter
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);

    CircuitSpec dup;
    dup.n_qubits = 1;
    dup.n_params = 1;
    dup.gates.push_back({{GateKind::RY, 0}, 0});
    dup.gates.push_back({{GateKind::RY, 0}, 0});
    CHECK_THROWS_AS(dup.validate(), std::invalid_argument);
}

TEST_CASE("RY(2 theta) worked example: d logP/d theta = 2 cot(theta)") {
    // Circuit parameter is the gate angle phi = 2*theta; the shift rule gives
    // d logP/d phi and the stored-parameter gradient follows by chain rule.
    CircuitSpec c;
    c.n_qubits = 1;
    c.n_params = 1;
    c.gates.push_back({{GateKind::RY, 0}, 0});

    const double theta = kPi / 4;
    const std::vector<double> params{2 * theta};
    CHECK(outcome_probability(c, params, 1) == doctest::Approx(0.5).epsilon(1e-12));

    const auto grad = param_shift_log_grad(c, params, 1);
    const double d_theta = 2.0 * grad[0];  // chain rule for phi = 2 theta
    CHECK(d_theta == doctest::Approx(2.0 / std::tan(theta)).epsilon(1e-9));

    // and against the finite-difference oracle in phi
    CHECK(grad[0] == doctest::Approx(fd_log_prob(c, params, 0, 1)).epsilon(1e-5));
}

TEST_CASE("parameter-shift matches finite differences on 100+ random circuits") {
    Rng rng(20260810);
    int checked = 0;
    for (int trial = 0; trial < 120; ++trial) {
        CircuitSpec c = random_rotation_circuit(rng, 4, 3);
        c.validate();
        std::vector<double> params(c.n_params);
        for (double& p : params) p = rng.uniform(-kPi, kPi);

        // pick an outcome with non-negligible probability
        const auto probs = born_probabilities(run_circuit(c, params));
        int outcome = 0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            if (probs[i] > probs[outcome]) outcome = static_cast<int>(i);
        }
        if (probs[outcome] < 1e-6) continue;

        const auto grad = param_shift_log_grad(c, params, outcome);
        for (int i = 0; i < c.n_params; ++i) {
            const double fd = fd_log_prob(c, params, i, outcome);
            CHECK(std::abs(grad[i] - fd) < 1e-5);
        }
        ++checked;
    }
    CHECK(checked >= 100);
}

TEST_CASE("parameters on uncorrelated qubits receive zero gradient") {
    // Qubit 1 never interacts with qubit 0; its rotations cannot move the
    // probability of qubit-0 outcomes (marginalised over qubit 1).
    CircuitSpec c;
    c.n_qubits = 2;
    c.n_params = 2;
    c.gates.push_back({{GateKind::RY, 0}, 0});
    c.gates.push_back({{GateKind::RY, 1}, 1});

    const std::vector<double> params{0.9, 1.7};
    const std::vector<LocalRegister> regs{{0, {0}}, {1, {1}}};

    // gradient of the qubit-0 marginal w.r.t. the qubit-1 parameter
    auto jac = param_shift_jacobian(c, params, [&](const Statevector& s) {
        auto t = marginal_joint_distribution(s, regs);
        return std::vector<double>{t.prob(std::vector<int>{1, 0}) +
                                   t.prob(std::vector<int>{1, 1})};
    });
    CHECK(std::abs(jac[1][0]) < 1e-10);
    CHECK(std::abs(jac[0][0]) > 1e-3);  // own parameter does move it
}

TEST_CASE("RZ before computational-basis measurement has zero gradient") {
    CircuitSpec c;
    c.n_qubits = 2;
    c.prep = Entanglement::PhiPlus;
    c.designated = {0, 1};
    c.n_params = 4;
    c.gates.push_back({{GateKind::RY, 0}, 0});
    c.gates.push_back({{GateKind::RZ, 0}, 1});
    c.gates.push_back({{GateKind::RY, 1}, 2});
    c.gates.push_back({{GateKind::RZ, 1}, 3});

    const std::vector<double> params{0.4, 1.2, -0.3, 0.8};
    const auto grad = param_shift_log_grad(c, params, 0);
    CHECK(std::abs(grad[1]) < 1e-10);
    CHECK(std::abs(grad[3]) < 1e-10);
}

TEST_CASE("degenerate outcomes are rejected") {
    CircuitSpec c;
    c.n_qubits = 1;
    c.n_params = 1;
    c.gates.push_back({{GateKind::RY, 0}, 0});
    CHECK_THROWS_AS(param_shift_log_grad(c, std::vector<double>{0.0}, 1),
                    DegenerateOutcomeError);
}

TEST_CASE("CHSH win objective is stationary at the optimal angles") {
    // theta_A = (0, pi/4), theta_B = (pi/8, -pi/8); gate angles are 2*theta.
    // The win probability, as a function of all four gate angles, should have
    // a vanishing gradient at the optimum (checked by finite differences and
    // by shift-rule probability gradients).
    const std::array<double, 2> theta_a{0.0, kPi / 4};
    const std::array<double, 2> theta_b{kPi / 8, -kPi / 8};

    auto win_rate = [&](const std::array<double, 2>& ta,
                        const std::array<double, 2>& tb) {
        double total = 0.0;
        for (int x = 0; x < 2; ++x) {
            for (int y = 0; y < 2; ++y) {
                CircuitSpec c;
                c.n_qubits = 2;
                c.prep = Entanglement::PhiPlus;
                c.designated = {0, 1};
                c.n_params = 2;
                c.gates.push_back({{GateKind::RY, 0}, 0});
                c.gates.push_back({{GateKind::RY, 1}, 1});
                const std::vector<double> params{2 * ta[x], 2 * tb[y]};
                const auto probs = born_probabilities(run_circuit(c, params));
                for (int a = 0; a < 2; ++a) {
                    for (int b = 0; b < 2; ++b) {
                        if ((a ^ b) == (x & y)) total += 0.25 * probs[a + 2 * b];
                    }
                }
            }
        }
        return total;
    };

    const double w0 = win_rate(theta_a, theta_b);
    CHECK(w0 == doctest::Approx(std::pow(std::cos(kPi / 8), 2)).epsilon(1e-9));

    const double h = 1e-6;
    for (int agent = 0; agent < 2; ++agent) {
        for (int input = 0; input < 2; ++input) {
            auto ta = theta_a;
            auto tb = theta_b;
            double* slot = agent == 0 ? &ta[input] : &tb[input];
            *slot += h;
            const double up = win_rate(ta, tb);
            *slot -= 2 * h;
            const double down = win_rate(ta, tb);
            CHECK(std::abs((up - down) / (2 * h)) < 1e-4);
        }
    }
}
