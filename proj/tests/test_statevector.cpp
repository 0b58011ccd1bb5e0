#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "qmarl/rng.hpp"
#include "qmarl/statevector.hpp"

using namespace qmarl;
using namespace qmarl::qsim;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Independent 4x4 matrix-vector oracle for two-qubit checks. Matrices are
// built by explicit Kronecker products in the same little-endian convention
// (qubit 0 = least significant bit).
using Mat4 = std::array<std::array<cplx, 4>, 4>;
using Vec4 = std::array<cplx, 4>;
using Mat2 = std::array<std::array<cplx, 2>, 2>;

Mat4 kron_q1q0(const Mat2& on_q1, const Mat2& on_q0) {
    Mat4 out{};
    for (int r1 = 0; r1 < 2; ++r1)
        for (int r0 = 0; r0 < 2; ++r0)
            for (int c1 = 0; c1 < 2; ++c1)
                for (int c0 = 0; c0 < 2; ++c0)
                    out[r1 * 2 + r0][c1 * 2 + c0] = on_q1[r1][c1] * on_q0[r0][c0];
    return out;
}

Vec4 matvec(const Mat4& m, const Vec4& v) {
    Vec4 out{};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) out[r] += m[r][c] * v[c];
    return out;
}

Mat2 make2(cplx a, cplx b, cplx c, cplx d) {
    Mat2 m;
    m[0][0] = a;
    m[0][1] = b;
    m[1][0] = c;
    m[1][1] = d;
    return m;
}
Mat2 mat_i() { return make2(1, 0, 0, 1); }
Mat2 mat_x() { return make2(0, 1, 1, 0); }
Mat2 mat_z() { return make2(1, 0, 0, -1); }
Mat2 mat_h() {
    const double s = 1.0 / std::sqrt(2.0);
    return make2(s, s, s, -s);
}
Mat2 mat_ry(double a) {
    const double c = std::cos(a / 2), s = std::sin(a / 2);
    return make2(c, -s, s, c);
}
// CNOT with control qubit 0, target qubit 1 in little-endian indexing.
Mat4 mat_cnot01() {
    Mat4 m{};
    m[0][0] = 1;  // |00> -> |00>
    m[3][1] = 1;  // q0=1,q1=0 (idx 1) -> q0=1,q1=1 (idx 3)
    m[2][2] = 1;  // |01> stays (control clear)
    m[1][3] = 1;  // idx 3 -> idx 1
    return m;
}

Vec4 amps4(const Statevector& s) {
    return {s.amplitude(0), s.amplitude(1), s.amplitude(2), s.amplitude(3)};
}

void check_close(const Vec4& got, const Vec4& want, double tol = 1e-12) {
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(got[i] - want[i]) < tol);
    }
}

GateOp random_gate(Rng& rng, int n_qubits) {
    const int pick = rng.uniform_int(n_qubits > 1 ? 5 : 4);
    GateOp op;
    op.target = rng.uniform_int(n_qubits);
    switch (pick) {
        case 0: op.kind = GateKind::H; break;
        case 1: op.kind = GateKind::RX; op.angle = rng.uniform(-kPi, kPi); break;
        case 2: op.kind = GateKind::RY; op.angle = rng.uniform(-kPi, kPi); break;
        case 3: op.kind = GateKind::RZ; op.angle = rng.uniform(-kPi, kPi); break;
        default:
            op.kind = GateKind::CNOT;
            op.control = op.target;
            while (op.control == op.target) op.control = rng.uniform_int(n_qubits);
            break;
    }
    return op;
}

}  // namespace

TEST_CASE("single-qubit gate definitions") {
    Statevector s(1);
    s.apply_h(0);
    CHECK(std::abs(s.amplitude(0) - cplx{1 / std::sqrt(2.0), 0}) < 1e-15);
    CHECK(std::abs(s.amplitude(1) - cplx{1 / std::sqrt(2.0), 0}) < 1e-15);

    Statevector r(1);
    r.apply_ry(0, kPi);  // |0> -> |1> up to global phase
    CHECK(std::norm(r.amplitude(1)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("CNOT on |10> gives |11>") {
    Statevector s(2);
    s.apply_x(0);  // |q1 q0> = |01>? no: sets qubit 0 -> index 1, written |10> as q0 q1
    s.apply_cnot(0, 1);
    CHECK(std::norm(s.amplitude(3)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("prepare_state: the four Bell states, product, GHZ") {
    const double s2 = 1.0 / std::sqrt(2.0);
    const std::vector<int> both{0, 1};

    auto phi_plus = prepare_state(2, Entanglement::PhiPlus, both);
    check_close(amps4(phi_plus), {cplx{s2, 0}, {0, 0}, {0, 0}, {s2, 0}});

    auto product = prepare_state(2, Entanglement::Product, {});
    check_close(amps4(product), {cplx{1, 0}, {0, 0}, {0, 0}, {0, 0}});

    auto phi_minus = prepare_state(2, Entanglement::PhiMinus, both);
    check_close(amps4(phi_minus), {cplx{s2, 0}, {0, 0}, {0, 0}, {-s2, 0}});

    auto psi_plus = prepare_state(2, Entanglement::PsiPlus, both);
    check_close(amps4(psi_plus), {cplx{0, 0}, {s2, 0}, {s2, 0}, {0, 0}});

    const std::vector<int> three{0, 1, 2};
    auto ghz = prepare_state(3, Entanglement::GHZ, three);
    CHECK(std::abs(ghz.amplitude(0) - cplx{s2, 0}) < 1e-12);
    CHECK(std::abs(ghz.amplitude(7) - cplx{s2, 0}) < 1e-12);
    for (int i = 1; i < 7; ++i) CHECK(std::abs(ghz.amplitude(i)) < 1e-12);
}

TEST_CASE("PsiMinus matches the H,CNOT,X,Z matrix oracle") {
    // Oracle: Z1 * X1 * CNOT(0->1) * (I (x) H) applied to |00>.
    Vec4 v{cplx{1, 0}, {0, 0}, {0, 0}, {0, 0}};
    v = matvec(kron_q1q0(mat_i(), mat_h()), v);
    v = matvec(mat_cnot01(), v);
    v = matvec(kron_q1q0(mat_x(), mat_i()), v);
    v = matvec(kron_q1q0(mat_z(), mat_i()), v);

    auto psi_minus = prepare_state(2, Entanglement::PsiMinus, std::vector<int>{0, 1});
    check_close(amps4(psi_minus), v);

    // and the explicit amplitudes (0, 1/sqrt2, -1/sqrt2, 0)
    const double s2 = 1.0 / std::sqrt(2.0);
    check_close(amps4(psi_minus), {cplx{0, 0}, {s2, 0}, {-s2, 0}, {0, 0}});
}

TEST_CASE("prepare_state rejects variant/register mismatches") {
    CHECK_THROWS_AS(prepare_state(2, Entanglement::PhiPlus, std::vector<int>{0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(prepare_state(3, Entanglement::GHZ, std::vector<int>{0, 1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(prepare_state(2, Entanglement::PhiPlus, std::vector<int>{0, 5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(Statevector(13), std::invalid_argument);
    CHECK_THROWS_AS(Statevector(0), std::invalid_argument);
}

TEST_CASE("born_probabilities: Bell state and rotated Bell state") {
    auto phi_plus = prepare_state(2, Entanglement::PhiPlus, std::vector<int>{0, 1});
    auto p = born_probabilities(phi_plus);
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p[3] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.0));
    CHECK(p[2] == doctest::Approx(0.0));

    // |Phi+> after RY(2*pi/8) on qubit 0, against the 4x4 oracle
    Statevector rotated = phi_plus;
    rotated.apply_ry(0, 2 * kPi / 8);
    Vec4 v{cplx{1 / std::sqrt(2.0), 0}, {0, 0}, {0, 0}, {1 / std::sqrt(2.0), 0}};
    v = matvec(kron_q1q0(mat_i(), mat_ry(2 * kPi / 8)), v);
    auto probs = born_probabilities(rotated);
    for (int i = 0; i < 4; ++i) {
        CHECK(probs[i] == doctest::Approx(std::norm(v[i])).epsilon(1e-12));
    }
    const double c = std::cos(kPi / 8), s = std::sin(kPi / 8);
    CHECK(probs[0] == doctest::Approx(c * c / 2).epsilon(1e-12));
    CHECK(probs[3] == doctest::Approx(c * c / 2).epsilon(1e-12));
    CHECK(probs[1] == doctest::Approx(s * s / 2).epsilon(1e-12));
    CHECK(probs[2] == doctest::Approx(s * s / 2).epsilon(1e-12));
}

TEST_CASE("z_expectations basics") {
    Statevector zero(1);
    CHECK(z_expectations(zero)[0] == doctest::Approx(1.0));

    Statevector plus(1);
    plus.apply_h(0);
    CHECK(z_expectations(plus)[0] == doctest::Approx(0.0));

    auto phi_plus = prepare_state(2, Entanglement::PhiPlus, std::vector<int>{0, 1});
    auto z = z_expectations(phi_plus);
    CHECK(z[0] == doctest::Approx(0.0));
    CHECK(z[1] == doctest::Approx(0.0));
}

TEST_CASE("marginal_joint_distribution keeps cross-agent correlations") {
    const std::vector<LocalRegister> regs{{0, {0}}, {1, {1}}};

    auto phi_plus = prepare_state(2, Entanglement::PhiPlus, std::vector<int>{0, 1});
    auto table = marginal_joint_distribution(phi_plus, regs);
    CHECK(table.prob(std::vector<int>{0, 0}) == doctest::Approx(0.5));
    CHECK(table.prob(std::vector<int>{1, 1}) == doctest::Approx(0.5));
    CHECK(table.prob(std::vector<int>{0, 1}) == doctest::Approx(0.0));

    auto psi_plus = prepare_state(2, Entanglement::PsiPlus, std::vector<int>{0, 1});
    auto t2 = marginal_joint_distribution(psi_plus, regs);
    CHECK(t2.prob(std::vector<int>{0, 1}) == doctest::Approx(0.5));
    CHECK(t2.prob(std::vector<int>{1, 0}) == doctest::Approx(0.5));

    // Product state factorises
    Statevector prod(2);
    prod.apply_ry(0, 0.7);
    prod.apply_ry(1, 1.3);
    auto t3 = marginal_joint_distribution(prod, regs);
    const double pa1 = std::pow(std::sin(0.35), 2);
    const double pb1 = std::pow(std::sin(0.65), 2);
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            const double pa = a ? pa1 : 1 - pa1;
            const double pb = b ? pb1 : 1 - pb1;
            CHECK(t3.prob(std::vector<int>{a, b}) ==
                  doctest::Approx(pa * pb).epsilon(1e-12));
        }
    }

    const std::vector<LocalRegister> overlapping{{0, {0}}, {1, {0, 1}}};
    CHECK_THROWS_AS(marginal_joint_distribution(phi_plus, overlapping),
                    std::invalid_argument);
}

TEST_CASE("norm preservation and Born consistency on random circuits") {
    Rng rng(20240811);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 1 + rng.uniform_int(6);
        Statevector s(n);
        const int depth = 1 + rng.uniform_int(4);
        for (int layer = 0; layer < depth; ++layer) {
            for (int g = 0; g < n; ++g) {
                const GateOp op = random_gate(rng, n);
                s = apply_gate(s, op);
                CHECK(std::abs(s.norm_sq() - 1.0) < 1e-10);
            }
        }
        auto probs = born_probabilities(s);
        double sum = 0.0;
        for (double p : probs) {
            CHECK(p >= 0.0);
            sum += p;
        }
        CHECK(std::abs(sum - 1.0) < 1e-12);
    }
}

TEST_CASE("unitarity: gate followed by its inverse restores the state") {
    Rng rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + rng.uniform_int(4);
        Statevector s(n);
        for (int warm = 0; warm < 6; ++warm) s = apply_gate(s, random_gate(rng, n));
        const auto before = s.amplitudes();

        GateOp op = random_gate(rng, n);
        s = apply_gate(s, op);
        GateOp inv = op;
        inv.angle = -op.angle;  // H and CNOT are self-inverse
        s = apply_gate(s, inv);

        for (std::size_t i = 0; i < before.size(); ++i) {
            CHECK(std::abs(s.amplitudes()[i] - before[i]) < 1e-10);
        }
    }
}

TEST_CASE("locality: product-state marginals ignore the other agent's gates") {
    Rng rng(4242);
    const std::vector<LocalRegister> regs{{0, {0, 1}}, {1, {2, 3}}};
    for (int trial = 0; trial < 20; ++trial) {
        Statevector s = prepare_state(4, Entanglement::Product, {});
        // agent 0 acts on qubits {0,1} with a fixed circuit
        s.apply_ry(0, 0.3);
        s.apply_cnot(0, 1);
        s.apply_rx(1, 1.1);
        auto base = marginal_joint_distribution(s, regs);

        // agent 1 applies arbitrary local gates on {2,3}
        Statevector t = s;
        for (int g = 0; g < 5; ++g) {
            GateOp op = random_gate(rng, 2);
            op.target += 2;
            if (op.kind == GateKind::CNOT) op.control += 2;
            t = apply_gate(t, op);
        }
        auto after = marginal_joint_distribution(t, regs);

        // agent 0's marginal: sum over agent 1 outcomes
        for (int a = 0; a < 4; ++a) {
            double m0 = 0, m1 = 0;
            for (int b = 0; b < 4; ++b) {
                m0 += base.prob(std::vector<int>{a, b});
                m1 += after.prob(std::vector<int>{a, b});
            }
            CHECK(std::abs(m0 - m1) < 1e-12);
        }
    }
}

TEST_CASE("entangled correlation: P(a=b) = cos^2(thetaA - thetaB) on |Phi+>") {
    Rng rng(99);
    const std::vector<LocalRegister> regs{{0, {0}}, {1, {1}}};
    for (int trial = 0; trial < 50; ++trial) {
        const double ta = rng.uniform(-kPi, kPi);
        const double tb = rng.uniform(-kPi, kPi);
        auto s = prepare_state(2, Entanglement::PhiPlus, std::vector<int>{0, 1});
        s.apply_ry(0, 2 * ta);
        s.apply_ry(1, 2 * tb);
        auto table = marginal_joint_distribution(s, regs);
        const double same = table.prob(std::vector<int>{0, 0}) +
                            table.prob(std::vector<int>{1, 1});
        CHECK(std::abs(same - std::pow(std::cos(ta - tb), 2)) < 1e-10);
    }
}
