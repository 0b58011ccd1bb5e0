#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace qmarl::qsim {

using cplx = std::complex<double>;

// Dense statevectors only; the largest circuit in this project is a
// 12-qubit joint register (two agents x six qubits).
inline constexpr int kMaxQubits = 12;

// Joint quantum state of n qubits as 2^n complex amplitudes.
//
// Bit convention is little-endian throughout: qubit k is bit k of the
// basis index, so |q1 q0> = |10> (qubit 0 set) is amplitude index 1.
class Statevector {
public:
    explicit Statevector(int n_qubits);  // |0...0>

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    const std::vector<cplx>& amplitudes() const { return amps_; }
    cplx amplitude(std::size_t basis_index) const { return amps_.at(basis_index); }
    double norm_sq() const;

    // In-place gate application. Functions below that return a Statevector
    // hand over ownership; a returned state is never mutated by the engine
    // afterwards, so values can be shared freely across threads.
    void apply_h(int qubit);
    void apply_x(int qubit);
    void apply_z(int qubit);
    void apply_rx(int qubit, double angle);
    void apply_ry(int qubit, double angle);
    void apply_rz(int qubit, double angle);
    void apply_cnot(int control, int target);

private:
    void apply_single_qubit(int qubit, cplx u00, cplx u01, cplx u10, cplx u11);
    void check_qubit(int qubit) const;

    int n_qubits_;
    std::vector<cplx> amps_;
};

enum class GateKind { H, CNOT, RX, RY, RZ };

struct GateOp {
    GateKind kind;
    int target = 0;
    int control = -1;    // CNOT only
    double angle = 0.0;  // RX/RY/RZ only
};

// Pure version: copies, applies, returns.
Statevector apply_gate(const Statevector& state, const GateOp& op);

enum class Entanglement { Product, PhiPlus, PhiMinus, PsiPlus, PsiMinus, GHZ };

bool is_bell(Entanglement e);

// Prepares the fixed (zero-parameter) initial state. Product ignores
// `designated`; Bell kinds require exactly two designated qubits, GHZ at
// least three. Phi-/Psi+/Psi- are built from Phi+ by X and Z corrections
// on the second designated qubit.
Statevector prepare_state(int n_qubits, Entanglement variant,
                          std::span<const int> designated);

// Born-rule probabilities over all 2^n bitstrings.
std::vector<double> born_probabilities(const Statevector& state);

// Per-qubit <Z> values in [-1, 1] (+1 for |0>).
std::vector<double> z_expectations(const Statevector& state);

struct LocalRegister {
    int agent_id = 0;
    std::vector<int> qubit_indices;  // ordered; bit j of the agent outcome
};

// Joint probability table over per-agent outcome tuples. Agent 0 varies
// fastest in the flat index. Built from the full joint state, so all
// cross-agent correlations are preserved.
struct JointTable {
    std::vector<int> register_bits;  // bits per agent
    std::vector<double> probs;       // prod_i 2^register_bits[i] entries

    double prob(std::span<const int> outcomes) const;
    std::size_t flat_index(std::span<const int> outcomes) const;
};

JointTable marginal_joint_distribution(const Statevector& state,
                                       std::span<const LocalRegister> registers);

}  // namespace qmarl::qsim
