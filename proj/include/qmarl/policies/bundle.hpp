#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qmarl/dense.hpp"
#include "qmarl/policies/vqc.hpp"
#include "qmarl/rng.hpp"
#include "qmarl/statevector.hpp"

namespace qmarl::policies {

// Which side of the actor-critic pair is quantum. The four combinations are
// classical MARL, hybrid (quantum actor), hybrid (quantum critic), pure.
struct HybridisationTag {
    bool quantum_actor = false;
    bool quantum_critic = false;
};

struct BundleSpec {
    int n_agents = 2;
    int obs_dim = 0;         // per agent
    int n_actions = 0;
    int global_obs_dim = 0;  // critic input: concatenation of all observations
    HybridisationTag hybrid;
    // Inter-agent preparation for quantum actors: Bell over the two agents'
    // first qubits (N=2) or GHZ over all first qubits (N>=3); Product leaves
    // every agent's register independent.
    qsim::Entanglement entanglement = qsim::Entanglement::Product;
    std::vector<int> actor_hidden{16, 16};  // classical actor ReLU widths
    std::vector<int> critic_hidden{32, 16};
    VqcCoreConfig actor_vqc;
    VqcCoreConfig critic_vqc;

    void validate() const;
    int joint_actor_qubits() const;  // full register when entangled
};

// Table-8-shaped decomposition: `actor` counts one agent's actor, `total`
// is actor + critic.
struct ParamCounts {
    long preprocessing = 0;
    long vqc = 0;
    long readout = 0;
    long actor = 0;
    long critic = 0;
    long total = 0;
};

ParamCounts count_bundle_params(const BundleSpec& spec);

// Per-agent actors plus one centralised critic. Actors execute on local
// observations only; when the actors are quantum and entangled, action
// distributions still come from each agent's own register (its marginal of
// the shared state), so execution stays decentralised.
class PolicyBundle {
public:
    static PolicyBundle build(const BundleSpec& spec, Rng& rng);

    const BundleSpec& spec() const { return spec_; }
    int n_agents() const { return spec_.n_agents; }

    struct AgentForward {
        nets::Mlp::Tape actor_tape;  // classical actor
        nets::Mlp::Tape preproc_tape;
        std::vector<double> encoding;
        std::vector<double> features;
        nets::Mlp::Tape readout_tape;
        std::vector<double> logits;
        std::vector<double> probs;
    };
    struct Forward {
        std::vector<AgentForward> agents;
    };

    Forward forward_actors(const std::vector<std::vector<double>>& observations) const;

    struct ActResult {
        std::vector<int> actions;
        std::vector<double> log_probs;
    };
    // Samples each agent's action from its own distribution.
    ActResult act(const Forward& forward, Rng& rng) const;

    // d log pi_i(action | o_i) over agent i's flat parameters
    // ([preprocessing | vqc | readout] for quantum actors).
    std::vector<double> actor_grad_log_prob(const Forward& forward, int agent,
                                            int action) const;
    // d H(pi_i) over the same layout.
    std::vector<double> actor_grad_entropy(const Forward& forward, int agent) const;

    double critic_value(std::span<const double> global_obs) const;
    std::pair<double, std::vector<double>> critic_value_grad(
        std::span<const double> global_obs) const;

    int actor_param_count() const;
    int critic_param_count() const;
    std::vector<double> actor_params(int agent) const;
    void set_actor_params(int agent, std::span<const double> values);
    std::vector<double> critic_params() const;
    void set_critic_params(std::span<const double> values);

    ParamCounts count_params() const { return count_bundle_params(spec_); }

    // JSON descriptor (architecture + circuit layout) next to one
    // little-endian f64 blob of all parameters.
    void save(const std::string& path_prefix) const;
    static PolicyBundle load(const BundleSpec& spec, const std::string& path_prefix);

private:
    explicit PolicyBundle(BundleSpec spec) : spec_(std::move(spec)) {}

    struct QuantumNet {
        nets::Mlp preprocessing;
        std::vector<double> angles;
        nets::Mlp readout;
    };

    qsim::Statevector run_joint_actor_circuit(const Forward& forward) const;
    std::vector<double> quantum_actor_chain(const Forward& forward, int agent,
                                            std::span<const double> dlogits) const;

    BundleSpec spec_;
    std::vector<nets::Mlp> classical_actors_;
    std::vector<QuantumNet> quantum_actors_;
    nets::Mlp classical_critic_;
    QuantumNet quantum_critic_;
};

}  // namespace qmarl::policies
