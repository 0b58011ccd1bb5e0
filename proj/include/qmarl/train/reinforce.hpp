#pragma once

#include <array>

#include "qmarl/envs/chsh.hpp"
#include "qmarl/policies/chsh_policy.hpp"
#include "qmarl/rng.hpp"

namespace qmarl::train {

struct ReinforceConfig {
    double lr = 0.02;
    double baseline_momentum = 0.95;  // in [0, 1)
    long steps = 20000;
    double entropy_coeff = 0.0;
    int eval_episodes = 1000;  // used by the sampled evaluator
    long eval_every = 200;
};

// Moving-average reward baseline b <- m*b + (1-m)*r.
struct BaselineState {
    double value = 0.0;
};

struct ChshPolicyPair {
    policies::ChshAgentPolicy alice;
    policies::ChshAgentPolicy bob;
    qsim::Entanglement entanglement = qsim::Entanglement::Product;
};

// Quantum pairs start with angles uniform in [0, pi/2) (unbiased action
// marginals under the sin^2 parameterisation); classical pairs with logits
// uniform in [-1, 1).
ChshPolicyPair init_chsh_pair(policies::ChshMode mode, qsim::Entanglement entanglement,
                              Rng& rng);

// One REINFORCE round: sample inputs and a joint action, score it, ascend
// alpha*(r - b)*grad log P plus the entropy bonus, then update the baseline
// (the advantage uses the pre-update baseline).
envs::ChshRound reinforce_update(ChshPolicyPair& pair, BaselineState& baseline,
                                 const ReinforceConfig& cfg, Rng& rng);

struct ChshEvaluation {
    double win_rate = 0.0;
    std::array<double, 4> per_pair{};  // index x*2 + y
};

// Exact evaluation from the joint action tables, averaged over the four
// uniform inputs.
ChshEvaluation evaluate_chsh(const ChshPolicyPair& pair);

// Sampled variant kept for fidelity with the episode-count evaluation.
ChshEvaluation evaluate_chsh_sampled(const ChshPolicyPair& pair, int episodes, Rng& rng);

}  // namespace qmarl::train
