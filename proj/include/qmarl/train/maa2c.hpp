#pragma once

#include <vector>

#include "qmarl/dense.hpp"
#include "qmarl/policies/bundle.hpp"

namespace qmarl::train {

struct Maa2cConfig {
    double actor_lr = 3e-4;
    double critic_lr = 1e-3;
    double gamma = 0.95;  // in (0, 1]
    int episode_len = 150;
    long episodes = 3000;
    double entropy_coeff = 0.0;
    double grad_clip_norm = 0.0;  // 0 disables the divergence guard
};

struct Transition {
    std::vector<std::vector<double>> observations;  // per agent
    std::vector<int> actions;
    std::vector<double> rewards;  // per agent; shared tasks replicate the value
    double team_reward = 0.0;     // mean over agents, the critic's target signal
    std::vector<double> global_obs;  // concatenation of all observations
    std::vector<double> next_global_obs;
    bool done = false;
};

// Per-component Adam moments with the two learning rates.
struct AdamBank {
    std::vector<nets::AdamState> actors;
    nets::AdamState critic;

    AdamBank(const policies::PolicyBundle& bundle, double actor_lr, double critic_lr);
};

struct EpisodeUpdateStats {
    std::vector<double> advantages;  // per step, computed before any update
    std::vector<double> values;      // V(s_t) under the pre-update critic
    double critic_loss = 0.0;        // mean squared TD error
    bool clipped = false;            // global-norm guard triggered
};

// One on-policy update over a full episode: advantages from the pre-update
// critic (semi-gradient, detached targets), the critic descends the summed
// squared TD error, each actor ascends the summed advantage-weighted
// log-probabilities plus the entropy bonus.
EpisodeUpdateStats maa2c_episode_update(policies::PolicyBundle& bundle,
                                        const std::vector<Transition>& trajectory,
                                        const Maa2cConfig& cfg, AdamBank& adam);

}  // namespace qmarl::train
