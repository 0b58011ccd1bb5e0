#include "qmarl/train/reinforce.hpp"

#include <cmath>
#include <vector>

namespace qmarl::train {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

ChshPolicyPair init_chsh_pair(policies::ChshMode mode, qsim::Entanglement entanglement,
                              Rng& rng) {
    ChshPolicyPair pair;
    pair.entanglement = entanglement;
    pair.alice.mode = mode;
    pair.bob.mode = mode;
    for (auto* policy : {&pair.alice, &pair.bob}) {
        for (double& theta : policy->theta) {
            theta = mode == policies::ChshMode::QuantumLocalRotation
                        ? rng.uniform(0.0, kPi / 2)
                        : rng.uniform(-1.0, 1.0);
        }
    }
    return pair;
}

envs::ChshRound reinforce_update(ChshPolicyPair& pair, BaselineState& baseline,
                                 const ReinforceConfig& cfg, Rng& rng) {
    envs::ChshRound round;
    const auto inputs = envs::chsh_sample_inputs(rng);
    round.x = inputs[0];
    round.y = inputs[1];

    const auto table = chsh_joint_action_distribution(pair.alice, pair.bob, round.x,
                                                      round.y, pair.entanglement);
    const int joint = rng.sample_discrete(table.probs);
    round.a = joint & 1;
    round.b = (joint >> 1) & 1;
    round.reward = envs::chsh_step(round.x, round.y, round.a, round.b);

    // both gradient terms are evaluated at the pre-update parameters
    const double advantage = round.reward - baseline.value;
    const auto grad = chsh_log_prob_grad(pair.alice, pair.bob, round.x, round.y,
                                         round.a, round.b, pair.entanglement);
    double step_alice = advantage * grad.d_theta_alice;
    double step_bob = advantage * grad.d_theta_bob;
    if (cfg.entropy_coeff != 0.0) {
        const auto entropy = chsh_entropy_grad(pair.alice, pair.bob, round.x, round.y,
                                               pair.entanglement);
        step_alice += cfg.entropy_coeff * entropy.d_theta_alice;
        step_bob += cfg.entropy_coeff * entropy.d_theta_bob;
    }
    pair.alice.theta[round.x] += cfg.lr * step_alice;
    pair.bob.theta[round.y] += cfg.lr * step_bob;

    baseline.value = cfg.baseline_momentum * baseline.value +
                     (1.0 - cfg.baseline_momentum) * round.reward;
    return round;
}

ChshEvaluation evaluate_chsh(const ChshPolicyPair& pair) {
    ChshEvaluation eval;
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            const auto table =
                chsh_joint_action_distribution(pair.alice, pair.bob, x, y,
                                               pair.entanglement);
            double win = 0.0;
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    if (envs::chsh_step(x, y, a, b) == 1) {
                        win += table.prob(std::vector<int>{a, b});
                    }
                }
            }
            eval.per_pair[x * 2 + y] = win;
            eval.win_rate += 0.25 * win;
        }
    }
    return eval;
}

ChshEvaluation evaluate_chsh_sampled(const ChshPolicyPair& pair, int episodes,
                                     Rng& rng) {
    ChshEvaluation eval;
    std::array<long, 4> wins{};
    std::array<long, 4> counts{};
    for (int i = 0; i < episodes; ++i) {
        const auto inputs = envs::chsh_sample_inputs(rng);
        const auto table = chsh_joint_action_distribution(
            pair.alice, pair.bob, inputs[0], inputs[1], pair.entanglement);
        const int joint = rng.sample_discrete(table.probs);
        const int pair_index = inputs[0] * 2 + inputs[1];
        counts[pair_index] += 1;
        wins[pair_index] +=
            envs::chsh_step(inputs[0], inputs[1], joint & 1, (joint >> 1) & 1);
    }
    long total_wins = 0;
    for (int k = 0; k < 4; ++k) {
        eval.per_pair[k] = counts[k] ? static_cast<double>(wins[k]) / counts[k] : 0.0;
        total_wins += wins[k];
    }
    eval.win_rate = episodes ? static_cast<double>(total_wins) / episodes : 0.0;
    return eval;
}

}  // namespace qmarl::train
