#include "qmarl/train/maa2c.hpp"

#include <cmath>
#include <stdexcept>

#include "qmarl/errors.hpp"

namespace qmarl::train {

AdamBank::AdamBank(const policies::PolicyBundle& bundle, double actor_lr,
                   double critic_lr)
    : critic(bundle.critic_param_count(), critic_lr) {
    for (int i = 0; i < bundle.n_agents(); ++i) {
        actors.emplace_back(bundle.actor_param_count(), actor_lr);
    }
}

EpisodeUpdateStats maa2c_episode_update(policies::PolicyBundle& bundle,
                                        const std::vector<Transition>& trajectory,
                                        const Maa2cConfig& cfg, AdamBank& adam) {
    if (trajectory.empty()) {
        throw std::invalid_argument("maa2c_episode_update: empty trajectory");
    }
    const int n_agents = bundle.n_agents();
    const std::size_t steps = trajectory.size();

    EpisodeUpdateStats stats;
    stats.advantages.resize(steps);
    stats.values.resize(steps);

    std::vector<double> critic_grad(bundle.critic_param_count(), 0.0);
    std::vector<std::vector<double>> actor_grads(
        n_agents, std::vector<double>(bundle.actor_param_count(), 0.0));

    for (std::size_t t = 0; t < steps; ++t) {
        const Transition& tr = trajectory[t];
        if (static_cast<int>(tr.observations.size()) != n_agents) {
            throw std::invalid_argument("maa2c: transition arity mismatch");
        }
        // the critic's global state is exactly the concatenated observations
        std::size_t offset = 0;
        for (const auto& obs : tr.observations) {
            for (double v : obs) {
                if (tr.global_obs.at(offset++) != v) {
                    throw std::invalid_argument(
                        "maa2c: global_obs is not the concatenation of observations");
                }
            }
        }

        const auto [value, value_grad] = bundle.critic_value_grad(tr.global_obs);
        const double next_value =
            tr.done ? 0.0 : bundle.critic_value(tr.next_global_obs);
        const double target = tr.team_reward + cfg.gamma * next_value * (tr.done ? 0.0 : 1.0);
        const double advantage = target - value;
        if (!std::isfinite(advantage)) {
            throw DivergenceError("maa2c: non-finite advantage", static_cast<long>(t));
        }
        stats.values[t] = value;
        stats.advantages[t] = advantage;
        stats.critic_loss += advantage * advantage / static_cast<double>(steps);

        // critic loss sum_t (V - target)^2, target detached
        const double critic_coeff = -2.0 * advantage;
        for (std::size_t i = 0; i < critic_grad.size(); ++i) {
            critic_grad[i] += critic_coeff * value_grad[i];
        }

        const auto forward = bundle.forward_actors(tr.observations);
        for (int agent = 0; agent < n_agents; ++agent) {
            const auto log_grad =
                bundle.actor_grad_log_prob(forward, agent, tr.actions[agent]);
            const double coeff = -advantage;
            auto& grad = actor_grads[agent];
            for (std::size_t i = 0; i < grad.size(); ++i) {
                grad[i] += coeff * log_grad[i];
            }
            if (cfg.entropy_coeff != 0.0) {
                const auto entropy_grad = bundle.actor_grad_entropy(forward, agent);
                const double ecoeff = -cfg.entropy_coeff;
                for (std::size_t i = 0; i < grad.size(); ++i) {
                    grad[i] += ecoeff * entropy_grad[i];
                }
            }
        }
    }

    if (cfg.grad_clip_norm > 0.0) {
        double norm_sq = 0.0;
        for (double g : critic_grad) norm_sq += g * g;
        for (const auto& grad : actor_grads) {
            for (double g : grad) norm_sq += g * g;
        }
        const double norm = std::sqrt(norm_sq);
        if (norm > cfg.grad_clip_norm) {
            stats.clipped = true;
            const double scale = cfg.grad_clip_norm / norm;
            for (double& g : critic_grad) g *= scale;
            for (auto& grad : actor_grads) {
                for (double& g : grad) g *= scale;
            }
        }
    }

    for (int agent = 0; agent < n_agents; ++agent) {
        auto params = bundle.actor_params(agent);
        adam_step(params, actor_grads[agent], adam.actors[agent]);
        bundle.set_actor_params(agent, params);
    }
    auto critic_params = bundle.critic_params();
    adam_step(critic_params, critic_grad, adam.critic);
    bundle.set_critic_params(critic_params);

    return stats;
}

}  // namespace qmarl::train
