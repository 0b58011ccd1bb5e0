#include "qmarl/envs/coopnav.hpp"

#include <stdexcept>

namespace qmarl::envs {

namespace {

Cell nav_move(Cell from, int action, int grid) {
    Cell to = from;
    switch (action) {
        case kNavNorth: to.y -= 1; break;
        case kNavSouth: to.y += 1; break;
        case kNavEast: to.x += 1; break;
        case kNavWest: to.x -= 1; break;
        case kNavStay: break;
        default: throw std::invalid_argument("coopnav: invalid action");
    }
    if (to.x < 0 || to.x >= grid || to.y < 0 || to.y >= grid) return from;
    return to;
}

}  // namespace

CoopNavState coopnav_reset(const CoopNavConfig& cfg, Rng& rng) {
    if (cfg.n_agents + 1 > cfg.grid * cfg.grid) {
        throw std::invalid_argument("coopnav: grid too small for agents + goal");
    }
    CoopNavState state;
    auto occupied = [&](const Cell& c) {
        for (const Cell& a : state.agents) {
            if (a == c) return true;
        }
        return false;
    };
    for (int i = 0; i < cfg.n_agents; ++i) {
        Cell c;
        do {
            c = {rng.uniform_int(cfg.grid), rng.uniform_int(cfg.grid)};
        } while (occupied(c));
        state.agents.push_back(c);
    }
    // distinct from every agent, so no episode is terminal at reset
    do {
        state.goal = {rng.uniform_int(cfg.grid), rng.uniform_int(cfg.grid)};
    } while (occupied(state.goal));
    state.step = 0;
    return state;
}

CoopNavStepResult coopnav_step(const CoopNavConfig& cfg, const CoopNavState& state,
                               std::span<const int> actions, Rng& rng) {
    if (static_cast<int>(actions.size()) != cfg.n_agents) {
        throw std::invalid_argument("coopnav_step: action arity mismatch");
    }
    CoopNavStepResult result;
    result.next = state;

    for (int i = 0; i < cfg.n_agents; ++i) {
        int action = actions[i];
        if (rng.uniform() < cfg.p_slip) {
            action = rng.uniform_int(cfg.n_actions());
        }
        result.next.agents[i] = nav_move(state.agents[i], action, cfg.grid);
    }

    for (int i = 0; i < cfg.n_agents && !result.collision; ++i) {
        for (int j = i + 1; j < cfg.n_agents; ++j) {
            if (result.next.agents[i] == result.next.agents[j]) {
                result.collision = true;
                break;
            }
        }
    }
    for (const Cell& a : result.next.agents) {
        if (a == result.next.goal) result.success = true;
    }

    result.shared_reward = -cfg.step_penalty;
    if (result.collision) result.shared_reward -= cfg.collision_penalty;
    if (result.success) result.shared_reward += cfg.success_reward;

    result.next.step = state.step + 1;
    result.done = result.success || result.next.step >= cfg.max_steps;
    return result;
}

std::vector<double> coopnav_observe(const CoopNavConfig& cfg,
                                    const CoopNavState& state, int agent) {
    if (agent < 0 || agent >= cfg.n_agents) {
        throw std::out_of_range("coopnav_observe: bad agent index");
    }
    std::vector<double> obs;
    if (cfg.encoding == ObsEncoding::ContinuousNormalised) {
        obs.reserve(2 * (cfg.n_agents + 1));
        const double g = cfg.grid;
        obs.push_back(state.agents[agent].x / g);
        obs.push_back(state.agents[agent].y / g);
        for (int i = 0; i < cfg.n_agents; ++i) {
            if (i == agent) continue;
            obs.push_back(state.agents[i].x / g);
            obs.push_back(state.agents[i].y / g);
        }
        obs.push_back(state.goal.x / g);
        obs.push_back(state.goal.y / g);
        return obs;
    }

    const int cells = cfg.grid * cfg.grid;
    obs.assign((cfg.n_agents + 1) * cells, 0.0);
    auto index = [&](const Cell& c) { return c.y * cfg.grid + c.x; };
    obs[index(state.agents[agent])] = 1.0;
    int plane = 1;
    for (int i = 0; i < cfg.n_agents; ++i) {
        if (i == agent) continue;
        obs[plane * cells + index(state.agents[i])] = 1.0;
        plane += 1;
    }
    obs[plane * cells + index(state.goal)] = 1.0;
    return obs;
}

}  // namespace qmarl::envs
