#include "qmarl/envs/coingame.hpp"

#include <algorithm>
#include <stdexcept>

namespace qmarl::envs {

namespace {

Cell move(Cell from, int action, int grid) {
    Cell to = from;
    switch (action) {
        case kMoveNorth: to.y -= 1; break;
        case kMoveSouth: to.y += 1; break;
        case kMoveEast: to.x += 1; break;
        case kMoveWest: to.x -= 1; break;
        default: throw std::invalid_argument("coingame: invalid action");
    }
    if (to.x < 0 || to.x >= grid || to.y < 0 || to.y >= grid) return from;
    return to;
}

Cell random_empty_cell(int grid, std::span<const Cell> occupied, Rng& rng) {
    while (true) {
        Cell c{rng.uniform_int(grid), rng.uniform_int(grid)};
        bool clash = false;
        for (const Cell& o : occupied) {
            if (o == c) clash = true;
        }
        if (!clash) return c;
    }
}

}  // namespace

CoinGameState coingame_reset(const CoinGameConfig& cfg, Rng& rng) {
    if (cfg.n_agents + 1 > cfg.grid * cfg.grid) {
        throw std::invalid_argument("coingame: grid too small for agents + coin");
    }
    CoinGameState state;
    for (int i = 0; i < cfg.n_agents; ++i) {
        state.agents.push_back(random_empty_cell(cfg.grid, state.agents, rng));
    }
    state.coin = random_empty_cell(cfg.grid, state.agents, rng);
    state.coin_owner = 0;  // ownership cycles round-robin from agent 0
    state.step = 0;
    return state;
}

CoinGameStepResult coingame_step(const CoinGameConfig& cfg, const CoinGameState& state,
                                 std::span<const int> actions, Rng& rng) {
    if (static_cast<int>(actions.size()) != cfg.n_agents) {
        throw std::invalid_argument("coingame_step: action arity mismatch");
    }
    CoinGameStepResult result;
    result.next = state;
    result.rewards.assign(cfg.n_agents, 0.0);

    for (int i = 0; i < cfg.n_agents; ++i) {
        result.next.agents[i] = move(state.agents[i], actions[i], cfg.grid);
    }

    // simultaneous arrivals: the lowest agent index collects
    for (int i = 0; i < cfg.n_agents; ++i) {
        if (result.next.agents[i] == result.next.coin) {
            result.collector = i;
            break;
        }
    }
    if (result.collector >= 0) {
        result.rewards[result.collector] += 1.0;
        if (result.collector != result.next.coin_owner) {
            result.rewards[result.next.coin_owner] -= 2.0;
        }
        result.next.coin = random_empty_cell(cfg.grid, result.next.agents, rng);
        result.next.coin_owner = (result.next.coin_owner + 1) % cfg.n_agents;
    }

    result.next.step = state.step + 1;
    result.done = result.next.step >= cfg.episode_len;
    return result;
}

std::vector<double> coingame_observe(const CoinGameConfig& cfg,
                                     const CoinGameState& state, int agent) {
    if (agent < 0 || agent >= cfg.n_agents) {
        throw std::out_of_range("coingame_observe: bad agent index");
    }
    const int cells = cfg.grid * cfg.grid;
    std::vector<double> obs(4 * cells, 0.0);
    auto index = [&](const Cell& c) { return c.y * cfg.grid + c.x; };

    obs[index(state.agents[agent])] = 1.0;
    for (int i = 0; i < cfg.n_agents; ++i) {
        if (i != agent) obs[cells + index(state.agents[i])] = 1.0;
    }
    if (state.coin_owner == agent) {
        obs[2 * cells + index(state.coin)] = 1.0;
    } else {
        obs[3 * cells + index(state.coin)] = 1.0;
    }
    return obs;
}

}  // namespace qmarl::envs
