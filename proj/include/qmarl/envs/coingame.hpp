#pragma once

#include <span>
#include <vector>

#include "qmarl/rng.hpp"

namespace qmarl::envs {

struct Cell {
    int x = 0, y = 0;
    bool operator==(const Cell&) const = default;
};

// Four moves; an agent that would leave the grid stays in place.
enum CoinGameAction { kMoveNorth = 0, kMoveSouth = 1, kMoveEast = 2, kMoveWest = 3 };

struct CoinGameConfig {
    int n_agents = 2;
    int grid = 3;  // CG-2: 3x3, CG-4: 5x5
    int episode_len = 150;

    int obs_dim() const { return 4 * grid * grid; }
    int n_actions() const { return 4; }
};

struct CoinGameState {
    std::vector<Cell> agents;
    Cell coin;
    int coin_owner = 0;
    int step = 0;
};

struct CoinGameStepResult {
    CoinGameState next;
    std::vector<double> rewards;  // individual: +1 collect, -2 to a robbed owner
    bool done = false;
    int collector = -1;  // agent that picked up the coin this step, if any
};

CoinGameState coingame_reset(const CoinGameConfig& cfg, Rng& rng);

CoinGameStepResult coingame_step(const CoinGameConfig& cfg, const CoinGameState& state,
                                 std::span<const int> actions, Rng& rng);

// Binary planes flattened to length 4*W*H: own position, other agents,
// coin position when owned by self, coin position when owned by another.
std::vector<double> coingame_observe(const CoinGameConfig& cfg,
                                     const CoinGameState& state, int agent);

}  // namespace qmarl::envs
